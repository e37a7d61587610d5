#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qlpoly/rational.hpp"
#include "qlpoly/state_enum.hpp"

namespace qlpoly {

/// A coordinate of a correlation polytope: the conjunction of the listed
/// atoms (events). Singletons are plain probabilities. Indices are sorted.
using Term = std::vector<std::size_t>;

struct TermList {
    std::vector<Term> terms;

    std::size_t size() const noexcept { return terms.size(); }

    /// {0}, {1}, ..., {n-1}.
    static TermList singletons(std::size_t n);
    /// Throws DomainError on empty or duplicate terms and indices >= limit.
    void validate(std::size_t index_limit) const;
};

/// Parses "a1;a2;a1&a13": terms separated by ';', conjuncts by '&', names
/// resolved against `names`. Throws ParseError on unknown names.
TermList parse_terms(std::string_view text, const std::vector<std::string>& names);
/// "a1", "a1&a13", ... for each term.
std::vector<std::string> term_names(const TermList& t, const std::vector<std::string>& names);

struct VRep {
    std::size_t dim = 0;
    std::vector<RationalVector> vertices;
};

/// Rows are (c0, c1, ..., c_dim): c0 + sum c_i x_i = 0 (equalities) or >= 0
/// (inequalities). Canonical rows are coprime integers.
struct HRep {
    std::size_t dim = 0;
    std::vector<IntegerVector> equalities;
    std::vector<IntegerVector> inequalities;

    bool operator==(const HRep&) const = default;
};

enum class RelationKind { Equality, Inequality };

/// One 0/1 vertex per two-valued state (term coordinate = product of the
/// state's values over the term); duplicates merged, state order kept.
VRep build_vertices(const StateSet& s, const TermList& t);

/// The 2^n valuations of n independent events with coordinates per term,
/// duplicates merged, sorted lexicographically.
VRep classical_polytope(std::size_t n, const TermList& t);

enum class AdjacencyTest { Combinatorial, Algebraic };

struct DoubleDescriptionOptions {
    AdjacencyTest adjacency = AdjacencyTest::Combinatorial;
};

/// Exact H-representation of conv(v) by the double description method on the
/// homogenized cone. Equalities come from the lineality space of the dual
/// cone; the result is in canonical form (see canonicalize).
HRep double_description(const VRep& v, const DoubleDescriptionOptions& options = {});

/// Canonical form: equalities in reduced row echelon form (constant column
/// pivoted first), each scaled to coprime integers with its first nonzero
/// variable coefficient positive; inequalities reduced modulo the equality
/// pivots, scaled to coprime integers by a positive factor. Trivial rows are
/// dropped, duplicates removed, both lists sorted lexicographically.
HRep canonicalize(HRep h);

bool check_relation(const VRep& v, const RationalVector& row, RelationKind kind);
bool check_relation(const VRep& v, const IntegerVector& row, RelationKind kind);

/// Dimension of the affine hull of the vertices.
std::size_t affine_hull_dim(const VRep& v);

bool membership(const HRep& h, const RationalVector& point);

struct HullCertificate {
    bool sound = true;     ///< every vertex satisfies every row
    bool tight = true;     ///< every inequality is a facet
    bool equalities_complete = true;  ///< equality rank = dim - affine dim
    std::vector<std::string> problems;

    bool ok() const noexcept { return sound && tight && equalities_complete; }
};

/// Soundness and facet-tightness certificates for h against v.
HullCertificate certify(const VRep& v, const HRep& h);

// --- formats -------------------------------------------------------------

/// `-1 +1*P[a1] +1*P[a2] = 0` / `+1*P[a1] >= 0`, one row per line,
/// equalities first.
std::string to_text(const HRep& h, const std::vector<std::string>& names);
std::string format_relation(const IntegerVector& row, RelationKind kind,
                            const std::vector<std::string>& names);

struct ParsedRelation {
    IntegerVector row;
    RelationKind kind;
};
/// Parses lines in the to_text format (blank lines and '#' comments skipped).
std::vector<ParsedRelation> parse_relations(std::string_view text,
                                            const std::vector<std::string>& names);

std::string to_json(const HRep& h, const std::vector<std::string>& names);
std::string to_json(const VRep& v, const std::vector<std::string>& names = {});

struct NamedVRep {
    VRep vrep;
    std::vector<std::string> names;  ///< term names; "x1".."xd" if absent
};
/// `{"dim":d,"vertices":[["0","1/2",...],...]}` with optional "terms".
NamedVRep parse_vrep(std::string_view text);

/// "x1", ..., "xd".
std::vector<std::string> default_names(std::size_t dim);

}  // namespace qlpoly
