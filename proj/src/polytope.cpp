#include "qlpoly/polytope.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <boost/dynamic_bitset.hpp>
#include <json.hpp>

#include "qlpoly/error.hpp"

namespace qlpoly {

TermList TermList::singletons(std::size_t n) {
    TermList t;
    for (std::size_t i = 0; i < n; ++i) t.terms.push_back({i});
    return t;
}

void TermList::validate(std::size_t index_limit) const {
    std::set<Term> seen;
    for (const auto& term : terms) {
        if (term.empty()) throw DomainError("empty term");
        Term sorted = term;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw DomainError("term repeats an index");
        if (sorted.back() >= index_limit) throw DomainError("term index out of range");
        if (!seen.insert(sorted).second) throw DomainError("duplicate term");
    }
}

TermList parse_terms(std::string_view text, const std::vector<std::string>& names) {
    TermList t;
    auto split = [](std::string_view s, char sep) {
        std::vector<std::string> parts;
        std::string cur;
        for (char c : s) {
            if (c == sep) {
                parts.push_back(cur);
                cur.clear();
            } else if (c != ' ') {
                cur += c;
            }
        }
        parts.push_back(cur);
        return parts;
    };
    for (const auto& term_text : split(text, ';')) {
        if (term_text.empty()) continue;
        Term term;
        for (const auto& name : split(term_text, '&')) {
            auto it = std::find(names.begin(), names.end(), name);
            if (it == names.end()) throw ParseError("unknown atom \"" + name + "\" in terms");
            term.push_back(static_cast<std::size_t>(it - names.begin()));
        }
        std::sort(term.begin(), term.end());
        t.terms.push_back(std::move(term));
    }
    if (t.terms.empty()) throw ParseError("empty term list");
    try {
        t.validate(names.size());
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    return t;
}

std::vector<std::string> term_names(const TermList& t, const std::vector<std::string>& names) {
    std::vector<std::string> out;
    for (const auto& term : t.terms) {
        std::string s;
        for (std::size_t i = 0; i < term.size(); ++i) {
            if (i) s += '&';
            s += names.at(term[i]);
        }
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

RationalVector valuation_vertex(const std::vector<std::uint8_t>& values, const TermList& t) {
    RationalVector x;
    x.reserve(t.size());
    for (const auto& term : t.terms) {
        const bool all = std::all_of(term.begin(), term.end(),
                                     [&](std::size_t i) { return values[i] != 0; });
        x.emplace_back(all ? 1 : 0);
    }
    return x;
}

}  // namespace

VRep build_vertices(const StateSet& s, const TermList& t) {
    if (s.empty()) throw DomainError("cannot build a polytope from an empty state set");
    t.validate(s.logic.atom_count());
    VRep v{t.size(), {}};
    std::set<RationalVector> seen;
    for (const auto& state : s.states) {
        auto x = valuation_vertex(state.values, t);
        if (seen.insert(x).second) v.vertices.push_back(std::move(x));
    }
    return v;
}

VRep classical_polytope(std::size_t n, const TermList& t) {
    if (n == 0) throw DomainError("classical polytope needs at least one event");
    if (n >= 8 * sizeof(unsigned long long)) throw DomainError("too many events");
    t.validate(n);
    std::set<RationalVector> vertices;
    std::vector<std::uint8_t> values(n);
    for (unsigned long long bits = 0; bits < (1ull << n); ++bits) {
        for (std::size_t i = 0; i < n; ++i) values[i] = (bits >> (n - 1 - i)) & 1u;
        vertices.insert(valuation_vertex(values, t));
    }
    return VRep{t.size(), {vertices.begin(), vertices.end()}};
}

// --- double description ---------------------------------------------------

namespace {

using Bits = boost::dynamic_bitset<>;

Integer dot(const IntegerVector& a, const IntegerVector& b) {
    Integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// x <- p*x - q*y, then made primitive.
void combine_into(IntegerVector& x, const Integer& p, const Integer& q, const IntegerVector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = p * x[i] - q * y[i];
    x = primitive(x);
}

struct Ray {
    IntegerVector v;
    Bits zeros;  // processed constraints on which the ray is tight
};

class DualCone {
public:
    DualCone(std::vector<IntegerVector> constraints, AdjacencyTest test)
        : constraints_(std::move(constraints)), test_(test) {
        const std::size_t d = constraints_.empty() ? 0 : constraints_.front().size();
        for (std::size_t i = 0; i < d; ++i) {
            IntegerVector e(d, 0);
            e[i] = 1;
            lineality_.push_back(std::move(e));
        }
    }

    void run() {
        for (std::size_t k = 0; k < constraints_.size(); ++k) add_constraint(k);
    }

    const std::vector<IntegerVector>& lineality() const { return lineality_; }
    std::vector<IntegerVector> rays() const {
        std::vector<IntegerVector> out;
        for (const auto& r : rays_) out.push_back(r.v);
        return out;
    }

private:
    void add_constraint(std::size_t k) {
        const auto& a = constraints_[k];
        for (auto& r : rays_) r.zeros.resize(constraints_.size());

        auto hit = std::find_if(lineality_.begin(), lineality_.end(),
                                [&](const IntegerVector& l) { return dot(a, l) != 0; });
        if (hit != lineality_.end()) {
            IntegerVector b = *hit;
            lineality_.erase(hit);
            Integer s = dot(a, b);
            if (s < 0) {
                for (auto& x : b) x = -x;
                s = -s;
            }
            for (auto& l : lineality_) {
                const Integer t = dot(a, l);
                if (t != 0) combine_into(l, s, t, b);
            }
            for (auto& r : rays_) {
                const Integer t = dot(a, r.v);
                if (t != 0) combine_into(r.v, s, t, b);
                r.zeros.set(k);
            }
            Bits zeros(constraints_.size());
            for (std::size_t j = 0; j < k; ++j) zeros.set(j);
            rays_.push_back(Ray{std::move(b), std::move(zeros)});
            return;
        }

        std::vector<std::size_t> pos, neg;
        std::vector<Integer> value(rays_.size());
        std::vector<Ray> next;
        for (std::size_t i = 0; i < rays_.size(); ++i) {
            value[i] = dot(a, rays_[i].v);
            if (value[i] > 0) pos.push_back(i);
            if (value[i] < 0) neg.push_back(i);
        }
        if (neg.empty()) {
            for (std::size_t i = 0; i < rays_.size(); ++i)
                if (value[i] == 0) rays_[i].zeros.set(k);
            return;
        }

        const std::size_t pointed_dim = constraints_.front().size() - lineality_.size();
        for (auto p : pos) {
            for (auto n : neg) {
                Bits common = rays_[p].zeros & rays_[n].zeros;
                if (!adjacent(common, p, n, pointed_dim)) continue;
                IntegerVector w = rays_[n].v;
                combine_into(w, value[p], value[n], rays_[p].v);
                common.set(k);
                next.push_back(Ray{std::move(w), std::move(common)});
            }
        }
        for (std::size_t i = 0; i < rays_.size(); ++i) {
            if (value[i] < 0) continue;
            if (value[i] == 0) rays_[i].zeros.set(k);
            next.push_back(std::move(rays_[i]));
        }
        rays_ = std::move(next);
    }

    bool adjacent(const Bits& common, std::size_t p, std::size_t n, std::size_t pointed_dim) const {
        if (pointed_dim >= 2 && common.count() + 2 < pointed_dim) return false;
        if (test_ == AdjacencyTest::Algebraic) {
            RationalMatrix rows;
            for (auto j = common.find_first(); j != Bits::npos; j = common.find_next(j))
                rows.push_back(to_rational(constraints_[j]));
            return rank(std::move(rows)) + 2 == pointed_dim;
        }
        for (std::size_t i = 0; i < rays_.size(); ++i) {
            if (i == p || i == n) continue;
            if (common.is_subset_of(rays_[i].zeros)) return false;
        }
        return true;
    }

    std::vector<IntegerVector> constraints_;
    AdjacencyTest test_;
    std::vector<IntegerVector> lineality_;
    std::vector<Ray> rays_;
};

int compare(const IntegerVector& a, const IntegerVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return -1;
        if (b[i] < a[i]) return 1;
    }
    return 0;
}

void sort_unique(std::vector<IntegerVector>& rows) {
    std::sort(rows.begin(), rows.end(),
              [](const IntegerVector& a, const IntegerVector& b) { return compare(a, b) < 0; });
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
}

}  // namespace

namespace {

bool constant_on_hull(RationalVector r, const RationalMatrix& eq, const std::vector<std::size_t>& pivots) {
    for (std::size_t i = 0; i < eq.size(); ++i) {
        const Rational f = r[pivots[i]];
        if (f == 0) continue;
        for (std::size_t j = 0; j < r.size(); ++j) r[j] -= f * eq[i][j];
    }
    return std::all_of(r.begin() + 1, r.end(), [](const Rational& x) { return x == 0; }) && r[0] >= 0;
}

}  // namespace

HRep canonicalize(HRep h) {
    const std::size_t width = h.dim + 1;

    RationalMatrix eq;
    for (const auto& row : h.equalities) eq.push_back(to_rational(row));
    const auto pivots = row_reduce(eq);

    // A second echelon form that pivots on variables first exposes rows that
    // are constant, hence trivially true, on the affine hull.
    RationalMatrix by_variable = eq;
    std::vector<std::size_t> order;
    for (std::size_t j = 1; j < width; ++j) order.push_back(j);
    order.push_back(0);
    const auto variable_pivots = row_reduce(by_variable, order);

    HRep out;
    out.dim = h.dim;
    for (const auto& row : eq) {
        auto z = primitive(row);
        auto lead = std::find_if(z.begin() + 1, z.end(), [](const Integer& x) { return x != 0; });
        const bool flip = lead != z.end() ? *lead < 0 : z[0] < 0;
        if (flip)
            for (auto& x : z) x = -x;
        out.equalities.push_back(std::move(z));
    }

    for (const auto& row : h.inequalities) {
        RationalVector r = to_rational(row);
        for (std::size_t i = 0; i < eq.size(); ++i) {
            const auto col = pivots[i];
            if (r[col] == 0) continue;
            const Rational f = r[col];  // pivot entries of eq are 1
            for (std::size_t j = 0; j < width; ++j) r[j] -= f * eq[i][j];
        }
        if (constant_on_hull(r, by_variable, variable_pivots)) continue;
        out.inequalities.push_back(primitive(r));
    }

    sort_unique(out.equalities);
    sort_unique(out.inequalities);
    return out;
}

HRep double_description(const VRep& v, const DoubleDescriptionOptions& options) {
    if (v.vertices.empty()) throw DomainError("double description needs at least one vertex");

    // Homogenized vertices (1, x), scaled to integers, are the constraint rows
    // of the dual cone {c : c . (1, x) >= 0}.
    std::vector<IntegerVector> constraints;
    for (const auto& x : v.vertices) {
        if (x.size() != v.dim) throw DomainError("vertex dimension mismatch");
        RationalVector h{Rational(1)};
        h.insert(h.end(), x.begin(), x.end());
        constraints.push_back(primitive(h));
    }

    DualCone cone(std::move(constraints), options.adjacency);
    cone.run();

    HRep h;
    h.dim = v.dim;
    h.equalities = cone.lineality();
    h.inequalities = cone.rays();
    return canonicalize(std::move(h));
}

// --- checks --------------------------------------------------------------

namespace {

Rational evaluate(const RationalVector& row, const RationalVector& x) {
    Rational s = row[0];
    for (std::size_t i = 0; i < x.size(); ++i) s += row[i + 1] * x[i];
    return s;
}

bool satisfies(const RationalVector& row, const RationalVector& x, RelationKind kind) {
    const Rational value = evaluate(row, x);
    return kind == RelationKind::Equality ? value == 0 : value >= 0;
}

}  // namespace

bool check_relation(const VRep& v, const RationalVector& row, RelationKind kind) {
    if (row.size() != v.dim + 1)
        throw DomainError("relation has " + std::to_string(row.size()) + " coefficients, expected " +
                          std::to_string(v.dim + 1));
    return std::all_of(v.vertices.begin(), v.vertices.end(),
                       [&](const RationalVector& x) { return satisfies(row, x, kind); });
}

bool check_relation(const VRep& v, const IntegerVector& row, RelationKind kind) {
    return check_relation(v, to_rational(row), kind);
}

std::size_t affine_hull_dim(const VRep& v) {
    if (v.vertices.empty()) throw DomainError("affine hull of an empty vertex set");
    RationalMatrix diffs;
    for (std::size_t i = 1; i < v.vertices.size(); ++i) {
        RationalVector d(v.dim);
        for (std::size_t j = 0; j < v.dim; ++j) d[j] = v.vertices[i][j] - v.vertices[0][j];
        diffs.push_back(std::move(d));
    }
    return rank(std::move(diffs));
}

bool membership(const HRep& h, const RationalVector& point) {
    if (point.size() != h.dim)
        throw DomainError("point has dimension " + std::to_string(point.size()) + ", expected " +
                          std::to_string(h.dim));
    for (const auto& row : h.equalities)
        if (!satisfies(to_rational(row), point, RelationKind::Equality)) return false;
    for (const auto& row : h.inequalities)
        if (!satisfies(to_rational(row), point, RelationKind::Inequality)) return false;
    return true;
}

HullCertificate certify(const VRep& v, const HRep& h) {
    HullCertificate cert;
    const std::size_t k = affine_hull_dim(v);

    for (std::size_t i = 0; i < h.equalities.size(); ++i) {
        if (!check_relation(v, h.equalities[i], RelationKind::Equality)) {
            cert.sound = false;
            cert.problems.push_back("equality " + std::to_string(i) + " violated by a vertex");
        }
    }
    RationalMatrix eq_rows;
    for (const auto& row : h.equalities) eq_rows.push_back(to_rational(row));
    if (rank(eq_rows) != v.dim - k) {
        cert.equalities_complete = false;
        cert.problems.push_back("equality rank differs from codimension of the affine hull");
    }

    for (std::size_t i = 0; i < h.inequalities.size(); ++i) {
        const auto row = to_rational(h.inequalities[i]);
        RationalMatrix tight;
        for (const auto& x : v.vertices) {
            const Rational value = evaluate(row, x);
            if (value < 0) {
                cert.sound = false;
                cert.problems.push_back("inequality " + std::to_string(i) + " violated by a vertex");
            }
            if (value == 0) {
                RationalVector hom{Rational(1)};
                hom.insert(hom.end(), x.begin(), x.end());
                tight.push_back(std::move(hom));
            }
        }
        // k affinely independent tight vertices span a rank-k homogenized set.
        if (rank(std::move(tight)) != k) {
            cert.tight = false;
            cert.problems.push_back("inequality " + std::to_string(i) + " is not a facet");
        }
    }
    return cert;
}

// --- formats ---------------------------------------------------------------

std::vector<std::string> default_names(std::size_t dim) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= dim; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

std::string format_relation(const IntegerVector& row, RelationKind kind,
                            const std::vector<std::string>& names) {
    std::ostringstream os;
    bool first = true;
    auto signed_str = [](const Integer& z) { return (z > 0 ? "+" : "") + z.get_str(); };
    if (row[0] != 0) {
        os << signed_str(row[0]);
        first = false;
    }
    for (std::size_t i = 1; i < row.size(); ++i) {
        if (row[i] == 0) continue;
        if (!first) os << ' ';
        os << signed_str(row[i]) << "*P[" << names.at(i - 1) << ']';
        first = false;
    }
    if (first) os << '0';
    os << (kind == RelationKind::Equality ? " = 0" : " >= 0");
    return os.str();
}

std::string to_text(const HRep& h, const std::vector<std::string>& names) {
    std::string out;
    for (const auto& row : h.equalities) out += format_relation(row, RelationKind::Equality, names) + '\n';
    for (const auto& row : h.inequalities)
        out += format_relation(row, RelationKind::Inequality, names) + '\n';
    return out;
}

std::vector<ParsedRelation> parse_relations(std::string_view text,
                                            const std::vector<std::string>& names) {
    std::vector<ParsedRelation> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream tokens(line);
        std::vector<std::string> parts;
        for (std::string tok; tokens >> tok;) parts.push_back(tok);
        if (parts.empty()) continue;

        auto fail = [&](const std::string& why) {
            throw ParseError("relation line " + std::to_string(line_no) + ": " + why);
        };
        if (parts.size() < 3 || parts.back() != "0") fail("expected '= 0' or '>= 0' at end");
        const auto& op = parts[parts.size() - 2];
        ParsedRelation rel{IntegerVector(names.size() + 1, 0),
                           op == "=" ? RelationKind::Equality : RelationKind::Inequality};
        if (op != "=" && op != ">=") fail("unknown operator \"" + op + "\"");

        auto parse_int = [&](std::string s) {
            if (!s.empty() && s[0] == '+') s.erase(0, 1);
            Integer z;
            if (s.empty() || z.set_str(s, 10) != 0) fail("malformed coefficient \"" + s + "\"");
            return z;
        };
        for (std::size_t i = 0; i + 2 < parts.size(); ++i) {
            const auto& tok = parts[i];
            const auto star = tok.find("*P[");
            if (star == std::string::npos) {
                rel.row[0] += parse_int(tok);
                continue;
            }
            if (tok.back() != ']') fail("malformed term \"" + tok + "\"");
            const auto name = tok.substr(star + 3, tok.size() - star - 4);
            auto it = std::find(names.begin(), names.end(), name);
            if (it == names.end()) fail("unknown term \"" + name + "\"");
            rel.row[1 + static_cast<std::size_t>(it - names.begin())] += parse_int(tok.substr(0, star));
        }
        out.push_back(std::move(rel));
    }
    return out;
}

std::string to_json(const HRep& h, const std::vector<std::string>& names) {
    auto rows = [](const std::vector<IntegerVector>& in) {
        auto arr = nlohmann::json::array();
        for (const auto& row : in) {
            auto r = nlohmann::json::array();
            for (const auto& z : row) r.push_back(z.get_str());
            arr.push_back(std::move(r));
        }
        return arr;
    };
    nlohmann::json doc;
    doc["dim"] = h.dim;
    doc["terms"] = names;
    doc["equalities"] = rows(h.equalities);
    doc["inequalities"] = rows(h.inequalities);
    return doc.dump();
}

std::string to_json(const VRep& v, const std::vector<std::string>& names) {
    nlohmann::json doc;
    doc["dim"] = v.dim;
    if (!names.empty()) doc["terms"] = names;
    auto rows = nlohmann::json::array();
    for (const auto& x : v.vertices) {
        auto r = nlohmann::json::array();
        for (const auto& q : x) r.push_back(q.get_str());
        rows.push_back(std::move(r));
    }
    doc["vertices"] = std::move(rows);
    return doc.dump();
}

NamedVRep parse_vrep(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) throw ParseError("VRep must be an object");
    for (const auto& [key, value] : doc.items())
        if (key != "dim" && key != "vertices" && key != "terms") throw ParseError("unknown key \"" + key + "\"");
    if (!doc.contains("dim") || !doc["dim"].is_number_unsigned())
        throw ParseError("VRep needs a nonnegative integer \"dim\"");
    if (!doc.contains("vertices") || !doc["vertices"].is_array())
        throw ParseError("VRep needs a \"vertices\" array");

    NamedVRep out;
    out.vrep.dim = doc["dim"].get<std::size_t>();
    for (const auto& row : doc["vertices"]) {
        if (!row.is_array() || row.size() != out.vrep.dim)
            throw ParseError("vertex must be an array of " + std::to_string(out.vrep.dim) + " rationals");
        RationalVector x;
        for (const auto& q : row) {
            if (q.is_string()) x.push_back(parse_rational(q.get<std::string>()));
            else if (q.is_number_integer()) x.emplace_back(q.get<long>());
            else throw ParseError("coordinates must be rational strings");
        }
        out.vrep.vertices.push_back(std::move(x));
    }
    std::set<RationalVector> seen(out.vrep.vertices.begin(), out.vrep.vertices.end());
    if (seen.size() != out.vrep.vertices.size()) throw ParseError("duplicate vertex");

    if (doc.contains("terms")) {
        for (const auto& n : doc["terms"]) {
            if (!n.is_string()) throw ParseError("term names must be strings");
            out.names.push_back(n.get<std::string>());
        }
        if (out.names.size() != out.vrep.dim) throw ParseError("term name count differs from dim");
    } else {
        out.names = default_names(out.vrep.dim);
    }
    return out;
}

}  // namespace qlpoly
