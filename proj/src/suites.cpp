#include "qlpoly/suites.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "qlpoly/cheats.hpp"
#include "qlpoly/error.hpp"
#include "qlpoly/logic.hpp"
#include "qlpoly/polytope.hpp"
#include "qlpoly/quantum_ops.hpp"
#include "qlpoly/state_enum.hpp"

namespace qlpoly {

const std::vector<std::vector<int>>& ks14_reference_states() {
    static const std::vector<std::vector<int>> rows = {
        {1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1}, {1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0, 0, 0},
        {1, 0, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 0}, {0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 1},
        {0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 1}, {0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 0, 1, 0},
        {0, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0}, {0, 1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 0},
        {0, 1, 0, 0, 1, 0, 0, 1, 0, 1, 0, 1, 0}, {0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1},
        {0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 1}, {0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 1},
        {0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 1, 0}, {0, 0, 1, 0, 0, 1, 0, 1, 0, 1, 0, 1, 0},
    };
    return rows;
}

namespace {

class Recorder {
public:
    void check(std::string name, bool ok, std::string detail = {}) {
        checks_.push_back({std::move(name), ok, std::move(detail)});
    }
    void close(std::string name, double got, double want, double tol) {
        std::ostringstream os;
        os.precision(15);
        os << "got " << got << ", want " << want << " +/- " << tol;
        check(std::move(name), std::abs(got - want) <= tol, os.str());
    }
    std::vector<SuiteCheck> take() { return std::move(checks_); }

private:
    std::vector<SuiteCheck> checks_;
};

// Row c0 + sum c_i P_i with P indexed from 1.
IntegerVector relation(std::size_t dim, long constant, std::initializer_list<std::pair<int, long>> terms) {
    IntegerVector row(dim + 1, 0);
    row[0] = constant;
    for (auto [i, c] : terms) row[static_cast<std::size_t>(i)] += c;
    return row;
}

std::vector<SuiteCheck> mo3_suite() {
    Recorder r;
    const auto structure = builtin("mo3");
    const auto& logic = structure.logic;
    r.check("six atoms in three blocks", logic.atom_count() == 6 && logic.block_count() == 3);

    // Three disjoint two-atom blocks admit 2^3 block-consistent valuations;
    // the automaton realizes three of them, one per ground state.
    const auto states = enumerate_states(logic);
    r.check("eight block-consistent valuations", states.size() == 8, std::to_string(states.size()) + " states");
    StateSet realized{logic, ground_state_valuations(*structure.partitions)};
    r.check("three automaton-state valuations", realized.size() == 3);

    const auto names = logic.atoms;
    const auto terms = parse_terms("a1;a2;a3", names);
    const auto v = build_vertices(realized, terms);
    const auto h = double_description(v);
    HRep want{3, {relation(3, -1, {{1, 1}, {2, 1}, {3, 1}})},
              {relation(3, 0, {{1, 1}}), relation(3, 0, {{2, 1}}), relation(3, 0, {{3, 1}})}};
    r.check("hull is P1+P2+P3 = 1 with P_i >= 0", h == canonicalize(want), to_text(h, term_names(terms, names)));
    r.check("hull certificates", certify(v, h).ok());

    const auto cube = build_vertices(states, terms);
    r.check("block-consistent valuations span the unit cube", cube.vertices.size() == 8 &&
                                                                   double_description(cube).inequalities.size() == 6);
    return r.take();
}

std::vector<SuiteCheck> ks14_suite() {
    Recorder r;
    const auto structure = builtin("ks14");
    const auto& logic = structure.logic;
    r.check("logic is valid", validate_logic(logic).ok());
    const auto states = enumerate_states(logic);
    r.check("fourteen two-valued states", states.size() == 14, std::to_string(states.size()) + " states");

    std::set<std::vector<int>> found, table(ks14_reference_states().begin(), ks14_reference_states().end());
    for (const auto& s : states.states) found.insert(std::vector<int>(s.values.begin(), s.values.end()));
    r.check("states equal the reference truth table", found == table);

    // The embedding, with states indexed by ground state, reproduces the cell labels.
    const auto ground = ground_state_valuations(*structure.partitions);
    std::vector<std::size_t> ground_of(states.size(), states.size());
    for (std::size_t g = 0; g < ground.size(); ++g)
        for (std::size_t i = 0; i < states.size(); ++i)
            if (states.states[i] == ground[g]) ground_of[i] = g;
    const bool bijective = std::set<std::size_t>(ground_of.begin(), ground_of.end()).size() == 14 &&
                           std::find(ground_of.begin(), ground_of.end(), states.size()) == ground_of.end();
    r.check("states correspond one-to-one to automaton states", bijective);
    if (bijective) {
        const auto image = boolean_embedding(states);
        bool labels = true;
        for (std::size_t b = 0; b < logic.blocks.size(); ++b)
            for (std::size_t c = 0; c < logic.blocks[b].size(); ++c) {
                std::set<std::size_t> mapped;
                for (auto i : image[logic.blocks[b][c]]) mapped.insert(ground_of[i]);
                const auto& cell = structure.partitions->partitions[b][c];
                labels = labels && mapped == std::set<std::size_t>(cell.begin(), cell.end());
            }
        r.check("embedding reproduces the atom labels", labels);
    }

    const auto v = build_vertices(states, TermList::singletons(13));
    const std::vector<std::pair<std::string, IntegerVector>> eqs = {
        {"P1+P2+P3 = 1", relation(13, -1, {{1, 1}, {2, 1}, {3, 1}})},
        {"P4+P10+P13 = 1", relation(13, -1, {{4, 1}, {10, 1}, {13, 1}})},
        {"P1+P2-P4+P6+P7 = 1", relation(13, -1, {{1, 1}, {2, 1}, {4, -1}, {6, 1}, {7, 1}})},
        {"-P2+P4-P6+P8-P10+P12 = 0", relation(13, 0, {{2, -1}, {4, 1}, {6, -1}, {8, 1}, {10, -1}, {12, 1}})},
        {"P1+P2-P4+P6-P8+P10+P11 = 1",
         relation(13, -1, {{1, 1}, {2, 1}, {4, -1}, {6, 1}, {8, -1}, {10, 1}, {11, 1}})},
        {"P1+P2-P4-P5 = 0", relation(13, 0, {{1, 1}, {2, 1}, {4, -1}, {5, -1}})},
        {"-P1-P2+P4-P6+P8+P9 = 0", relation(13, 0, {{1, -1}, {2, -1}, {4, 1}, {6, -1}, {8, 1}, {9, 1}})},
    };
    for (const auto& [name, row] : eqs) r.check(name, check_relation(v, row, RelationKind::Equality));
    for (std::size_t b = 0; b < logic.blocks.size(); ++b) {
        IntegerVector row(14, 0);
        row[0] = -1;
        for (auto a : logic.blocks[b]) row[a + 1] = 1;
        r.check("context " + std::to_string(b + 1) + " sums to one", check_relation(v, row, RelationKind::Equality));
    }
    const auto h = double_description(v);
    r.check("hull certificates", certify(v, h).ok());
    return r.take();
}

std::vector<SuiteCheck> ch_suite() {
    Recorder r;
    const std::vector<std::string> events = {"A1", "A2", "B1", "B2"};
    const auto terms = parse_terms("A1;A2;B1;B2;A1&B1;A1&B2;A2&B1;A2&B2", events);
    const auto v = classical_polytope(4, terms);
    r.check("sixteen vertices in dimension eight", v.vertices.size() == 16 && v.dim == 8);
    const auto h = double_description(v);
    // Coordinates: 1 A1, 2 A2, 3 B1, 4 B2, 5 A1B1, 6 A1B2, 7 A2B1, 8 A2B2.
    const auto upper = relation(8, 0, {{1, 1}, {4, 1}, {5, -1}, {6, -1}, {7, 1}, {8, -1}});
    const auto lower = relation(8, 1, {{1, -1}, {4, -1}, {5, 1}, {6, 1}, {7, -1}, {8, 1}});
    auto has = [&](const IntegerVector& row) {
        return std::find(h.inequalities.begin(), h.inequalities.end(), row) != h.inequalities.end();
    };
    r.check("upper CH bound is a facet", has(upper));
    r.check("lower CH bound is a facet", has(lower));
    r.check("hull certificates", certify(v, h).ok());
    r.check("full-dimensional", h.equalities.empty());

    // The same facets hold on the builtin four-event logic.
    const auto logic = builtin("ch-classical").logic;
    const auto embedded = build_vertices(enumerate_states(logic),
                                         parse_terms("A1;A2;B1;B2;A1&B1;A1&B2;A2&B1;A2&B2", logic.atoms));
    bool subset = true;
    for (const auto& row : h.inequalities) subset = subset && check_relation(embedded, row, RelationKind::Inequality);
    r.check("builtin ch-classical logic satisfies every facet", subset);
    return r.take();
}

std::vector<SuiteCheck> eq2_suite() {
    Recorder r;
    const Complex i(0.0, 1.0);
    const auto a = ComplexMatrix::diagonal({2.0, i});
    r.check("diag(2,i) is normal", is_normal(a));
    const auto cart = cartesian(a);
    r.close("B = diag(2,0)", (cart.real_part - ComplexMatrix::diagonal({2.0, 0.0})).max_norm(), 0.0, 1e-12);
    r.close("C = diag(0,1)", (cart.imag_part - ComplexMatrix::diagonal({0.0, 1.0})).max_norm(), 0.0, 1e-12);
    const auto pol = polar(a);
    r.close("D = diag(1,i)", (pol.unitary - ComplexMatrix::diagonal({1.0, i})).max_norm(), 0.0, 1e-12);
    r.close("E = diag(2,1)", (pol.positive - ComplexMatrix::diagonal({2.0, 1.0})).max_norm(), 0.0, 1e-12);
    r.close("[B,C] = 0", commutator(cart.real_part, cart.imag_part).max_norm(), 0.0, 1e-12);
    r.close("[D,E] = 0", commutator(pol.unitary, pol.positive).max_norm(), 0.0, 1e-12);
    return r.take();
}

std::vector<SuiteCheck> cheats_suite() {
    Recorder r;
    const auto q = CheatTransform::quantum();
    const auto c = CheatTransform::classical();
    r.close("delta(pi/4) = pi/3", q.forward(kPi / 4), kPi / 3, 1e-12);
    r.close("phi(pi/3) = pi/4", c.forward(kPi / 3), kPi / 4, 1e-12);
    r.check("delta(pi/4)+delta(pi/4) != delta(pi/2)",
            std::abs(2 * q.forward(kPi / 4) - q.forward(kPi / 2)) > 1e-12);

    double worst = 0.0;
    const auto cheat_cl = parse_law("cheat-quantum");
    const auto cheat_qm = parse_law("cheat-classical");
    for (int k = 0; k <= 1000; ++k) {
        const double x = kPi * k / 1000.0;
        const double s = std::sin(x / 2);
        worst = std::max(worst, std::abs(cheat_cl(x) - s * s));
        worst = std::max(worst, std::abs(cheat_qm(x) - x / kPi));
        worst = std::max(worst, std::abs(q.forward(q.inverse(x)) - x));
        worst = std::max(worst, std::abs(c.forward(c.inverse(x)) - x));
    }
    r.close("cheated-law identities and round trips", worst, 0.0, 1e-12);

    const ChAngles listed{0, kPi / 4, kPi / 2, 3 * kPi / 4};
    const double s1 = std::sin(kPi / 16), s3 = std::sin(3 * kPi / 16);
    r.close("CH, listed angles, half convention", ch_value(cheat_cl, listed, ChConvention::Half).s,
            s1 * s1 + s3 * s3 - 1.0, 1e-12);
    r.close("CH, listed angles, full convention", ch_value(cheat_cl, listed, ChConvention::Full).s, 0.0, 1e-12);
    // On x <= pi/3 the maximum sits at the endpoint: S(pi/3) = 1/4.
    const auto scan = scan_ch(cheat_cl, ChConvention::Full, 1e-4);
    r.close("CH scan maximum", scan.max_s, 0.25, 1e-4);
    r.close("CH scan argmax", scan.x, kPi / 3, 1e-3);
    const ChAngles stq_angles{0, 0.65 * kPi, 0.3 * kPi, 0.9 * kPi};
    r.close("CH, step-limit law", ch_value(ProbabilityLaw::stq_limit(), stq_angles, ChConvention::Full).s, 2.0, 1e-9);
    for (int n : {0, 1, 11, 50})
        r.check("stq" + std::to_string(n) + "(pi/2) = 1/2", ProbabilityLaw::stq(n)(kPi / 2) == 0.5);
    return r.take();
}

}  // namespace

std::vector<std::string> suite_names() { return {"mo3", "ks14", "ch", "eq2", "cheats"}; }

std::vector<SuiteCheck> run_suite(std::string_view name) {
    if (name == "mo3") return mo3_suite();
    if (name == "ks14") return ks14_suite();
    if (name == "ch") return ch_suite();
    if (name == "eq2") return eq2_suite();
    if (name == "cheats") return cheats_suite();
    throw DomainError("unknown suite \"" + std::string(name) + "\"");
}

}  // namespace qlpoly
