#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "qlpoly/error.hpp"
#include "qlpoly/state_enum.hpp"
#include "qlpoly/suites.hpp"

using namespace qlpoly;

namespace {

// Every 0/1 vector with exactly one 1 per block, in lexicographic order.
std::vector<TwoValuedState> brute_force(const Logic& logic) {
    const std::size_t n = logic.atom_count();
    std::vector<TwoValuedState> out;
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
        TwoValuedState s;
        s.values.resize(n);
        for (std::size_t a = 0; a < n; ++a) s.values[a] = (mask >> a) & 1u;
        bool ok = true;
        for (const auto& b : logic.blocks) {
            int ones = 0;
            for (auto a : b) ones += s.values[a];
            ok = ok && ones == 1;
        }
        if (ok) out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<Logic> random_logic(std::mt19937& rng, std::size_t n) {
    Logic logic;
    for (std::size_t a = 0; a < n; ++a) logic.atoms.push_back("x" + std::to_string(a));
    std::vector<int> covered(n, 0);
    std::uniform_int_distribution<std::size_t> atom(0, n - 1), size(2, 4);
    for (int attempt = 0; attempt < 400; ++attempt) {
        if (std::all_of(covered.begin(), covered.end(), [](int c) { return c > 0; }) && attempt % 3 == 0) break;
        std::set<std::size_t> pick;
        const auto k = std::min(size(rng), n);
        // Prefer seeding with an uncovered atom so the logic closes quickly.
        for (std::size_t a = 0; a < n; ++a)
            if (!covered[a]) {
                pick.insert(a);
                break;
            }
        while (pick.size() < k) pick.insert(atom(rng));
        Block b(pick.begin(), pick.end());
        bool fits = true;
        for (const auto& other : logic.blocks) {
            std::size_t common = 0;
            for (auto a : b) common += std::count(other.begin(), other.end(), a);
            fits = fits && common <= 1 && !(common == b.size() && b.size() == other.size());
        }
        if (!fits) continue;
        for (auto a : b) covered[a] = 1;
        logic.blocks.push_back(std::move(b));
    }
    if (!validate_logic(logic).ok()) return std::nullopt;
    return logic;
}

}  // namespace

TEST_CASE("random logics agree with the exhaustive oracle") {
    std::size_t checked = 0;
    for (unsigned seed = 1; seed <= 300; ++seed) {
        std::mt19937 rng(seed);
        const std::size_t n = 3 + seed % 10;  // up to 12 atoms
        const auto logic = random_logic(rng, n);
        if (!logic) continue;
        CAPTURE(seed);
        const auto want = brute_force(*logic);
        const auto got = enumerate_states(*logic);
        CHECK(got.states == want);
        CHECK(enumerate_states(*logic, 4).states == want);
        ++checked;
    }
    CHECK(checked > 150);
}

TEST_CASE("ks14 has the fourteen reference states") {
    const auto logic = builtin("ks14").logic;
    const auto s = enumerate_states(logic);
    REQUIRE(s.size() == 14);
    CHECK(s.states == brute_force(logic));
    std::set<std::vector<int>> got, want(ks14_reference_states().begin(), ks14_reference_states().end());
    for (const auto& st : s.states) got.insert({st.values.begin(), st.values.end()});
    CHECK(got == want);
    CHECK(std::is_sorted(s.states.begin(), s.states.end()));
    CHECK(enumerate_states(logic, 8).states == s.states);
}

TEST_CASE("mo3 block structure has eight states, the automaton three") {
    const auto mo3 = builtin("mo3");
    CHECK(enumerate_states(mo3.logic).size() == 8);
    auto ground = ground_state_valuations(*mo3.partitions);
    CHECK(ground.size() == 3);
    CHECK(std::set<TwoValuedState>(ground.begin(), ground.end()).size() == 3);
}

TEST_CASE("ground-state valuations are states of the partition logic") {
    const auto ks = builtin("ks14");
    const auto logic = from_partitions(*ks.partitions);
    const auto all = enumerate_states(logic);
    for (const auto& g : ground_state_valuations(*ks.partitions))
        CHECK(std::binary_search(all.states.begin(), all.states.end(), g));
    CHECK(all.size() == 14);
}

TEST_CASE("embedding reproduces the ks14 cell labels") {
    const auto ks = builtin("ks14");
    const auto s = enumerate_states(ks.logic);
    const auto ground = ground_state_valuations(*ks.partitions);
    std::vector<std::size_t> to_ground(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        to_ground[i] = std::find(ground.begin(), ground.end(), s.states[i]) - ground.begin();
    const auto image = boolean_embedding(s);
    auto label = [&](const std::string& atom) {
        std::set<std::size_t> out;
        for (auto i : image[*ks.logic.find_atom(atom)]) out.insert(to_ground[i] + 1);
        return out;
    };
    CHECK(label("a1") == std::set<std::size_t>{1, 2, 3});
    CHECK(label("a13") == std::set<std::size_t>{1, 4, 5, 10, 11, 12});
}

TEST_CASE("separation and unitality") {
    const auto ks = enumerate_states(builtin("ks14").logic);
    CHECK(is_separating(ks).separating);
    CHECK(is_unital(ks).unital);

    Logic pair{{"a", "b", "c", "d"}, {{0, 1}, {2, 3}}};
    const auto s = enumerate_states(pair);
    CHECK(s.size() == 4);
    CHECK(is_separating(s).separating);

    // Two atoms that always agree.
    Logic twin{{"a", "b", "c"}, {{0, 1}, {1, 2}}};
    const auto t = enumerate_states(twin);
    const auto sep = is_separating(t);
    CHECK_FALSE(sep.separating);
    REQUIRE(sep.witness.has_value());
    CHECK(*sep.witness == std::pair<AtomIndex, AtomIndex>{0, 2});
}

TEST_CASE("empty and invalid inputs") {
    // An odd cycle of two-atom blocks admits no assignment.
    Logic odd{{"a", "b", "c"}, {{0, 1}, {1, 2}, {0, 2}}};
    const auto s = enumerate_states(odd);
    CHECK(s.empty());
    CHECK_THROWS_AS(boolean_embedding(s), DomainError);
    CHECK_FALSE(is_unital(s).unital);

    Logic invalid{{"a", "b"}, {{0}}};
    CHECK_THROWS_AS(enumerate_states(invalid), DomainError);
}

TEST_CASE("output formats") {
    const auto s = enumerate_states(builtin("ks14").logic);
    const auto table = truth_table(s);
    CHECK(std::count(table.begin(), table.end(), '\n') == 15);
    CHECK(table.find("a13") != std::string::npos);
    CHECK(to_json(s).find("\"states\"") != std::string::npos);
}
