#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlpoly/logic.hpp"

namespace qlpoly {

/// Dispersion-free state: one bit per atom, exactly one 1 per block.
struct TwoValuedState {
    std::vector<std::uint8_t> values;

    bool operator[](AtomIndex a) const { return values[a] != 0; }
    auto operator<=>(const TwoValuedState&) const = default;
};

/// All two-valued states of a logic, sorted lexicographically on the bit
/// vectors.
struct StateSet {
    Logic logic;
    std::vector<TwoValuedState> states;

    std::size_t size() const noexcept { return states.size(); }
    bool empty() const noexcept { return states.empty(); }
};

/// Backtracking search with block propagation. A value of `threads` above 1
/// splits the search over the atoms of the first branching block; the result
/// does not depend on it. Throws DomainError if the logic is invalid.
StateSet enumerate_states(const Logic& logic, unsigned threads = 1);

struct SeparationResult {
    bool separating = false;
    /// An atom pair that no state distinguishes, when not separating.
    std::optional<std::pair<AtomIndex, AtomIndex>> witness;
};

struct UnitalityResult {
    bool unital = false;
    std::optional<AtomIndex> uncovered;
};

SeparationResult is_separating(const StateSet& s);
UnitalityResult is_unital(const StateSet& s);

/// Image of each atom in the Boolean algebra 2^n: the (0-based) indices of
/// the states assigning it 1. Throws DomainError on an empty state set.
std::vector<std::vector<std::size_t>> boolean_embedding(const StateSet& s);

/// The states induced on from_partitions(p) by the ground states: ground
/// state g sets an atom to 1 iff g lies in the atom's cell. One per ground
/// state, in ground-state order (duplicates kept).
std::vector<TwoValuedState> ground_state_valuations(const PartitionLogic& p);

std::string to_json(const StateSet& s);
/// Plain-text truth table: header row of atom names, one numbered row per state.
std::string truth_table(const StateSet& s);

}  // namespace qlpoly
