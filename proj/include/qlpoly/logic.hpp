#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qlpoly {

using AtomIndex = std::size_t;
using Block = std::vector<AtomIndex>;

/// Combinatorial skeleton of an orthologic: named atoms grouped into blocks
/// (contexts). A block is a maximal set of mutually exclusive, jointly
/// exhaustive outcomes. Atom and block order are preserved from the source.
struct Logic {
    std::vector<std::string> atoms;
    std::vector<Block> blocks;

    std::size_t atom_count() const noexcept { return atoms.size(); }
    std::size_t block_count() const noexcept { return blocks.size(); }
    std::optional<AtomIndex> find_atom(std::string_view name) const;

    bool operator==(const Logic&) const = default;
};

using Cell = std::vector<std::size_t>;
using Partition = std::vector<Cell>;

/// Automaton partition logic / generalized urn model: every partition of the
/// ground states is one context, every cell one atom.
struct PartitionLogic {
    std::vector<std::string> states;
    std::vector<Partition> partitions;

    bool operator==(const PartitionLogic&) const = default;
};

struct Violation {
    std::string rule;
    std::vector<AtomIndex> atoms;
    std::vector<std::size_t> blocks;

    bool operator==(const Violation&) const = default;
};

struct LogicDiagnostics {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    bool has(std::string_view rule) const;
};

// Rule names reported by validate_logic.
inline constexpr std::string_view kRuleUncovered = "atom not in any block";
inline constexpr std::string_view kRuleBlockTooSmall = "block too small";
inline constexpr std::string_view kRuleBlocksShare = "blocks share 2 atoms";
inline constexpr std::string_view kRuleDuplicateAtomId = "duplicate atom identifier";
inline constexpr std::string_view kRuleDuplicateInBlock = "duplicate atom in block";
inline constexpr std::string_view kRuleBadIndex = "atom index out of range";

/// Parses the Logic JSON format `{"atoms":[...],"blocks":[[...],...]}`.
/// Throws ParseError on syntax errors, unknown keys, duplicate atoms and
/// blocks that reference undeclared atoms. Does not validate.
Logic parse_logic(std::string_view text);
std::string to_json(const Logic& logic);

PartitionLogic parse_partition_logic(std::string_view text);
std::string to_json(const PartitionLogic& logic);

LogicDiagnostics validate_logic(const Logic& logic);

/// Checks that every partition covers the ground states with disjoint,
/// nonempty cells. Empty result means valid.
std::vector<std::string> validate_partitions(const PartitionLogic& p);

/// One block per partition, one atom per distinct cell set. Cells with equal
/// ground-state sets in different partitions become the same atom; the atom
/// is named by its cell, e.g. "{2,3}".
Logic from_partitions(const PartitionLogic& p);

struct BuiltinStructure {
    Logic logic;
    std::optional<PartitionLogic> partitions;
};

/// Named example structures: "mo3", "ks14", "ch-classical".
BuiltinStructure builtin(std::string_view name);
std::vector<std::string> builtin_names();

}  // namespace qlpoly
