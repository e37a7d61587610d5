#include "qlpoly/logic.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "qlpoly/error.hpp"

namespace qlpoly {

using nlohmann::json;

std::optional<AtomIndex> Logic::find_atom(std::string_view name) const {
    auto it = std::find(atoms.begin(), atoms.end(), name);
    if (it == atoms.end()) return std::nullopt;
    return static_cast<AtomIndex>(it - atoms.begin());
}

bool LogicDiagnostics::has(std::string_view rule) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.rule == rule; });
}

namespace {

json parse_document(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

void reject_unknown_keys(const json& doc, std::initializer_list<std::string_view> allowed) {
    if (!doc.is_object()) throw ParseError("top-level value must be an object");
    for (const auto& [key, value] : doc.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ParseError("unknown key \"" + key + "\"");
    }
    for (auto key : allowed) {
        if (!doc.contains(std::string(key)))
            throw ParseError("missing key \"" + std::string(key) + "\"");
    }
}

std::string as_string(const json& v, std::string_view what) {
    if (!v.is_string()) throw ParseError(std::string(what) + " must be a string");
    return v.get<std::string>();
}

const json& as_array(const json& v, std::string_view what) {
    if (!v.is_array()) throw ParseError(std::string(what) + " must be an array");
    return v;
}

// Maps each identifier to its position, rejecting duplicates.
std::unordered_map<std::string, std::size_t> index_names(const std::vector<std::string>& names,
                                                         std::string_view what) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!index.emplace(names[i], i).second)
            throw ParseError("duplicate " + std::string(what) + " \"" + names[i] + "\"");
    }
    return index;
}

std::vector<std::string> read_names(const json& v, std::string_view what) {
    std::vector<std::string> names;
    for (const auto& item : as_array(v, what)) names.push_back(as_string(item, what));
    return names;
}

}  // namespace

Logic parse_logic(std::string_view text) {
    const json doc = parse_document(text);
    reject_unknown_keys(doc, {"atoms", "blocks"});

    Logic logic;
    logic.atoms = read_names(doc["atoms"], "atom");
    const auto index = index_names(logic.atoms, "atom");

    for (const auto& block : as_array(doc["blocks"], "blocks")) {
        Block indices;
        for (const auto& item : as_array(block, "block")) {
            const auto name = as_string(item, "block entry");
            auto it = index.find(name);
            if (it == index.end()) throw ParseError("unknown atom \"" + name + "\"");
            indices.push_back(it->second);
        }
        logic.blocks.push_back(std::move(indices));
    }
    return logic;
}

std::string to_json(const Logic& logic) {
    json doc;
    doc["atoms"] = logic.atoms;
    json blocks = json::array();
    for (const auto& block : logic.blocks) {
        json names = json::array();
        for (auto a : block) names.push_back(logic.atoms.at(a));
        blocks.push_back(std::move(names));
    }
    doc["blocks"] = std::move(blocks);
    return doc.dump();
}

PartitionLogic parse_partition_logic(std::string_view text) {
    const json doc = parse_document(text);
    reject_unknown_keys(doc, {"states", "partitions"});

    PartitionLogic p;
    p.states = read_names(doc["states"], "state");
    const auto index = index_names(p.states, "state");

    for (const auto& partition : as_array(doc["partitions"], "partitions")) {
        Partition cells;
        for (const auto& cell : as_array(partition, "partition")) {
            Cell members;
            for (const auto& item : as_array(cell, "cell")) {
                const auto name = as_string(item, "cell entry");
                auto it = index.find(name);
                if (it == index.end()) throw ParseError("unknown state \"" + name + "\"");
                members.push_back(it->second);
            }
            cells.push_back(std::move(members));
        }
        p.partitions.push_back(std::move(cells));
    }
    return p;
}

std::string to_json(const PartitionLogic& p) {
    json doc;
    doc["states"] = p.states;
    json partitions = json::array();
    for (const auto& partition : p.partitions) {
        json cells = json::array();
        for (const auto& cell : partition) {
            json names = json::array();
            for (auto s : cell) names.push_back(p.states.at(s));
            cells.push_back(std::move(names));
        }
        partitions.push_back(std::move(cells));
    }
    doc["partitions"] = std::move(partitions);
    return doc.dump();
}

LogicDiagnostics validate_logic(const Logic& logic) {
    LogicDiagnostics diag;
    const std::size_t n = logic.atoms.size();

    std::map<std::string, std::vector<AtomIndex>> by_name;
    for (AtomIndex a = 0; a < n; ++a) by_name[logic.atoms[a]].push_back(a);
    for (const auto& [name, ids] : by_name) {
        if (ids.size() > 1) diag.violations.push_back({std::string(kRuleDuplicateAtomId), ids, {}});
    }

    std::vector<bool> covered(n, false);
    std::vector<std::set<AtomIndex>> block_sets;
    for (std::size_t b = 0; b < logic.blocks.size(); ++b) {
        const auto& block = logic.blocks[b];
        std::set<AtomIndex> members;
        for (auto a : block) {
            if (a >= n) {
                diag.violations.push_back({std::string(kRuleBadIndex), {a}, {b}});
                continue;
            }
            if (!members.insert(a).second)
                diag.violations.push_back({std::string(kRuleDuplicateInBlock), {a}, {b}});
            covered[a] = true;
        }
        if (members.size() < 2)
            diag.violations.push_back({std::string(kRuleBlockTooSmall),
                                       std::vector<AtomIndex>(members.begin(), members.end()),
                                       {b}});
        block_sets.push_back(std::move(members));
    }

    for (std::size_t i = 0; i < block_sets.size(); ++i) {
        for (std::size_t j = i + 1; j < block_sets.size(); ++j) {
            std::vector<AtomIndex> common;
            std::set_intersection(block_sets[i].begin(), block_sets[i].end(),
                                  block_sets[j].begin(), block_sets[j].end(),
                                  std::back_inserter(common));
            if (common.size() >= 2)
                diag.violations.push_back({std::string(kRuleBlocksShare), common, {i, j}});
        }
    }

    for (AtomIndex a = 0; a < n; ++a) {
        if (!covered[a]) diag.violations.push_back({std::string(kRuleUncovered), {a}, {}});
    }
    return diag;
}

std::vector<std::string> validate_partitions(const PartitionLogic& p) {
    std::vector<std::string> problems;
    const std::size_t n = p.states.size();
    for (std::size_t k = 0; k < p.partitions.size(); ++k) {
        std::vector<int> hits(n, 0);
        for (const auto& cell : p.partitions[k]) {
            if (cell.empty()) problems.push_back("partition " + std::to_string(k) + ": empty cell");
            for (auto s : cell) {
                if (s >= n) {
                    problems.push_back("partition " + std::to_string(k) + ": state index out of range");
                    continue;
                }
                ++hits[s];
            }
        }
        for (std::size_t s = 0; s < n; ++s) {
            if (hits[s] == 0)
                problems.push_back("partition " + std::to_string(k) + ": state \"" + p.states[s] +
                                   "\" not covered");
            else if (hits[s] > 1)
                problems.push_back("partition " + std::to_string(k) + ": cells overlap at state \"" +
                                   p.states[s] + "\"");
        }
    }
    return problems;
}

Logic from_partitions(const PartitionLogic& p) {
    if (auto problems = validate_partitions(p); !problems.empty())
        throw DomainError("invalid partition: " + problems.front());

    Logic logic;
    std::map<std::vector<std::size_t>, AtomIndex> atom_of_cell;
    for (const auto& partition : p.partitions) {
        Block block;
        for (const auto& cell : partition) {
            std::vector<std::size_t> key(cell.begin(), cell.end());
            std::sort(key.begin(), key.end());
            auto [it, inserted] = atom_of_cell.emplace(key, logic.atoms.size());
            if (inserted) {
                std::string name = "{";
                for (std::size_t i = 0; i < key.size(); ++i) {
                    if (i) name += ',';
                    name += p.states[key[i]];
                }
                logic.atoms.push_back(name + "}");
            }
            block.push_back(it->second);
        }
        logic.blocks.push_back(std::move(block));
    }
    return logic;
}

namespace {

Logic make_logic(std::vector<std::string> atoms,
                 const std::vector<std::vector<std::string>>& blocks) {
    Logic logic;
    logic.atoms = std::move(atoms);
    for (const auto& names : blocks) {
        Block block;
        for (const auto& name : names) block.push_back(*logic.find_atom(name));
        logic.blocks.push_back(std::move(block));
    }
    return logic;
}

PartitionLogic make_partitions(std::size_t state_count,
                               const std::vector<std::vector<std::vector<int>>>& partitions) {
    PartitionLogic p;
    for (std::size_t s = 1; s <= state_count; ++s) p.states.push_back(std::to_string(s));
    for (const auto& partition : partitions) {
        Partition cells;
        for (const auto& cell : partition) {
            Cell members;
            for (int s : cell) members.push_back(static_cast<std::size_t>(s - 1));
            cells.push_back(std::move(members));
        }
        p.partitions.push_back(std::move(cells));
    }
    return p;
}

BuiltinStructure mo3() {
    auto logic = make_logic({"a1", "a1'", "a2", "a2'", "a3", "a3'"},
                            {{"a1", "a1'"}, {"a2", "a2'"}, {"a3", "a3'"}});
    auto p = make_partitions(3, {{{1}, {2, 3}}, {{2}, {1, 3}}, {{3}, {1, 2}}});
    return {std::move(logic), std::move(p)};
}

// Subgraph of the Kochen-Specker Gamma_1 logic: a hexagon of six 3-atom
// blocks closed by the diagonal {a4,a13,a10}. Ground states are the 14
// automaton states; each atom is labelled by its set of states.
BuiltinStructure ks14() {
    std::vector<std::string> atoms;
    for (int i = 1; i <= 13; ++i) atoms.push_back("a" + std::to_string(i));
    auto logic = make_logic(atoms, {{"a1", "a2", "a3"},
                                    {"a3", "a4", "a5"},
                                    {"a5", "a6", "a7"},
                                    {"a7", "a8", "a9"},
                                    {"a9", "a10", "a11"},
                                    {"a11", "a12", "a1"},
                                    {"a4", "a13", "a10"}});

    const std::vector<std::vector<int>> label = {
        {1, 2, 3},                 // a1
        {4, 5, 6, 7, 8, 9},        // a2
        {10, 11, 12, 13, 14},      // a3
        {2, 6, 7, 8},              // a4
        {1, 3, 4, 5, 9},           // a5
        {2, 6, 8, 11, 12, 14},     // a6
        {7, 10, 13},               // a7
        {3, 5, 8, 9, 11, 14},      // a8
        {1, 2, 4, 6, 12},          // a9
        {3, 9, 13, 14},            // a10
        {5, 7, 8, 10, 11},         // a11
        {4, 6, 9, 12, 13, 14},     // a12
        {1, 4, 5, 10, 11, 12},     // a13
    };
    std::vector<std::vector<std::vector<int>>> partitions;
    for (const auto& block : logic.blocks) {
        std::vector<std::vector<int>> cells;
        for (auto a : block) cells.push_back(label[a]);
        partitions.push_back(std::move(cells));
    }
    return {std::move(logic), make_partitions(14, partitions)};
}

// Four independent two-outcome events A1, A2, B1, B2.
BuiltinStructure ch_classical() {
    const std::vector<std::string> events = {"A1", "A2", "B1", "B2"};
    std::vector<std::string> atoms;
    std::vector<std::vector<std::string>> blocks;
    for (const auto& e : events) {
        atoms.push_back(e);
        atoms.push_back(e + "'");
        blocks.push_back({e, e + "'"});
    }
    auto logic = make_logic(atoms, blocks);

    PartitionLogic p;
    for (unsigned bits = 0; bits < 16; ++bits) {
        std::string label;
        for (int e = 3; e >= 0; --e) label += ((bits >> e) & 1u) ? '1' : '0';
        p.states.push_back(label);
    }
    for (int e = 0; e < 4; ++e) {
        Cell yes, no;
        for (std::size_t s = 0; s < 16; ++s) (p.states[s][e] == '1' ? yes : no).push_back(s);
        p.partitions.push_back({yes, no});
    }
    return {std::move(logic), std::move(p)};
}

}  // namespace

BuiltinStructure builtin(std::string_view name) {
    if (name == "mo3") return mo3();
    if (name == "ks14") return ks14();
    if (name == "ch-classical") return ch_classical();
    throw DomainError("unknown builtin \"" + std::string(name) + "\"");
}

std::vector<std::string> builtin_names() { return {"mo3", "ks14", "ch-classical"}; }

}  // namespace qlpoly
