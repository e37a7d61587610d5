#include "qlpoly/state_enum.hpp"

#include <algorithm>
#include <future>
#include <sstream>

#include <json.hpp>

#include "qlpoly/error.hpp"

namespace qlpoly {

namespace {

constexpr std::int8_t kUnset = -1;

class StateSearch {
public:
    explicit StateSearch(const Logic& logic) : logic_(logic), blocks_of_(logic.atom_count()) {
        for (std::size_t b = 0; b < logic.blocks.size(); ++b)
            for (auto a : logic.blocks[b]) blocks_of_[a].push_back(b);
    }

    using Assignment = std::vector<std::int8_t>;

    Assignment empty_assignment() const { return Assignment(logic_.atom_count(), kUnset); }

    // Assigns and propagates; false on conflict.
    bool assign(Assignment& val, AtomIndex atom, std::int8_t value) const {
        std::vector<std::pair<AtomIndex, std::int8_t>> queue{{atom, value}};
        while (!queue.empty()) {
            auto [a, v] = queue.back();
            queue.pop_back();
            if (val[a] != kUnset) {
                if (val[a] != v) return false;
                continue;
            }
            val[a] = v;
            for (auto b : blocks_of_[a]) {
                const auto& block = logic_.blocks[b];
                if (v == 1) {
                    for (auto other : block)
                        if (other != a) queue.emplace_back(other, 0);
                    continue;
                }
                std::size_t ones = 0, open = 0;
                AtomIndex last_open = 0;
                for (auto other : block) {
                    if (val[other] == 1) ++ones;
                    if (val[other] == kUnset) {
                        ++open;
                        last_open = other;
                    }
                }
                if (ones == 0 && open == 0) return false;
                if (ones == 0 && open == 1) queue.emplace_back(last_open, 1);
            }
        }
        return true;
    }

    // Block with no 1 and the fewest unassigned atoms; nullopt when every
    // block already holds its 1.
    std::optional<std::size_t> pick_block(const Assignment& val) const {
        std::optional<std::size_t> best;
        std::size_t best_open = 0;
        for (std::size_t b = 0; b < logic_.blocks.size(); ++b) {
            std::size_t open = 0;
            bool satisfied = false;
            for (auto a : logic_.blocks[b]) {
                if (val[a] == 1) satisfied = true;
                if (val[a] == kUnset) ++open;
            }
            if (satisfied) continue;
            if (!best || open < best_open) {
                best = b;
                best_open = open;
            }
        }
        return best;
    }

    AtomIndex lowest_open(const Assignment& val, std::size_t block) const {
        AtomIndex best = logic_.atom_count();
        for (auto a : logic_.blocks[block])
            if (val[a] == kUnset) best = std::min(best, a);
        return best;
    }

    void search(Assignment val, std::vector<TwoValuedState>& out) const {
        auto block = pick_block(val);
        if (!block) {
            TwoValuedState s;
            s.values.reserve(val.size());
            for (auto v : val) s.values.push_back(v == 1 ? 1 : 0);
            out.push_back(std::move(s));
            return;
        }
        const AtomIndex atom = lowest_open(val, *block);
        if (Assignment on = val; assign(on, atom, 1)) search(std::move(on), out);
        if (assign(val, atom, 0)) search(std::move(val), out);
    }

private:
    const Logic& logic_;
    std::vector<std::vector<std::size_t>> blocks_of_;
};

}  // namespace

StateSet enumerate_states(const Logic& logic, unsigned threads) {
    if (auto diag = validate_logic(logic); !diag.ok())
        throw DomainError("invalid logic: " + diag.violations.front().rule);

    StateSearch search(logic);
    std::vector<TwoValuedState> states;
    auto root = search.empty_assignment();
    auto block = search.pick_block(root);

    if (threads <= 1 || !block) {
        search.search(std::move(root), states);
    } else {
        // Exactly one atom of the first block is 1: one subproblem per atom.
        std::vector<std::future<std::vector<TwoValuedState>>> parts;
        for (auto atom : logic.blocks[*block]) {
            parts.push_back(std::async(std::launch::async, [&search, root, atom] {
                std::vector<TwoValuedState> found;
                auto val = root;
                if (search.assign(val, atom, 1)) search.search(std::move(val), found);
                return found;
            }));
        }
        for (auto& part : parts) {
            auto found = part.get();
            states.insert(states.end(), found.begin(), found.end());
        }
    }

    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    return StateSet{logic, std::move(states)};
}

SeparationResult is_separating(const StateSet& s) {
    const auto n = s.logic.atom_count();
    for (AtomIndex a = 0; a < n; ++a) {
        for (AtomIndex b = a + 1; b < n; ++b) {
            const bool split = std::any_of(s.states.begin(), s.states.end(),
                                           [&](const TwoValuedState& t) { return t[a] != t[b]; });
            if (!split) return {false, std::make_pair(a, b)};
        }
    }
    return {true, std::nullopt};
}

UnitalityResult is_unital(const StateSet& s) {
    for (AtomIndex a = 0; a < s.logic.atom_count(); ++a) {
        const bool hit = std::any_of(s.states.begin(), s.states.end(),
                                     [&](const TwoValuedState& t) { return t[a]; });
        if (!hit) return {false, a};
    }
    return {true, std::nullopt};
}

std::vector<std::vector<std::size_t>> boolean_embedding(const StateSet& s) {
    if (s.empty()) throw DomainError("boolean embedding needs at least one two-valued state");
    std::vector<std::vector<std::size_t>> image(s.logic.atom_count());
    for (std::size_t i = 0; i < s.states.size(); ++i)
        for (AtomIndex a = 0; a < image.size(); ++a)
            if (s.states[i][a]) image[a].push_back(i);
    return image;
}

std::vector<TwoValuedState> ground_state_valuations(const PartitionLogic& p) {
    const Logic logic = from_partitions(p);
    // Atom of each (partition, cell) in from_partitions order.
    std::vector<TwoValuedState> out;
    for (std::size_t g = 0; g < p.states.size(); ++g) {
        TwoValuedState s;
        s.values.assign(logic.atom_count(), 0);
        for (std::size_t k = 0; k < p.partitions.size(); ++k) {
            const auto& cells = p.partitions[k];
            for (std::size_t c = 0; c < cells.size(); ++c) {
                if (std::find(cells[c].begin(), cells[c].end(), g) != cells[c].end())
                    s.values[logic.blocks[k][c]] = 1;
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::string to_json(const StateSet& s) {
    nlohmann::json doc;
    doc["atoms"] = s.logic.atoms;
    auto rows = nlohmann::json::array();
    for (const auto& t : s.states) {
        auto row = nlohmann::json::array();
        for (auto v : t.values) row.push_back(static_cast<int>(v));
        rows.push_back(std::move(row));
    }
    doc["states"] = std::move(rows);
    return doc.dump();
}

std::string truth_table(const StateSet& s) {
    std::vector<std::size_t> width;
    for (const auto& name : s.logic.atoms) width.push_back(std::max<std::size_t>(name.size(), 1));
    const std::size_t index_width = std::max<std::size_t>(std::to_string(s.size()).size(), 1);

    std::ostringstream os;
    os << std::string(index_width - 1, ' ') << '#';
    for (std::size_t a = 0; a < width.size(); ++a)
        os << ' ' << std::string(width[a] - s.logic.atoms[a].size(), ' ') << s.logic.atoms[a];
    os << '\n';
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto label = std::to_string(i + 1);
        os << std::string(index_width - label.size(), ' ') << label;
        for (std::size_t a = 0; a < width.size(); ++a)
            os << ' ' << std::string(width[a] - 1, ' ') << (s.states[i][a] ? '1' : '0');
        os << '\n';
    }
    return os.str();
}

}  // namespace qlpoly
