#pragma once

#include <span>
#include <vector>

#include "aca/rule.hpp"
#include "aca/types.hpp"

namespace aca {

ValidationReport validate_network(const StateSpace& states,
                                  const std::vector<std::vector<int>>& neighbors,
                                  const std::vector<std::vector<State>>& tables);

// A finite automaton over sites 0..n-1 given by per-site lookup tables.
// tables[x] is indexed by the neighbor-state tuple read in neighbors[x]
// order, first neighbor most significant. Configurations for a network use
// origin 0 and exactly site_count() cells.
class NetworkAutomaton {
public:
    NetworkAutomaton(StateSpace states, std::vector<std::vector<int>> neighbors,
                     std::vector<std::vector<State>> tables)
        : states_(states), neighbors_(std::move(neighbors)), tables_(std::move(tables)) {
        const ValidationReport rep = validate_network(states_, neighbors_, tables_);
        if (!rep.valid) throw error("invalid network: " + rep.summary());
    }

    int site_count() const { return static_cast<int>(neighbors_.size()); }
    StateSpace states() const { return states_; }
    const std::vector<int>& neighbors(int x) const { return neighbors_.at(static_cast<std::size_t>(x)); }

    bool interacts(int x, int y) const {
        for (int v : neighbors(x))
            if (v == y) return true;
        for (int v : neighbors(y))
            if (v == x) return true;
        return false;
    }

    State local(int x, std::span<const State> tuple) const {
        const auto& nbr = neighbors(x);
        if (tuple.size() != nbr.size()) throw error("neighborhood tuple has wrong arity");
        std::size_t idx = 0;
        for (const State s : tuple) {
            if (!states_.contains(s)) throw error("state out of range in neighborhood tuple");
            idx = idx * static_cast<std::size_t>(states_.size) + static_cast<std::size_t>(s);
        }
        return tables_[static_cast<std::size_t>(x)][idx];
    }

    State eval(const Configuration& cfg, int x) const {
        if (cfg.origin != 0 || cfg.width() != site_count())
            throw error("configuration does not match the network's site list");
        const auto& nbr = neighbors(x);
        std::size_t idx = 0;
        for (const int y : nbr) {
            const State s = cfg.cells[static_cast<std::size_t>(y)];
            if (!states_.contains(s))
                throw error("state " + std::to_string(s) + " at site " + std::to_string(y) +
                            " out of range");
            idx = idx * static_cast<std::size_t>(states_.size) + static_cast<std::size_t>(s);
        }
        return tables_[static_cast<std::size_t>(x)][idx];
    }

private:
    StateSpace states_;
    std::vector<std::vector<int>> neighbors_;
    std::vector<std::vector<State>> tables_;
};

inline ValidationReport validate_network(const StateSpace& states,
                                         const std::vector<std::vector<int>>& neighbors,
                                         const std::vector<std::vector<State>>& tables) {
    ValidationReport rep;
    const int n_sites = static_cast<int>(neighbors.size());
    if (states.size < 1) rep.fail("empty state space");
    if (tables.size() != neighbors.size()) rep.fail("one rule table required per site");
    for (int x = 0; x < n_sites; ++x) {
        bool self = false;
        for (int y : neighbors[static_cast<std::size_t>(x)]) {
            if (y < 0 || y >= n_sites)
                rep.fail("site " + std::to_string(x) + " lists out-of-range neighbor " + std::to_string(y));
            if (y == x) self = true;
        }
        if (!self) rep.fail("site " + std::to_string(x) + " is missing from its own neighborhood");
        if (x >= static_cast<int>(tables.size())) continue;
        std::size_t expect = 1;
        for (std::size_t k = 0; k < neighbors[static_cast<std::size_t>(x)].size(); ++k)
            expect *= static_cast<std::size_t>(states.size);
        if (tables[static_cast<std::size_t>(x)].size() != expect) {
            rep.fail("site " + std::to_string(x) + " table has " +
                     std::to_string(tables[static_cast<std::size_t>(x)].size()) + " entries, expected " +
                     std::to_string(expect));
            continue;
        }
        for (State v : tables[static_cast<std::size_t>(x)])
            if (!states.contains(v))
                rep.fail("site " + std::to_string(x) + " table output " + std::to_string(v) +
                         " out of range");
    }
    return rep;
}

inline ValidationReport validate(const NetworkAutomaton& net) {
    ValidationReport rep;
    (void)net; // constructor enforces the full report already
    return rep;
}

// Embed a 1-D rule on a width-W window as a network over sites 0..W-1 with
// the boundary baked into the edge tables. Evaluations agree with
// RuleTable1D::eval on the matching Configuration {origin 0, boundary}.
inline NetworkAutomaton to_network(const RuleTable1D& rule, int width) {
    if (width < 1) throw error("window width must be positive");
    const int n = rule.states().size;
    const BoundaryKind bk = rule.boundary().kind;
    std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(width));
    std::vector<std::vector<State>> tabs(static_cast<std::size_t>(width));

    auto fill = [&](int x, std::vector<int> nbr, auto&& fn) {
        std::size_t size = 1;
        for (std::size_t k = 0; k < nbr.size(); ++k) size *= static_cast<std::size_t>(n);
        std::vector<State> table(size);
        std::vector<State> tuple(nbr.size(), 0);
        for (std::size_t idx = 0; idx < size; ++idx) {
            std::size_t rem = idx;
            for (std::size_t k = nbr.size(); k-- > 0;) {
                tuple[k] = static_cast<State>(rem % static_cast<std::size_t>(n));
                rem /= static_cast<std::size_t>(n);
            }
            table[idx] = fn(tuple);
        }
        nbrs[static_cast<std::size_t>(x)] = std::move(nbr);
        tabs[static_cast<std::size_t>(x)] = std::move(table);
    };

    for (int x = 0; x < width; ++x) {
        const bool left_out = (x == 0) && bk != BoundaryKind::cyclic;
        const bool right_out = (x == width - 1) && bk != BoundaryKind::cyclic;
        if (bk == BoundaryKind::cyclic) {
            fill(x, {(x - 1 + width) % width, x, (x + 1) % width},
                 [&](const std::vector<State>& t) { return rule.g(t[0], t[1], t[2]); });
        } else if (left_out && right_out) {
            fill(x, {x}, [&](const std::vector<State>& t) {
                if (bk == BoundaryKind::free_half_line) return rule.g0(t[0], rule.boundary().q);
                return rule.g(rule.boundary().q, t[0], rule.boundary().q);
            });
        } else if (left_out) {
            fill(x, {x, x + 1},
                 [&](const std::vector<State>& t) { return rule.left_edge(t[0], t[1]); });
        } else if (right_out) {
            fill(x, {x - 1, x},
                 [&](const std::vector<State>& t) { return rule.right_edge(t[0], t[1]); });
        } else {
            fill(x, {x - 1, x, x + 1},
                 [&](const std::vector<State>& t) { return rule.g(t[0], t[1], t[2]); });
        }
    }
    return NetworkAutomaton{rule.states(), std::move(nbrs), std::move(tabs)};
}

} // namespace aca
