#pragma once

#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "aca/types.hpp"

namespace aca {

// Radius-1 rule table on the line: a total map g : S^3 -> S plus the
// two-argument table g0 : S^2 -> S used at site 0 under the free boundary
// condition. Tables are stored densely; g is indexed by (l*n + c)*n + r and
// g0 by c*n + r.
class RuleTable1D {
public:
    RuleTable1D(StateSpace states, std::vector<State> g, std::vector<State> g0, BoundaryMode boundary)
        : states_(states), g_(std::move(g)), g0_(std::move(g0)), boundary_(boundary) {
        const auto n = static_cast<std::size_t>(states_.size);
        if (states_.size < 1) throw error("state space must have at least one state");
        if (g_.size() != n * n * n) throw error("g table has wrong size");
        if (g0_.size() != n * n) throw error("g0 table has wrong size");
        for (State v : g_)
            if (!states_.contains(v)) throw error("g output " + std::to_string(v) + " out of range");
        for (State v : g0_)
            if (!states_.contains(v)) throw error("g0 output " + std::to_string(v) + " out of range");
        if (!states_.contains(boundary_.q) && boundary_.kind != BoundaryKind::cyclic)
            throw error("boundary state out of range");
    }

    StateSpace states() const { return states_; }
    const BoundaryMode& boundary() const { return boundary_; }

    State g(State l, State c, State r) const { return g_[idx3(l, c, r)]; }
    State g0(State c, State r) const { return g0_[idx2(c, r)]; }

    // Rule as seen from inside a window. The edge forms resolve the missing
    // neighbor from the boundary mode: g0 on the free half-line, the frozen
    // fill state otherwise.
    State interior(State l, State c, State r) const { return g(l, c, r); }
    State left_edge(State c, State r) const {
        if (boundary_.kind == BoundaryKind::free_half_line) return g0(c, r);
        return g(boundary_.q, c, r);
    }
    State right_edge(State l, State c) const { return g(l, c, boundary_.q); }

    // f(xi)(x) for a window configuration. Neighbor reads follow the
    // configuration's own boundary mode.
    State eval(const Configuration& cfg, int x) const {
        const State c = cfg.get(x);
        const auto l = cfg.read(x - 1);
        const auto r = cfg.read(x + 1);
        if (!l) return g0(c, *r);
        return g(*l, c, *r);
    }

    void set_g(State l, State c, State r, State out) {
        if (!states_.contains(out)) throw error("g output out of range");
        g_[idx3(l, c, r)] = out;
    }
    void set_g0(State c, State r, State out) {
        if (!states_.contains(out)) throw error("g0 output out of range");
        g0_[idx2(c, r)] = out;
    }

    friend bool operator==(const RuleTable1D&, const RuleTable1D&) = default;

private:
    std::size_t idx3(State l, State c, State r) const {
        if (!states_.contains(l) || !states_.contains(c) || !states_.contains(r))
            throw error("state out of range in g(" + std::to_string(l) + "," + std::to_string(c) +
                        "," + std::to_string(r) + ")");
        const auto n = static_cast<std::size_t>(states_.size);
        return (static_cast<std::size_t>(l) * n + static_cast<std::size_t>(c)) * n +
               static_cast<std::size_t>(r);
    }
    std::size_t idx2(State c, State r) const {
        if (!states_.contains(c) || !states_.contains(r))
            throw error("state out of range in g0(" + std::to_string(c) + "," + std::to_string(r) + ")");
        const auto n = static_cast<std::size_t>(states_.size);
        return static_cast<std::size_t>(c) * n + static_cast<std::size_t>(r);
    }

    StateSpace states_;
    std::vector<State> g_;
    std::vector<State> g0_;
    BoundaryMode boundary_;
};

// Build a rule from two callables over states.
inline RuleTable1D make_rule(int n, BoundaryMode boundary,
                             const std::function<State(State, State, State)>& g,
                             const std::function<State(State, State)>& g0) {
    std::vector<State> t3(static_cast<std::size_t>(n) * n * n);
    std::vector<State> t2(static_cast<std::size_t>(n) * n);
    for (State l = 0; l < n; ++l)
        for (State c = 0; c < n; ++c)
            for (State r = 0; r < n; ++r)
                t3[(static_cast<std::size_t>(l) * n + c) * n + r] = g(l, c, r);
    for (State c = 0; c < n; ++c)
        for (State r = 0; r < n; ++r) t2[static_cast<std::size_t>(c) * n + r] = g0(c, r);
    return RuleTable1D{StateSpace{n}, std::move(t3), std::move(t2), boundary};
}

ValidationReport validate(const RuleTable1D& rule);

namespace rules {

// Named builtins used throughout the tests. Their g0 keeps the center state,
// except max_rule whose edge table is max(c, r).
inline RuleTable1D identity(int n = 2, BoundaryMode b = BoundaryMode::background()) {
    return make_rule(
        n, b, [](State, State c, State) { return c; }, [](State c, State) { return c; });
}

inline RuleTable1D max_rule(int n = 2, BoundaryMode b = BoundaryMode::background()) {
    return make_rule(
        n, b, [](State l, State c, State r) { return std::max(l, std::max(c, r)); },
        [](State c, State r) { return std::max(c, r); });
}

inline RuleTable1D xor_rule(BoundaryMode b = BoundaryMode::background()) {
    return make_rule(
        2, b, [](State l, State, State r) { return l ^ r; }, [](State c, State) { return c; });
}

// Each cell copies its right neighbor.
inline RuleTable1D shift_rule(int n = 2, BoundaryMode b = BoundaryMode::background()) {
    return make_rule(
        n, b, [](State, State, State r) { return r; }, [](State c, State) { return c; });
}

// Uniform random tables from a named, portable generator (mt19937_64 seeded
// with `seed`; entries drawn g first, lexicographically, then g0).
inline RuleTable1D random_rule(int n, BoundaryMode b, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto draw = [&]() { return static_cast<State>(rng() % static_cast<std::uint64_t>(n)); };
    std::vector<State> t3(static_cast<std::size_t>(n) * n * n);
    std::vector<State> t2(static_cast<std::size_t>(n) * n);
    for (auto& v : t3) v = draw();
    for (auto& v : t2) v = draw();
    return RuleTable1D{StateSpace{n}, std::move(t3), std::move(t2), b};
}

} // namespace rules

inline ValidationReport validate(const RuleTable1D& rule) {
    // Constructed tables are total and range-checked by the constructor; this
    // re-checks so callers can treat all validate() overloads uniformly.
    ValidationReport rep;
    const int n = rule.states().size;
    if (n < 1) rep.fail("empty state space");
    if (rule.boundary().kind != BoundaryKind::cyclic && !rule.states().contains(rule.boundary().q))
        rep.fail("boundary fill state out of range");
    return rep;
}

} // namespace aca
