#pragma once

#include <string>
#include <vector>

#include "aca/commutativity.hpp"
#include "aca/history.hpp"
#include "aca/rule.hpp"
#include "aca/trajectory.hpp"

namespace aca {

// Extend a free-boundary base rule with one extra state n that sweeps right;
// behind the sweep the base rule runs as if started from all zeros. Cases
// are applied in order, first match wins:
//
//   g'(n, r, s) = n
//   g'(r, n, s) = g(r, 0, 0)        r < n
//   g'(r, s, n) = g(r, s, 0)        r, s < n
//   g'(r, s, t) = g(r, s, t)        r, s, t < n
//   otherwise the center is kept (unreachable: the cases above are total)
//
//   g0'(n, s) = g0(0, 0)
//   g0'(s, n) = g0(s, 0)            s < n
//   g0'(s, t) = g0(s, t)            s, t < n
//
// Requires g(0,0,0) = 0 and g0(1, s) = 1 for all s.
inline RuleTable1D build_gprime(const RuleTable1D& base) {
    if (base.boundary().kind != BoundaryKind::free_half_line)
        throw error("build_gprime expects a free-boundary base rule");
    const int n = base.states().size;
    if (n < 2) throw error("build_gprime needs at least two base states");
    if (base.g(0, 0, 0) != 0)
        throw error("precondition failed: g(0,0,0) = " + std::to_string(base.g(0, 0, 0)) +
                    ", expected 0");
    for (State s = 0; s < n; ++s)
        if (base.g0(1, s) != 1)
            throw error("precondition failed: g0(1," + std::to_string(s) + ") = " +
                        std::to_string(base.g0(1, s)) + ", expected 1");

    return make_rule(
        n + 1, BoundaryMode::free_half_line(),
        [&](State a, State b, State c) -> State {
            if (a == n) return n;
            if (b == n) return base.g(a, 0, 0);
            if (c == n) return base.g(a, b, 0);
            return base.g(a, b, c);
        },
        [&](State a, State b) -> State {
            if (a == n) return base.g0(0, 0);
            if (b == n) return base.g0(a, 0);
            return base.g0(a, b);
        });
}

// The branch rule over n+3 states built from a commutative free-boundary
// base. State n acts as a wall; a wall that sees 0 on its right turns into
// n+1, a wall that sees 1 turns into n+2, and n+1/n+2 never change again.
// Between walls the base rule runs, with a wall on the left acting as the
// free edge and a wall on the right read as state 0. Cases in order:
//
//   f(s, n, 0) = n+1
//   f(s, n, 1) = n+2
//   f(r, s, t) = g0(s, t)           r >= n and s, t < n
//   f(r, s, t) = g(r, s, t)         r, s, t < n
//   f(r, s, t) = g(r, s, 0)         r, s < n and t >= n
//   f(r, s, t) = s                  otherwise
//
// The result keeps the window's frozen-background embedding (fill 0); its
// two-argument table is never used and keeps the center state.
inline RuleTable1D build_undec_rule(const RuleTable1D& base) {
    if (base.boundary().kind != BoundaryKind::free_half_line)
        throw error("build_undec_rule expects a free-boundary base rule");
    const int n = base.states().size;
    if (n < 2) throw error("build_undec_rule needs at least two base states");
    if (const auto w = check_local_commutativity_1d(base))
        throw error("build_undec_rule requires a commutative base; found a violation:\n" +
                    w->describe());

    return make_rule(
        n + 3, BoundaryMode::background(0),
        [&](State a, State b, State c) -> State {
            if (b == n && c == 0) return n + 1;
            if (b == n && c == 1) return n + 2;
            if (a >= n && b < n && c < n) return base.g0(b, c);
            if (a < n && b < n && c < n) return base.g(a, b, c);
            if (a < n && b < n && c >= n) return base.g(a, b, 0);
            return b;
        },
        [&](State a, State) -> State { return a; });
}

// Two runs of a branch rule from the window [n, 0, 0, ...] (wall at site -1)
// whose site -1 goes through different state sequences: updating the wall
// first yields n, n+1; letting the base layer raise a 1 at site 0 before
// touching the wall yields n, n+2.
struct DivergenceDemo {
    Trajectory first_branch;
    Trajectory second_branch;
    int site = -1;
    SiteHistory history_first;
    SiteHistory history_second;
    Schedule schedule_first;
    Schedule schedule_second;
    int steps_until_one = 0;
};

inline DivergenceDemo divergence_demo(const RuleTable1D& undec_rule, int width, int horizon) {
    const int n = undec_rule.states().size - 3;
    if (n < 2) throw error("rule does not look like a branch rule (needs at least 5 states)");
    if (width < 2) throw error("window must hold the wall and at least one base cell");

    Configuration init;
    init.origin = -1;
    init.boundary = BoundaryMode::background(0);
    init.cells.assign(static_cast<std::size_t>(width), 0);
    init.cells[0] = n;

    // Branch 1: the wall reacts immediately to the 0 on its right.
    std::vector<std::vector<int>> first_sets{{-1}};

    // Branch 2: run everything right of the wall until site 0 holds 1.
    std::vector<int> rest;
    for (int x = 0; x < init.end(); ++x) rest.push_back(x);
    std::vector<std::vector<int>> second_sets;
    Configuration cur = init;
    int t = 0;
    while (cur.get(0) != 1) {
        if (t >= horizon)
            throw error("horizon " + std::to_string(horizon) +
                        " too small: the base layer never set site 0 to 1");
        cur = apply(undec_rule, cur, rest);
        second_sets.push_back(rest);
        ++t;
    }
    second_sets.push_back({-1});

    DivergenceDemo demo;
    demo.steps_until_one = t;
    demo.schedule_first = Schedule::explicit_sets(first_sets);
    demo.schedule_second = Schedule::explicit_sets(second_sets);
    demo.first_branch = simulate(undec_rule, init, demo.schedule_first, 1);
    demo.second_branch = simulate(undec_rule, init, demo.schedule_second, t + 1);
    demo.site = -1;
    demo.history_first = extract_history(demo.first_branch, -1);
    demo.history_second = extract_history(demo.second_branch, -1);

    const std::vector<State> want_first{n, n + 1};
    const std::vector<State> want_second{n, n + 2};
    if (demo.history_first.values != want_first || demo.history_second.values != want_second)
        throw error("branch rule did not produce the expected wall sequences");
    return demo;
}

} // namespace aca
