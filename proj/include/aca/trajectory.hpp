#pragma once

#include <concepts>
#include <span>
#include <vector>

#include "aca/schedule.hpp"
#include "aca/types.hpp"

namespace aca {

// Anything that can evaluate the transition at a single site of a window.
template <class A>
concept Automaton = requires(const A& a, const Configuration& c, int x) {
    { a.states() } -> std::convertible_to<StateSpace>;
    { a.eval(c, x) } -> std::convertible_to<State>;
};

// A stored run: frames[t] for t = 0..T, the realized update sets U(t)
// (sites whose state changed between t and t+1, ascending), and the
// effective-age table tau(x, t) = number of effective updates of x before t.
struct Trajectory {
    std::vector<Configuration> frames;
    std::vector<std::vector<int>> updates;
    std::vector<std::vector<int>> ages;

    int horizon() const { return static_cast<int>(updates.size()); }
    const Configuration& initial() const { return frames.front(); }
    int origin() const { return frames.front().origin; }
    int width() const { return frames.front().width(); }

    State state(int x, int t) const { return frames.at(static_cast<std::size_t>(t)).get(x); }
    int age(int x, int t) const {
        const auto& row = ages.at(static_cast<std::size_t>(t));
        const int i = x - origin();
        if (i < 0 || i >= static_cast<int>(row.size()))
            throw error("site " + std::to_string(x) + " is outside the window");
        return row[static_cast<std::size_t>(i)];
    }
};

inline int effective_age(const Trajectory& traj, int x, int t) { return traj.age(x, t); }

namespace detail {

inline void require_valid_window(const Configuration& cfg) {
    if (cfg.boundary.kind == BoundaryKind::free_half_line && cfg.origin != 0)
        throw error("free-boundary windows start at origin 0");
}

} // namespace detail

// L(xi): the sites whose update would change their state.
template <Automaton A>
std::vector<int> free_sites(const A& a, const Configuration& cfg) {
    detail::require_valid_window(cfg);
    std::vector<int> out;
    for (int x = cfg.origin; x < cfg.end(); ++x)
        if (a.eval(cfg, x) != cfg.get(x)) out.push_back(x);
    return out;
}

// f(xi, E): update exactly the sites in E (simultaneously), leave the rest.
template <Automaton A>
Configuration apply(const A& a, const Configuration& cfg, std::span<const int> sites) {
    detail::require_valid_window(cfg);
    Configuration next = cfg;
    for (const int x : sites) {
        if (!cfg.in_window(x)) throw error("update set names site " + std::to_string(x) + " outside the window");
        next.ref(x) = a.eval(cfg, x);
    }
    return next;
}

// f(xi, E1, E2, ...): left-to-right composition of apply.
template <Automaton A>
Configuration apply_seq(const A& a, Configuration cfg, std::span<const std::vector<int>> steps) {
    for (const auto& sites : steps) cfg = apply(a, cfg, sites);
    return cfg;
}

// Run `steps` steps under the schedule. Each step applies the attempted set;
// the realized update set is recorded as the sites that actually changed.
template <Automaton A>
Trajectory simulate(const A& a, const Configuration& initial, const Schedule& schedule, int steps) {
    if (steps < 0) throw error("step count must be nonnegative");
    Trajectory traj;
    traj.frames.reserve(static_cast<std::size_t>(steps) + 1);
    traj.frames.push_back(initial);
    traj.ages.push_back(std::vector<int>(static_cast<std::size_t>(initial.width()), 0));

    detail::ScheduleRunner runner(schedule, initial.origin, initial.width());
    for (int t = 0; t < steps; ++t) {
        const Configuration& cur = traj.frames.back();
        const std::vector<int> attempted = runner.next(t);
        Configuration next = apply(a, cur, attempted);

        std::vector<int> realized;
        for (const int x : attempted)
            if (next.get(x) != cur.get(x)) realized.push_back(x);

        std::vector<int> row = traj.ages.back();
        for (const int x : realized) ++row[static_cast<std::size_t>(x - initial.origin)];

        traj.updates.push_back(std::move(realized));
        traj.ages.push_back(std::move(row));
        traj.frames.push_back(std::move(next));
    }
    return traj;
}

// Memory-light variant for long runs: keeps only the last frame and the
// final effective ages.
struct StreamResult {
    Configuration last;
    std::vector<int> ages;
    long long total_updates = 0;
};

template <Automaton A>
StreamResult simulate_stream(const A& a, const Configuration& initial, const Schedule& schedule,
                             int steps) {
    if (steps < 0) throw error("step count must be nonnegative");
    StreamResult res{initial, std::vector<int>(static_cast<std::size_t>(initial.width()), 0), 0};
    detail::ScheduleRunner runner(schedule, initial.origin, initial.width());
    for (int t = 0; t < steps; ++t) {
        const std::vector<int> attempted = runner.next(t);
        Configuration next = apply(a, res.last, attempted);
        for (const int x : attempted)
            if (next.get(x) != res.last.get(x)) {
                ++res.ages[static_cast<std::size_t>(x - initial.origin)];
                ++res.total_updates;
            }
        res.last = std::move(next);
    }
    return res;
}

// Re-run a stored trajectory's realized update sets as an explicit schedule.
inline Schedule replay_schedule(const Trajectory& traj) {
    return Schedule::explicit_sets(traj.updates);
}

} // namespace aca
