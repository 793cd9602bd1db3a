#pragma once

#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "aca/trajectory.hpp"

namespace aca {

// The deduplicated state sequence of one site: the raw per-step sequence with
// every element equal to its predecessor removed. values[k] is the state
// after the k-th effective update, so values[tau(x,t)] = eta(x,t).
struct SiteHistory {
    int site = 0;
    std::vector<State> values;
    friend bool operator==(const SiteHistory&, const SiteHistory&) = default;
};

inline SiteHistory extract_history(const Trajectory& traj, int x) {
    SiteHistory h;
    h.site = x;
    h.values.push_back(traj.state(x, 0));
    for (int t = 1; t <= traj.horizon(); ++t) {
        const State s = traj.state(x, t);
        if (s != h.values.back()) h.values.push_back(s);
    }
    return h;
}

// The canonical per-site sequences read off the synchronous run.
template <Automaton A>
std::vector<SiteHistory> zeta_from_synchronous(const A& a, const Configuration& initial, int steps) {
    const Trajectory traj = simulate(a, initial, Schedule::synchronous(), steps);
    std::vector<SiteHistory> out;
    out.reserve(static_cast<std::size_t>(initial.width()));
    for (int x = initial.origin; x < initial.end(); ++x) out.push_back(extract_history(traj, x));
    return out;
}

struct HistoryWitness {
    int site = 0;
    int schedule_a = 0;
    int schedule_b = 0;
    std::vector<State> zeta_a;
    std::vector<State> zeta_b;
};

struct HistoryVerdict {
    bool consistent = true;
    std::optional<HistoryWitness> witness;
};

// Simulate every schedule from the same initial window and require the
// per-site deduplicated sequences to agree wherever they overlap. Sequences
// of different lengths are fine: slower schedules simply make less progress.
// Fewer than two schedules (or zero steps) is vacuously consistent.
template <Automaton A>
HistoryVerdict invariant_history_test(const A& a, const Configuration& initial,
                                      std::span<const Schedule> schedules, int steps) {
    HistoryVerdict verdict;
    const int width = initial.width();
    std::vector<std::vector<State>> longest(static_cast<std::size_t>(width));
    std::vector<int> longest_from(static_cast<std::size_t>(width), -1);

    for (std::size_t s = 0; s < schedules.size(); ++s) {
        const Trajectory traj = simulate(a, initial, schedules[s], steps);
        for (int i = 0; i < width; ++i) {
            const int x = initial.origin + i;
            SiteHistory h = extract_history(traj, x);
            auto& best = longest[static_cast<std::size_t>(i)];
            const std::size_t common = std::min(best.size(), h.values.size());
            for (std::size_t k = 0; k < common; ++k) {
                if (best[k] != h.values[k]) {
                    verdict.consistent = false;
                    HistoryWitness w;
                    w.site = x;
                    w.schedule_a = longest_from[static_cast<std::size_t>(i)];
                    w.schedule_b = static_cast<int>(s);
                    w.zeta_a = best;
                    w.zeta_b = h.values;
                    verdict.witness = std::move(w);
                    return verdict;
                }
            }
            if (h.values.size() > best.size()) {
                best = std::move(h.values);
                longest_from[static_cast<std::size_t>(i)] = static_cast<int>(s);
            }
        }
    }
    return verdict;
}

struct DominationFailure {
    char condition = 'a'; // 'a': age inequality, 'b': equal ages, unequal states
    int site = 0;
    int t0 = 0;
    int t1 = 0;
    std::string describe() const {
        std::ostringstream os;
        os << "domination condition (" << condition << ") fails at site " << site << ", t0=" << t0
           << ", t1=" << t1;
        return os.str();
    }
};

// Does `upper` dominate `lower` until time u? (a) the effective age of every
// site in `lower` never exceeds its age in `upper`; (b) whenever the ages
// coincide, so do the states.
inline std::optional<DominationFailure> check_domination(const Trajectory& lower,
                                                         const Trajectory& upper, int u) {
    if (lower.initial() != upper.initial())
        throw error("domination requires trajectories with the same initial configuration");
    if (u > lower.horizon() || u > upper.horizon())
        throw error("domination horizon exceeds a trajectory's length");

    const int origin = lower.origin();
    const int width = lower.width();
    for (int i = 0; i < width; ++i) {
        const int x = origin + i;
        for (int t = 0; t <= u; ++t)
            if (lower.age(x, t) > upper.age(x, t))
                return DominationFailure{'a', x, t, t};
        for (int t0 = 0; t0 <= u; ++t0)
            for (int t1 = 0; t1 <= u; ++t1)
                if (lower.age(x, t0) == upper.age(x, t1) && lower.state(x, t0) != upper.state(x, t1))
                    return DominationFailure{'b', x, t0, t1};
    }
    return std::nullopt;
}

} // namespace aca
