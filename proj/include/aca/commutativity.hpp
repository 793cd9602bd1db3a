#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "aca/network.hpp"
#include "aca/trajectory.hpp"

namespace aca {

// A 1-D rule viewed from inside a window: the interior form plus the two
// edge forms that absorb the boundary. Cyclic rules have no edges.
template <class R>
concept Local1D = requires(const R& r, State s) {
    { r.states() } -> std::convertible_to<StateSpace>;
    { r.boundary() } -> std::convertible_to<BoundaryMode>;
    { r.interior(s, s, s) } -> std::convertible_to<State>;
    { r.left_edge(s, s) } -> std::convertible_to<State>;
    { r.right_edge(s, s) } -> std::convertible_to<State>;
};

enum class PairPosition { interior, left_edge, right_edge, network };
enum class UpdateOrder { first_then_second, second_then_first };

// A concrete counterexample. `config` together with (site_x, site_y, order)
// replays to the recorded inequality through the trajectory engine.
struct ViolationWitness {
    enum class Kind { local_commutativity, monotonicity };
    Kind kind = Kind::local_commutativity;

    // local commutativity
    PairPosition position = PairPosition::interior;
    std::vector<State> tuple;   // offending tuple; window cells for network witnesses
    Configuration config;       // replayable window realizing the tuple
    int site_x = 0;             // the pair, absolute; site_x < site_y
    int site_y = 0;
    UpdateOrder order = UpdateOrder::first_then_second;
    int diff_site = 0;          // site where the two results differ
    State result_ordered = 0;   // value there after updating one at a time
    State result_joint = 0;     // value there after updating both together

    // monotonicity
    int step = -1;              // t with L(t) \ U(t) not contained in L(t+1)
    int lost_site = 0;          // the site whose freedom disappeared
    std::vector<int> update_set;

    std::string describe() const {
        std::ostringstream os;
        if (kind == Kind::monotonicity) {
            os << "WITNESS monotonicity\nstep " << step << "\nlost-site " << lost_site << "\nupdate-set";
            for (int x : update_set) os << ' ' << x;
            os << '\n';
            return os.str();
        }
        os << "WITNESS local-commutativity\nposition ";
        switch (position) {
        case PairPosition::interior: os << "interior"; break;
        case PairPosition::left_edge: os << "left-edge"; break;
        case PairPosition::right_edge: os << "right-edge"; break;
        case PairPosition::network: os << "network"; break;
        }
        os << "\nsites " << site_x << ' ' << site_y;
        os << "\norder " << (order == UpdateOrder::first_then_second ? "xy" : "yx");
        os << "\ntuple";
        for (State s : tuple) os << ' ' << s;
        os << "\ndiff-site " << diff_site << "\nresult-ordered " << result_ordered
           << "\nresult-joint " << result_joint << '\n';
        return os.str();
    }
};

namespace detail {

template <Local1D R>
Configuration witness_window(const R& rule, const std::vector<State>& tuple) {
    Configuration cfg;
    cfg.origin = 0;
    cfg.cells = tuple;
    cfg.boundary = rule.boundary();
    return cfg;
}

} // namespace detail

// Exhaustive adjacent-pair check for a 1-D rule. For every window tuple in
// which two neighboring sites are both free, updating them one at a time (in
// either order) must equal updating them together. Pairs at distance >= 2
// never interact under radius 1 and are skipped. Non-cyclic rules also get
// the analogous window-edge pairs, with the edge forms in place of g.
// `keep_tuple` prunes the interior enumeration (used by composite rules whose
// tuple spaces carry dead combinations); edge enumerations are not pruned.
template <Local1D R, class F>
std::optional<ViolationWitness> check_local_commutativity(const R& rule, F&& keep_tuple) {
    const int n = rule.states().size;

    auto witness = [&](PairPosition pos, std::vector<State> tuple, int sx, int sy, UpdateOrder ord,
                       int diff, State got, State joint) {
        ViolationWitness w;
        w.kind = ViolationWitness::Kind::local_commutativity;
        w.position = pos;
        w.config = detail::witness_window(rule, tuple);
        w.tuple = std::move(tuple);
        w.site_x = sx;
        w.site_y = sy;
        w.order = ord;
        w.diff_site = diff;
        w.result_ordered = got;
        w.result_joint = joint;
        return w;
    };

    // Interior pair (x, y) = (1, 2) inside the window [r0 r1 r2 r3].
    for (State r0 = 0; r0 < n; ++r0)
        for (State r1 = 0; r1 < n; ++r1)
            for (State r2 = 0; r2 < n; ++r2)
                for (State r3 = 0; r3 < n; ++r3) {
                    if (!keep_tuple(r0, r1, r2, r3)) continue;
                    const State a = rule.interior(r0, r1, r2);
                    const State b = rule.interior(r1, r2, r3);
                    if (a == r1 || b == r2) continue; // pair not jointly free
                    if (const State y_after = rule.interior(a, r2, r3); y_after != b)
                        return witness(PairPosition::interior, {r0, r1, r2, r3}, 1, 2,
                                       UpdateOrder::first_then_second, 2, y_after, b);
                    if (const State x_after = rule.interior(r0, r1, b); x_after != a)
                        return witness(PairPosition::interior, {r0, r1, r2, r3}, 1, 2,
                                       UpdateOrder::second_then_first, 1, x_after, a);
                }

    if (rule.boundary().kind == BoundaryKind::cyclic) return std::nullopt;

    // Left-edge pair (0, 1) inside the window [r1 r2 r3].
    for (State r1 = 0; r1 < n; ++r1)
        for (State r2 = 0; r2 < n; ++r2)
            for (State r3 = 0; r3 < n; ++r3) {
                const State a = rule.left_edge(r1, r2);
                const State b = rule.interior(r1, r2, r3);
                if (a == r1 || b == r2) continue;
                if (const State y_after = rule.interior(a, r2, r3); y_after != b)
                    return witness(PairPosition::left_edge, {r1, r2, r3}, 0, 1,
                                   UpdateOrder::first_then_second, 1, y_after, b);
                if (const State x_after = rule.left_edge(r1, b); x_after != a)
                    return witness(PairPosition::left_edge, {r1, r2, r3}, 0, 1,
                                   UpdateOrder::second_then_first, 0, x_after, a);
            }

    // Right-edge pair (1, 2) inside the window [r0 r1 r2], site 2 at the edge.
    for (State r0 = 0; r0 < n; ++r0)
        for (State r1 = 0; r1 < n; ++r1)
            for (State r2 = 0; r2 < n; ++r2) {
                const State a = rule.interior(r0, r1, r2);
                const State b = rule.right_edge(r1, r2);
                if (a == r1 || b == r2) continue;
                if (const State y_after = rule.right_edge(a, r2); y_after != b)
                    return witness(PairPosition::right_edge, {r0, r1, r2}, 1, 2,
                                   UpdateOrder::first_then_second, 2, y_after, b);
                if (const State x_after = rule.interior(r0, r1, b); x_after != a)
                    return witness(PairPosition::right_edge, {r0, r1, r2}, 1, 2,
                                   UpdateOrder::second_then_first, 1, x_after, a);
            }

    return std::nullopt;
}

template <Local1D R>
std::optional<ViolationWitness> check_local_commutativity(const R& rule) {
    return check_local_commutativity(rule, [](State, State, State, State) { return true; });
}

inline std::optional<ViolationWitness> check_local_commutativity_1d(const RuleTable1D& rule) {
    return check_local_commutativity(rule);
}

// Pairwise check on a general network: for each configuration and each
// interacting free pair, f(xi,{x},{y}) = f(xi,{y},{x}) = f(xi,{x,y}).
struct PairwiseOptions {
    std::uint64_t budget = std::uint64_t{1} << 20;
};
struct SampledMode {
    std::int64_t count = 0;
    std::uint64_t seed = 0;
};
struct PairwiseReport {
    std::optional<ViolationWitness> witness;
    std::uint64_t configs_checked = 0;
    long double config_space = 0;
    bool exhaustive = true;
    bool pass() const { return !witness.has_value(); }
};

namespace detail {

inline std::optional<ViolationWitness> pairwise_check_config(const NetworkAutomaton& net,
                                                             const Configuration& cfg) {
    const std::vector<int> free = free_sites(net, cfg);
    for (std::size_t i = 0; i < free.size(); ++i)
        for (std::size_t j = i + 1; j < free.size(); ++j) {
            const int x = free[i];
            const int y = free[j];
            if (!net.interacts(x, y)) continue;
            const std::vector<int> both{x, y};
            const Configuration joint = apply(net, cfg, both);
            const std::vector<std::vector<int>> xy{{x}, {y}};
            const std::vector<std::vector<int>> yx{{y}, {x}};
            const Configuration fxy = apply_seq(net, cfg, xy);
            const Configuration fyx = apply_seq(net, cfg, yx);
            for (int z : both) {
                const auto make = [&](UpdateOrder ord, State got) {
                    ViolationWitness w;
                    w.kind = ViolationWitness::Kind::local_commutativity;
                    w.position = PairPosition::network;
                    w.tuple = cfg.cells;
                    w.config = cfg;
                    w.site_x = x;
                    w.site_y = y;
                    w.order = ord;
                    w.diff_site = z;
                    w.result_ordered = got;
                    w.result_joint = joint.get(z);
                    return w;
                };
                if (fxy.get(z) != joint.get(z))
                    return make(UpdateOrder::first_then_second, fxy.get(z));
                if (fyx.get(z) != joint.get(z))
                    return make(UpdateOrder::second_then_first, fyx.get(z));
            }
        }
    return std::nullopt;
}

} // namespace detail

inline PairwiseReport check_pairwise_network(const NetworkAutomaton& net, PairwiseOptions opt = {}) {
    const int n = net.states().size;
    const int sites = net.site_count();
    long double space = 1;
    std::uint64_t count = 1;
    bool overflow = false;
    for (int i = 0; i < sites; ++i) {
        space *= n;
        if (count > opt.budget / static_cast<std::uint64_t>(n))
            overflow = true;
        else
            count *= static_cast<std::uint64_t>(n);
    }
    if (overflow || count > opt.budget)
        throw budget_error("exhaustive enumeration needs " + std::to_string(static_cast<double>(space)) +
                           " configurations (budget " + std::to_string(opt.budget) +
                           "); use sampled mode");

    PairwiseReport rep;
    rep.config_space = space;
    rep.exhaustive = true;
    Configuration cfg;
    cfg.origin = 0;
    cfg.cells.assign(static_cast<std::size_t>(sites), 0);
    cfg.boundary = BoundaryMode::background();
    for (std::uint64_t k = 0; k < count; ++k) {
        ++rep.configs_checked;
        if (auto w = detail::pairwise_check_config(net, cfg)) {
            rep.witness = std::move(w);
            return rep;
        }
        // odometer, last site fastest
        int i = sites - 1;
        while (i >= 0) {
            if (++cfg.cells[static_cast<std::size_t>(i)] < n) break;
            cfg.cells[static_cast<std::size_t>(i)] = 0;
            --i;
        }
    }
    return rep;
}

inline PairwiseReport check_pairwise_network(const NetworkAutomaton& net, SampledMode mode) {
    const int n = net.states().size;
    const int sites = net.site_count();
    PairwiseReport rep;
    rep.config_space = 1;
    for (int i = 0; i < sites; ++i) rep.config_space *= n;
    rep.exhaustive = false;
    std::mt19937_64 rng(mode.seed);
    Configuration cfg;
    cfg.origin = 0;
    cfg.boundary = BoundaryMode::background();
    for (std::int64_t k = 0; k < mode.count; ++k) {
        cfg.cells.resize(static_cast<std::size_t>(sites));
        for (auto& c : cfg.cells) c = static_cast<State>(rng() % static_cast<std::uint64_t>(n));
        ++rep.configs_checked;
        if (auto w = detail::pairwise_check_config(net, cfg)) {
            rep.witness = std::move(w);
            return rep;
        }
    }
    return rep;
}

// Check L(t) \ U(t) subset of L(t+1) at every step of every trajectory:
// updating sites must never take away another site's freedom.
template <Automaton A>
std::optional<ViolationWitness> check_monotonicity(const A& a, std::span<const Trajectory> trajectories) {
    for (const Trajectory& traj : trajectories) {
        for (int t = 0; t < traj.horizon(); ++t) {
            const std::vector<int> before = free_sites(a, traj.frames[static_cast<std::size_t>(t)]);
            const std::vector<int> after = free_sites(a, traj.frames[static_cast<std::size_t>(t) + 1]);
            const auto& updated = traj.updates[static_cast<std::size_t>(t)];
            for (int x : before) {
                if (std::find(updated.begin(), updated.end(), x) != updated.end()) continue;
                if (std::find(after.begin(), after.end(), x) == after.end()) {
                    ViolationWitness w;
                    w.kind = ViolationWitness::Kind::monotonicity;
                    w.config = traj.frames[static_cast<std::size_t>(t)];
                    w.step = t;
                    w.lost_site = x;
                    w.update_set = updated;
                    return w;
                }
            }
        }
    }
    return std::nullopt;
}

// Turn a local-commutativity witness into a replayable experiment: the two
// explicit schedules, simulated from the returned window, either produce
// different configurations at t = 2 or exhibit a monotonicity violation.
struct WitnessReplay {
    Configuration initial;
    Schedule ordered; // the two sites one at a time, in the witnessed order
    Schedule joint;   // both sites together, then an idle step
};

inline WitnessReplay witness_to_schedules(const ViolationWitness& w) {
    if (w.kind != ViolationWitness::Kind::local_commutativity)
        throw error("witness_to_schedules expects a local-commutativity witness");
    const int first = w.order == UpdateOrder::first_then_second ? w.site_x : w.site_y;
    const int second = w.order == UpdateOrder::first_then_second ? w.site_y : w.site_x;
    WitnessReplay rep;
    rep.initial = w.config;
    rep.ordered = Schedule::explicit_sets({{first}, {second}});
    rep.joint = Schedule::explicit_sets({{w.site_x, w.site_y}, {}});
    return rep;
}

} // namespace aca
