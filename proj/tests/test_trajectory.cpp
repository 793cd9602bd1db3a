#include <catch2/catch.hpp>

#include <random>

#include "aca/rule.hpp"
#include "aca/trajectory.hpp"

using namespace aca;

namespace {

Configuration window(std::vector<State> cells, BoundaryMode b = BoundaryMode::background()) {
    return Configuration{0, std::move(cells), b};
}

} // namespace

TEST_CASE("free sites") {
    const auto ident = rules::identity(2);
    const auto max2 = rules::max_rule(2);
    const auto shift = rules::shift_rule(2);

    CHECK(free_sites(ident, window({0, 1, 0, 1})).empty());
    CHECK(free_sites(max2, window({0, 0, 1, 0, 0})) == std::vector<int>{1, 3});
    CHECK(free_sites(shift, window({0, 1, 0})) == std::vector<int>{0, 1});
}

TEST_CASE("apply updates exactly the named sites") {
    const auto max2 = rules::max_rule(2);
    const Configuration cfg = window({0, 0, 1, 0, 0});

    CHECK(apply(max2, cfg, std::vector<int>{}) == cfg);
    CHECK(apply(max2, cfg, std::vector<int>{1}).cells == std::vector<State>{0, 1, 1, 0, 0});

    const std::vector<std::vector<int>> seq{{1}, {3}};
    Configuration two_steps = apply(max2, apply(max2, cfg, seq[0]), seq[1]);
    CHECK(apply_seq(max2, cfg, seq) == two_steps);

    CHECK_THROWS_AS(apply(max2, cfg, std::vector<int>{9}), error);
}

TEST_CASE("updating everything equals updating the free sites") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 2);
        const auto rule = rules::random_rule(n, BoundaryMode::background(), rng());
        Configuration cfg = window({}, rule.boundary());
        for (int i = 0; i < 6; ++i) cfg.cells.push_back(static_cast<State>(rng() % n));
        std::vector<int> all;
        for (int x = 0; x < cfg.width(); ++x) all.push_back(x);
        CHECK(apply(rule, cfg, all) == apply(rule, cfg, free_sites(rule, cfg)));
    }
}

TEST_CASE("simulation with the identity rule never moves") {
    const auto ident = rules::identity(2);
    const Configuration cfg = window({0, 1, 1, 0});
    for (const Schedule& s : {Schedule::synchronous(), Schedule::bernoulli(0.7, 3),
                              Schedule::round_robin(2)}) {
        const Trajectory traj = simulate(ident, cfg, s, 10);
        for (const auto& f : traj.frames) CHECK(f == cfg);
        for (int x = 0; x < cfg.width(); ++x) CHECK(effective_age(traj, x, 10) == 0);
    }
}

TEST_CASE("synchronous and explicit steps of the max rule") {
    const auto max2 = rules::max_rule(2);
    const Configuration cfg = window({0, 0, 1, 0, 0});

    const Trajectory sync = simulate(max2, cfg, Schedule::synchronous(), 1);
    CHECK(sync.frames[1].cells == std::vector<State>{0, 1, 1, 1, 0});

    const Trajectory one = simulate(max2, cfg, Schedule::explicit_sets({{1}}), 1);
    CHECK(one.frames[1].cells == std::vector<State>{0, 1, 1, 0, 0});
    CHECK(effective_age(one, 1, 1) == 1);
    for (int x : {0, 2, 3, 4}) CHECK(effective_age(one, x, 1) == 0);
}

TEST_CASE("stored runs satisfy their bookkeeping invariants") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 2);
        const auto rule = rules::random_rule(n, BoundaryMode::background(), rng());
        Configuration cfg = window({}, rule.boundary());
        for (int i = 0; i < 8; ++i) cfg.cells.push_back(static_cast<State>(rng() % n));
        const Schedule sched = Schedule::bernoulli(0.5, rng());
        const Trajectory traj = simulate(rule, cfg, sched, 30);

        for (int t = 0; t < traj.horizon(); ++t) {
            const auto& cur = traj.frames[static_cast<std::size_t>(t)];
            const auto& next = traj.frames[static_cast<std::size_t>(t) + 1];
            const auto free = free_sites(rule, cur);
            for (int x = 0; x < cfg.width(); ++x) {
                const bool changed = next.get(x) != cur.get(x);
                // a change is always the rule's own transition
                if (changed) CHECK(next.get(x) == rule.eval(cur, x));
                // the recorded update set is exactly the changed sites
                const auto& upd = traj.updates[static_cast<std::size_t>(t)];
                CHECK((std::find(upd.begin(), upd.end(), x) != upd.end()) == changed);
                // changed sites were free
                if (changed) CHECK(std::find(free.begin(), free.end(), x) != free.end());
                // age recurrence, monotone, bounded by t
                CHECK(traj.age(x, t + 1) == traj.age(x, t) + (changed ? 1 : 0));
                CHECK(traj.age(x, t + 1) <= t + 1);
            }
        }
    }
}

TEST_CASE("synchronous runs follow the full update map exactly") {
    const auto rule = rules::random_rule(3, BoundaryMode::background(), 1234);
    Configuration cfg = window({0, 2, 1, 0, 1, 2});
    const Trajectory traj = simulate(rule, cfg, Schedule::synchronous(), 12);
    std::vector<int> all;
    for (int x = 0; x < cfg.width(); ++x) all.push_back(x);
    for (int t = 0; t < traj.horizon(); ++t)
        CHECK(traj.frames[static_cast<std::size_t>(t) + 1] ==
              apply(rule, traj.frames[static_cast<std::size_t>(t)], all));
}

TEST_CASE("replaying the realized update sets reproduces the run") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        const auto rule = rules::random_rule(2, BoundaryMode::background(), rng());
        Configuration cfg = window({});
        for (int i = 0; i < 10; ++i) cfg.cells.push_back(static_cast<State>(rng() % 2));
        const Trajectory orig = simulate(rule, cfg, Schedule::bernoulli(0.4, rng()), 25);
        const Trajectory replay = simulate(rule, cfg, replay_schedule(orig), orig.horizon());
        CHECK(replay.frames == orig.frames);
        CHECK(replay.updates == orig.updates);
        CHECK(replay.ages == orig.ages);
    }
}

TEST_CASE("bernoulli schedules are reproducible from the seed") {
    const auto rule = rules::max_rule(2);
    Configuration cfg = window({0, 1, 0, 0, 1, 0, 0, 0});
    const Trajectory a = simulate(rule, cfg, Schedule::bernoulli(0.3, 77), 20);
    const Trajectory b = simulate(rule, cfg, Schedule::bernoulli(0.3, 77), 20);
    CHECK(a.frames == b.frames);
    CHECK(a.updates == b.updates);
}

TEST_CASE("round robin cycles through the window") {
    const auto shift = rules::shift_rule(2);
    Configuration cfg = window({1, 0, 0, 0, 0});
    const Trajectory traj = simulate(shift, cfg, Schedule::round_robin(2), 3);
    // attempted sets are {0,1}, {2,3}, {4,0}; realized subsets of those
    for (int t = 0; t < 3; ++t)
        for (int x : traj.updates[static_cast<std::size_t>(t)])
            CHECK(((x % 5) == (2 * t) % 5 || (x % 5) == (2 * t + 1) % 5));
}

TEST_CASE("explicit schedules beyond their length idle") {
    const auto max2 = rules::max_rule(2);
    Configuration cfg = window({0, 1, 0});
    const Trajectory traj = simulate(max2, cfg, Schedule::explicit_sets({{0}}), 5);
    CHECK(traj.frames[1].cells == std::vector<State>{1, 1, 0});
    for (int t = 1; t < 5; ++t) CHECK(traj.updates[static_cast<std::size_t>(t)].empty());
}

TEST_CASE("explicit schedules must stay inside the window") {
    const auto max2 = rules::max_rule(2);
    Configuration cfg = window({0, 1, 0});
    CHECK_THROWS_AS(simulate(max2, cfg, Schedule::explicit_sets({{5}}), 1), error);
}

TEST_CASE("streaming simulation matches the dense run") {
    const auto rule = rules::random_rule(3, BoundaryMode::background(), 5150);
    Configuration cfg = window({0, 1, 2, 1, 0, 2, 2, 0});
    const Schedule sched = Schedule::bernoulli(0.6, 31);
    const Trajectory dense = simulate(rule, cfg, sched, 40);
    const StreamResult stream = simulate_stream(rule, cfg, sched, 40);
    CHECK(stream.last == dense.frames.back());
    CHECK(stream.ages == dense.ages.back());
}
