#include <catch2/catch.hpp>

#include <random>

#include "aca/gadgets.hpp"
#include "aca/history.hpp"
#include "aca/rule.hpp"

using namespace aca;

namespace {

// Two states, identity center rule, edge rule that raises 1 from (0,0) and
// then holds it: g0(0,0)=1, g0(0,1)=0, g0(1,*)=1.
RuleTable1D demo_base() {
    return make_rule(
        2, BoundaryMode::free_half_line(), [](State, State c, State) { return c; },
        [](State c, State r) -> State {
            if (c == 1) return 1;
            return r == 0 ? 1 : 0;
        });
}

} // namespace

TEST_CASE("sweep extension: every entry matches its case") {
    const RuleTable1D base = demo_base();
    const int n = base.states().size;
    const RuleTable1D gp = build_gprime(base);
    REQUIRE(gp.states().size == n + 1);

    for (State a = 0; a <= n; ++a)
        for (State b = 0; b <= n; ++b)
            for (State c = 0; c <= n; ++c) {
                State expect;
                if (a == n)
                    expect = n;
                else if (b == n)
                    expect = base.g(a, 0, 0);
                else if (c == n)
                    expect = base.g(a, b, 0);
                else
                    expect = base.g(a, b, c);
                CHECK(gp.g(a, b, c) == expect);
            }
    for (State a = 0; a <= n; ++a)
        for (State b = 0; b <= n; ++b) {
            State expect;
            if (a == n)
                expect = base.g0(0, 0);
            else if (b == n)
                expect = base.g0(a, 0);
            else
                expect = base.g0(a, b);
            CHECK(gp.g0(a, b) == expect);
        }
}

TEST_CASE("sweep extension preconditions") {
    auto bad_center = demo_base();
    bad_center.set_g(0, 0, 0, 1);
    CHECK_THROWS_WITH(build_gprime(bad_center), Catch::Contains("g(0,0,0)"));

    auto bad_edge = demo_base();
    bad_edge.set_g0(1, 0, 0);
    CHECK_THROWS_WITH(build_gprime(bad_edge), Catch::Contains("g0(1,0)"));

    CHECK_THROWS_AS(build_gprime(rules::max_rule(2)), error); // not a half-line rule
}

TEST_CASE("the sweep leaves the base's all-zero run in its wake") {
    const RuleTable1D base = demo_base();
    const RuleTable1D gp = build_gprime(base);
    const int n = base.states().size;
    const int width = 40;
    const int t_max = 30;

    Configuration zero{0, std::vector<State>(width, 0), base.boundary()};
    const Trajectory base_run = simulate(base, zero, Schedule::synchronous(), t_max);

    Configuration seeded{0, std::vector<State>(width, 0), gp.boundary()};
    seeded.cells[0] = n;
    const Trajectory sweep = simulate(gp, seeded, Schedule::synchronous(), t_max);

    for (int t = 1; t <= t_max; ++t) {
        // wake: strictly behind the sweep front
        for (int x = 0; x < t && x < width; ++x) CHECK(sweep.state(x, t) == base_run.state(x, t));
        // the sweeping symbol rides the front itself
        if (t < width) CHECK(sweep.state(t, t) == n);
        // ahead of the front nothing has happened yet
        for (int x = t + 1; x < width; ++x) CHECK(sweep.state(x, t) == 0);
    }
}

TEST_CASE("the wake is independent of garbage beyond the sweep") {
    const RuleTable1D base = demo_base();
    const RuleTable1D gp = build_gprime(base);
    const int n = base.states().size;
    const int width = 24;
    const int t_max = 16;

    Configuration zero{0, std::vector<State>(width, 0), base.boundary()};
    const Trajectory base_run = simulate(base, zero, Schedule::synchronous(), t_max);

    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 10; ++trial) {
        Configuration seeded{0, {}, gp.boundary()};
        seeded.cells.push_back(n);
        for (int i = 1; i < width; ++i)
            seeded.cells.push_back(static_cast<State>(rng() % (n + 1)));
        const Trajectory sweep = simulate(gp, seeded, Schedule::synchronous(), t_max);
        for (int t = 1; t <= t_max; ++t)
            for (int x = 0; x < t && x < width; ++x)
                CHECK(sweep.state(x, t) == base_run.state(x, t));
    }
}

TEST_CASE("branch rule: every entry matches its case") {
    const RuleTable1D base = demo_base();
    const int n = base.states().size;
    const RuleTable1D f = build_undec_rule(base);
    REQUIRE(f.states().size == n + 3);

    for (State a = 0; a < n + 3; ++a)
        for (State b = 0; b < n + 3; ++b)
            for (State c = 0; c < n + 3; ++c) {
                State expect;
                if (b == n && c == 0)
                    expect = n + 1;
                else if (b == n && c == 1)
                    expect = n + 2;
                else if (a >= n && b < n && c < n)
                    expect = base.g0(b, c);
                else if (a < n && b < n && c < n)
                    expect = base.g(a, b, c);
                else if (a < n && b < n && c >= n)
                    expect = base.g(a, b, 0);
                else
                    expect = b;
                CHECK(f.g(a, b, c) == expect);
            }
}

TEST_CASE("branch rule rejects non-commutative bases") {
    const auto xor_free = make_rule(
        2, BoundaryMode::free_half_line(), [](State l, State, State r) { return l ^ r; },
        [](State c, State) { return c; });
    CHECK_THROWS_WITH(build_undec_rule(xor_free), Catch::Contains("commutative"));
}

TEST_CASE("wall states are absorbing") {
    const RuleTable1D f = build_undec_rule(demo_base());
    const int n = f.states().size - 3;
    std::mt19937_64 rng(2323);
    for (int trial = 0; trial < 20; ++trial) {
        Configuration cfg{-2, {}, BoundaryMode::background(0)};
        for (int i = 0; i < 9; ++i)
            cfg.cells.push_back(static_cast<State>(rng() % f.states().size));
        const Trajectory traj = simulate(f, cfg, Schedule::bernoulli(0.5, rng()), 30);
        for (int x = cfg.origin; x < cfg.end(); ++x)
            if (cfg.get(x) >= n)
                for (int t = 0; t <= traj.horizon(); ++t) CHECK(traj.state(x, t) >= n);
    }
}

TEST_CASE("the two branches write different sequences into the wall") {
    const RuleTable1D base = demo_base();
    const RuleTable1D f = build_undec_rule(base);
    const int n = base.states().size;

    const DivergenceDemo demo = divergence_demo(f, 8, 20);
    CHECK(demo.site == -1);
    CHECK(demo.history_first.values == std::vector<State>{n, n + 1});
    CHECK(demo.history_second.values == std::vector<State>{n, n + 2});
    CHECK(demo.steps_until_one == 1); // the demo base raises its 1 immediately

    const std::vector<Schedule> schedules{demo.schedule_first, demo.schedule_second};
    const HistoryVerdict verdict = invariant_history_test(
        f, demo.first_branch.initial(), schedules, demo.second_branch.horizon());
    CHECK(!verdict.consistent);
    REQUIRE(verdict.witness.has_value());
    CHECK(verdict.witness->site == -1);
}

TEST_CASE("no divergence within the horizon is an explicit failure") {
    // the base layer never raises a 1: site 0 stays 0 forever
    const auto quiet = make_rule(
        2, BoundaryMode::free_half_line(), [](State, State c, State) { return c; },
        [](State c, State) { return c; });
    const RuleTable1D f = build_undec_rule(quiet);
    CHECK_THROWS_WITH(divergence_demo(f, 8, 50), Catch::Contains("horizon"));

    // and a horizon of zero cannot even reach the demo base's first step
    const RuleTable1D live = build_undec_rule(demo_base());
    CHECK_THROWS_WITH(divergence_demo(live, 8, 0), Catch::Contains("horizon"));
}
