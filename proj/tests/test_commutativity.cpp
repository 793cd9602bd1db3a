#include <catch2/catch.hpp>

#include <functional>
#include <random>

#include "aca/commutativity.hpp"
#include "aca/network.hpp"
#include "aca/rule.hpp"
#include "aca/trajectory.hpp"

using namespace aca;

TEST_CASE("identity and max rules commute, xor does not") {
    CHECK(!check_local_commutativity_1d(rules::identity(2)).has_value());
    CHECK(!check_local_commutativity_1d(rules::identity(3)).has_value());
    CHECK(!check_local_commutativity_1d(rules::max_rule(2)).has_value());

    const auto w = check_local_commutativity_1d(rules::xor_rule());
    REQUIRE(w.has_value());
    CHECK(w->position == PairPosition::interior);
    CHECK(w->tuple == std::vector<State>{0, 0, 1, 0});
    CHECK(w->site_x == 1);
    CHECK(w->site_y == 2);
    CHECK(w->result_ordered == 1);
    CHECK(w->result_joint == 0);
}

TEST_CASE("pairwise window enumeration") {
    CHECK(check_pairwise_network(to_network(rules::identity(2), 5)).pass());

    const auto max_rep = check_pairwise_network(to_network(rules::max_rule(2), 5));
    CHECK(max_rep.pass());
    CHECK(max_rep.configs_checked == 32);

    const auto xor_rep = check_pairwise_network(to_network(rules::xor_rule(), 4));
    REQUIRE(!xor_rep.pass());
    const ViolationWitness& w = *xor_rep.witness;
    CHECK(w.position == PairPosition::network);

    // the documented counterexample: 0 0 1 0, pair (1,2)
    const auto net = to_network(rules::xor_rule(), 4);
    Configuration cfg{0, {0, 0, 1, 0}, BoundaryMode::background()};
    const std::vector<std::vector<int>> seq{{1}, {2}};
    CHECK(apply_seq(net, cfg, seq).cells == std::vector<State>{0, 1, 1, 0});
    CHECK(apply(net, cfg, std::vector<int>{1, 2}).cells == std::vector<State>{0, 1, 0, 0});
}

TEST_CASE("exhaustive mode refuses beyond its budget") {
    const auto net = to_network(rules::max_rule(2), 25);
    CHECK_THROWS_AS(check_pairwise_network(net), budget_error);
    // sampled mode still works there
    const auto rep = check_pairwise_network(net, SampledMode{50, 9});
    CHECK(rep.pass());
    CHECK(!rep.exhaustive);
    CHECK(rep.configs_checked == 50);
}

TEST_CASE("sampled mode finds the xor violation") {
    const auto net = to_network(rules::xor_rule(), 6);
    const auto rep = check_pairwise_network(net, SampledMode{500, 4});
    CHECK(!rep.pass());
}

TEST_CASE("local check and window enumeration always agree on two states") {
    // every 2-state free-boundary rule: 256 center tables x 16 edge tables
    int disagreements = 0;
    int edge_witnesses = 0;
    for (int gbits = 0; gbits < 256; ++gbits)
        for (int g0bits = 0; g0bits < 16; ++g0bits) {
            const auto rule = make_rule(
                2, BoundaryMode::free_half_line(),
                [&](State l, State c, State r) { return (gbits >> ((l << 2) | (c << 1) | r)) & 1; },
                [&](State c, State r) { return (g0bits >> ((c << 1) | r)) & 1; });
            const auto local = check_local_commutativity(rule);
            const bool pairwise_pass = check_pairwise_network(to_network(rule, 5)).pass();
            if (!local.has_value() != pairwise_pass) ++disagreements;
            // some rules fail only at a window edge; the tuple equations
            // alone would call them commutative
            if (local && local->position != PairPosition::interior) ++edge_witnesses;
        }
    CHECK(disagreements == 0);
    CHECK(edge_witnesses > 0);
}

TEST_CASE("monotonicity holds for commutative rules and fails for shift") {
    const auto ident = rules::identity(2);
    Configuration cfg{0, {0, 1, 0, 1}, BoundaryMode::background()};
    const std::vector<Trajectory> idle{simulate(ident, cfg, Schedule::synchronous(), 5)};
    CHECK(!check_monotonicity(ident, idle).has_value());

    std::mt19937_64 rng(17);
    const auto max2 = rules::max_rule(2);
    std::vector<Trajectory> runs;
    for (int i = 0; i < 5; ++i) {
        Configuration c{0, {}, BoundaryMode::background()};
        for (int j = 0; j < 7; ++j) c.cells.push_back(static_cast<State>(rng() % 2));
        runs.push_back(simulate(max2, c, Schedule::bernoulli(0.5, rng()), 20));
    }
    CHECK(!check_monotonicity(max2, runs).has_value());

    const auto shift = rules::shift_rule(2);
    Configuration scfg{0, {0, 1, 0}, BoundaryMode::background()};
    const std::vector<Trajectory> shifted{simulate(shift, scfg, Schedule::explicit_sets({{1}}), 1)};
    const auto w = check_monotonicity(shift, shifted);
    REQUIRE(w.has_value());
    CHECK(w->kind == ViolationWitness::Kind::monotonicity);
    CHECK(w->step == 0);
    CHECK(w->lost_site == 0);
}

TEST_CASE("witness replay: one at a time vs together") {
    const auto xor2 = rules::xor_rule();
    const auto w = check_local_commutativity_1d(xor2);
    REQUIRE(w.has_value());
    const WitnessReplay replay = witness_to_schedules(*w);
    CHECK(replay.initial.cells == std::vector<State>{0, 0, 1, 0});

    const Trajectory ordered = simulate(xor2, replay.initial, replay.ordered, 2);
    const Trajectory joint = simulate(xor2, replay.initial, replay.joint, 2);
    CHECK(ordered.frames[2] != joint.frames[2]);
    CHECK(ordered.frames[2].get(2) == 1);
    CHECK(joint.frames[2].get(2) == 0);

    // the recorded inequality replays bit-exactly
    CHECK(ordered.frames[2].get(w->diff_site) == w->result_ordered);
    CHECK(joint.frames[2].get(w->diff_site) == w->result_joint);
}

TEST_CASE("witness replay reproduces the recorded results for random rules") {
    std::mt19937_64 rng(501);
    int replayed = 0;
    while (replayed < 20) {
        const int n = 2 + static_cast<int>(rng() % 2);
        const auto rule = rules::random_rule(n, BoundaryMode::free_half_line(), rng());
        const auto w = check_local_commutativity(rule);
        if (!w) continue;
        ++replayed;
        const WitnessReplay replay = witness_to_schedules(*w);
        const Trajectory ordered = simulate(rule, replay.initial, replay.ordered, 2);
        const Trajectory joint = simulate(rule, replay.initial, replay.joint, 2);
        CHECK(ordered.frames[2].get(w->diff_site) == w->result_ordered);
        CHECK(joint.frames[2].get(w->diff_site) == w->result_joint);
        CHECK(w->result_ordered != w->result_joint);
    }
}

TEST_CASE("max over three states is not commutative: large values overtake") {
    // updating a site that absorbs a 2 exposes the 2 to its neighbor one step
    // early; over {0,1} no value can overtake this way
    const auto w = check_local_commutativity_1d(rules::max_rule(3));
    REQUIRE(w.has_value());
    const auto replay = witness_to_schedules(*w);
    const auto max3 = rules::max_rule(3);
    const Trajectory ordered = simulate(max3, replay.initial, replay.ordered, 2);
    const Trajectory joint = simulate(max3, replay.initial, replay.joint, 2);
    CHECK(ordered.frames[2].get(w->diff_site) != joint.frames[2].get(w->diff_site));
}

TEST_CASE("singleton chains equal joint updates for commutative rules") {
    std::mt19937_64 rng(808);
    std::vector<RuleTable1D> commutative{rules::identity(3), rules::max_rule(2)};
    // harvest a few certified-commutative random rules as well
    int found = 0;
    while (found < 3) {
        const auto rule = rules::random_rule(2, BoundaryMode::free_half_line(), rng());
        if (!check_local_commutativity(rule).has_value()) {
            commutative.push_back(rule);
            ++found;
        }
    }
    for (const auto& rule : commutative) {
        for (int trial = 0; trial < 30; ++trial) {
            Configuration cfg{0, {}, rule.boundary()};
            const int n = rule.states().size;
            for (int i = 0; i < 7; ++i) cfg.cells.push_back(static_cast<State>(rng() % n));
            std::vector<int> free = free_sites(rule, cfg);
            if (free.empty()) continue;
            // a random subset of the free sites, in a random order
            std::vector<int> subset;
            for (int x : free)
                if (rng() % 2) subset.push_back(x);
            if (subset.empty()) subset.push_back(free[rng() % free.size()]);
            std::shuffle(subset.begin(), subset.end(), rng);
            std::vector<std::vector<int>> singletons;
            for (int x : subset) singletons.push_back({x});
            CHECK(apply_seq(rule, cfg, singletons) == apply(rule, cfg, subset));
        }
    }
}

namespace {

// A 4-site star: site 0 in the middle, leaves 1..3 see only themselves and
// the center. `center` and `leaf` map neighborhood tuples to next states.
NetworkAutomaton star_network(const std::function<State(std::span<const State>)>& center,
                              const std::function<State(State, State)>& leaf) {
    std::vector<std::vector<int>> nbrs{{0, 1, 2, 3}, {0, 1}, {0, 2}, {0, 3}};
    std::vector<std::vector<State>> tabs(4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) {
                    const std::vector<State> tuple{a, b, c, d};
                    tabs[0].push_back(center(tuple));
                }
    for (int x = 1; x <= 3; ++x)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) tabs[static_cast<std::size_t>(x)].push_back(leaf(a, b));
    return NetworkAutomaton{StateSpace{2}, std::move(nbrs), std::move(tabs)};
}

} // namespace

TEST_CASE("pairwise checks work on non-path topologies") {
    const auto spread = star_network(
        [](std::span<const State> t) {
            State m = 0;
            for (State s : t) m = std::max(m, s);
            return m;
        },
        [](State center, State self) { return std::max(center, self); });
    const auto rep = check_pairwise_network(spread);
    CHECK(rep.pass());
    CHECK(rep.configs_checked == 16);

    // parity rules on the star are order-dependent
    const auto parity = star_network(
        [](std::span<const State> t) { return t[1] ^ t[2] ^ t[3]; },
        [](State center, State self) { return center ^ self; });
    const auto bad = check_pairwise_network(parity);
    REQUIRE(!bad.pass());
    const ViolationWitness& w = *bad.witness;
    CHECK(w.position == PairPosition::network);
    CHECK(parity.interacts(w.site_x, w.site_y));

    // the witness replays through the engine on the network itself
    const WitnessReplay replay = witness_to_schedules(w);
    const Trajectory ordered = simulate(parity, replay.initial, replay.ordered, 2);
    const Trajectory joint = simulate(parity, replay.initial, replay.joint, 2);
    CHECK(ordered.frames[2].get(w.diff_site) == w.result_ordered);
    CHECK(joint.frames[2].get(w.diff_site) == w.result_joint);
    CHECK(w.result_ordered != w.result_joint);
}

TEST_CASE("witness_to_schedules rejects monotonicity witnesses") {
    ViolationWitness w;
    w.kind = ViolationWitness::Kind::monotonicity;
    CHECK_THROWS_AS(witness_to_schedules(w), error);
}
