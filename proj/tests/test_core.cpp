#include <catch2/catch.hpp>

#include <random>

#include "aca/io.hpp"
#include "aca/network.hpp"
#include "aca/rule.hpp"

using namespace aca;

TEST_CASE("single-site evaluation on builtins") {
    const auto ident = rules::identity(2);
    CHECK(ident.g(0, 1, 0) == 1);

    const auto max2 = rules::max_rule(2);
    CHECK(max2.g(0, 0, 1) == 1);

    // custom edge table: site 0 of an all-zero half-line window flips to 1
    auto rule = rules::identity(2, BoundaryMode::free_half_line());
    rule.set_g0(0, 0, 1);
    Configuration cfg{0, {0, 0, 0}, BoundaryMode::free_half_line()};
    CHECK(rule.eval(cfg, 0) == 1);
    CHECK(rule.eval(cfg, 1) == 0);
}

TEST_CASE("state range is enforced") {
    const auto max2 = rules::max_rule(2);
    CHECK_THROWS_AS(max2.g(0, 2, 0), error);
    CHECK_THROWS_AS(max2.g0(-1, 0), error);
    CHECK_THROWS_AS(RuleTable1D(StateSpace{2}, std::vector<State>(8, 5), std::vector<State>(4, 0),
                                BoundaryMode::background()),
                    error);
}

TEST_CASE("every in-range tuple evaluates in range") {
    for (int n : {2, 3}) {
        for (std::uint64_t seed : {11u, 12u, 13u}) {
            const auto rule = rules::random_rule(n, BoundaryMode::background(), seed);
            for (State l = 0; l < n; ++l)
                for (State c = 0; c < n; ++c)
                    for (State r = 0; r < n; ++r) CHECK(rule.states().contains(rule.g(l, c, r)));
            for (State c = 0; c < n; ++c)
                for (State r = 0; r < n; ++r) CHECK(rule.states().contains(rule.g0(c, r)));
        }
    }
}

TEST_CASE("window reads resolve the boundary") {
    Configuration bg{0, {1, 0, 1}, BoundaryMode::background(0)};
    CHECK(bg.read(-1) == 0);
    CHECK(bg.read(3) == 0);
    CHECK(bg.read(1) == 0);

    Configuration cyc{0, {1, 0, 1}, BoundaryMode::cyclic()};
    CHECK(cyc.read(-1) == 1);
    CHECK(cyc.read(3) == 1);
    CHECK(cyc.read(4) == 0);

    Configuration half{0, {1, 0}, BoundaryMode::free_half_line()};
    CHECK(!half.read(-1).has_value());
    CHECK(half.read(2) == 0);

    CHECK_THROWS_AS(bg.get(7), error);
}

TEST_CASE("validation reports name the offending entries") {
    ParsedRule pr = parse_rule_text("states = 2\n"
                                    "boundary = background:0\n"
                                    "g: 0 0 0 -> 0\n"
                                    "default: identity\n");
    CHECK(pr.validate().valid);

    // a table with one hole and no default
    std::string text = "states = 2\nboundary = background:0\n";
    for (int l = 0; l < 2; ++l)
        for (int c = 0; c < 2; ++c)
            for (int r = 0; r < 2; ++r)
                if (!(l == 1 && c == 1 && r == 1))
                    text += "g: " + std::to_string(l) + " " + std::to_string(c) + " " +
                            std::to_string(r) + " -> 0\n";
    for (int c = 0; c < 2; ++c)
        for (int r = 0; r < 2; ++r)
            text += "g0: " + std::to_string(c) + " " + std::to_string(r) + " -> 0\n";
    ParsedRule holes = parse_rule_text(text);
    const auto rep = holes.validate();
    CHECK(!rep.valid);
    REQUIRE(rep.issues.size() == 1);
    CHECK(rep.issues[0].find("g(1,1,1)") != std::string::npos);

    ParsedRule range = parse_rule_text("states = 3\n"
                                       "default: identity\n"
                                       "g: 0 0 0 -> 5\n");
    const auto rep2 = range.validate();
    CHECK(!rep2.valid);
    CHECK(rep2.issues[0].find("out of range") != std::string::npos);
}

TEST_CASE("window networks agree with the rule table at every site") {
    std::mt19937_64 rng(404);
    const std::vector<BoundaryMode> modes{BoundaryMode::background(0), BoundaryMode::background(1),
                                          BoundaryMode::free_half_line(), BoundaryMode::cyclic()};
    for (int n : {2, 3}) {
        for (const auto& mode : modes) {
            const auto rule = rules::random_rule(n, mode, rng());
            for (int width : {1, 2, 3, 5}) {
                const NetworkAutomaton net = to_network(rule, width);
                for (int trial = 0; trial < 20; ++trial) {
                    Configuration cfg{0, {}, mode};
                    for (int i = 0; i < width; ++i)
                        cfg.cells.push_back(static_cast<State>(rng() % n));
                    for (int x = 0; x < width; ++x)
                        REQUIRE(net.eval(cfg, x) == rule.eval(cfg, x));
                }
            }
        }
    }
}

TEST_CASE("network validation catches structural problems") {
    // neighborhood missing the site itself
    auto rep = validate_network(StateSpace{2}, {{1}, {0, 1}}, {{0, 0}, {0, 0, 0, 0}});
    CHECK(!rep.valid);

    // wrong table size
    rep = validate_network(StateSpace{2}, {{0}}, {{0, 0, 0}});
    CHECK(!rep.valid);

    // out-of-range output
    rep = validate_network(StateSpace{2}, {{0}}, {{7, 0}});
    CHECK(!rep.valid);

    CHECK(validate_network(StateSpace{2}, {{0}}, {{0, 0}}).valid);
}
