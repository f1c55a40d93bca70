#include <doctest.h>

#include <algorithm>
#include <set>

#include "btpg/tpg.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace btpg;

TEST_CASE("scenario 2 yields the (F,E) type-2 edge") {
    const Tpg tpg = build_tpg(testing::scenario2_plan());
    REQUIRE(tpg.type2.size() == 1);
    CHECK(tpg.type2[0] == testing::scenario2_edge());
    // Wait omitted: blue's chain is B,E,H.
    CHECK(tpg.chain_length(1) == 3);
    CHECK(tpg.entry_times[1] == std::vector<int>{0, 2, 3});
}

TEST_CASE("single agent has no type-2 edges") {
    MapfPlan plan;
    plan.map = GridMap(3, 1);
    plan.paths = {{0, {{0, 0}, {1, 0}, {1, 0}, {2, 0}}}};
    const Tpg tpg = build_tpg(plan);
    CHECK(tpg.type2.empty());
    CHECK(tpg.chain_length(0) == 3);
}

TEST_CASE("2x2 rotation produces an all-type-2 cycle") {
    const Tpg tpg = build_tpg(testing::rotation_plan_2x2());
    CHECK(tpg.type2.size() == 4);
    for (const Type2Edge& e : tpg.type2) {
        CHECK(e.from.index == 1);
        CHECK(e.to.index == 1);
    }
    CHECK(is_valid_tpg(tpg));

    const auto g = oracle::graph_of_chains(tpg);
    const auto cycles = oracle::simple_cycles(g);
    REQUIRE(cycles.size() == 1);
    CHECK(oracle::cycle_is_rotation(g, cycles[0]));
}

TEST_CASE("build_tpg rejects invalid plans") {
    MapfPlan plan;
    plan.map = GridMap(2, 1);
    plan.paths = {{0, {{0, 0}, {1, 0}}}, {1, {{1, 0}, {0, 0}}}};
    CHECK_THROWS_AS(build_tpg(plan), std::invalid_argument);
}

TEST_CASE("classify_cycle") {
    const TpgVertex a{0, 1}, b{1, 1}, c{2, 1};
    SUBCASE("three type-2 edges closed is a rotation") {
        const std::vector<CycleEdge> cycle = {{a, b, true}, {b, c, true}, {c, a, true}};
        CHECK(classify_cycle(cycle) == CycleClass::Rotation);
    }
    SUBCASE("two type-2 edges closed is a deadlock") {
        const std::vector<CycleEdge> cycle = {{a, b, true}, {b, a, true}};
        CHECK(classify_cycle(cycle) == CycleClass::NonRotation);
    }
    SUBCASE("a type-1 edge makes it a non-rotation") {
        const std::vector<CycleEdge> cycle = {{a, b, true}, {b, c, false}, {c, a, true}};
        CHECK(classify_cycle(cycle) == CycleClass::NonRotation);
    }
    SUBCASE("open walks are rejected") {
        const std::vector<CycleEdge> open = {{a, b, true}, {b, c, true}};
        CHECK_THROWS_AS(classify_cycle(open), std::invalid_argument);
    }
}

TEST_CASE("hand-built three-agent rotation is a valid TPG") {
    const Tpg tpg = testing::rotation_tpg();
    CHECK(tpg.type2.size() == 3);
    CHECK(is_valid_tpg(tpg));
    CHECK(oracle::valid_tpg_by_enumeration(tpg));
}

TEST_CASE("reversing one scenario-1 edge creates a two-edge deadlock cycle") {
    Tpg tpg = build_tpg(testing::scenario1_plan());
    REQUIRE(tpg.type2.size() == 2);
    CHECK(is_valid_tpg(tpg));
    // Reverse of (F-successor_green, F_blue) closes a mutual pair with the
    // edge at E.
    const Type2Edge e_f{{0, 3}, {1, 2}, {2, 0}};
    REQUIRE(std::find(tpg.type2.begin(), tpg.type2.end(), e_f) != tpg.type2.end());
    tpg.type2.push_back({{1, 3}, {0, 2}, {2, 0}});
    CHECK_FALSE(is_valid_tpg(tpg));
    CHECK_FALSE(oracle::valid_tpg_by_enumeration(tpg));
}

TEST_CASE("entry order matches plan order for every edge") {
    for (std::uint64_t seed = 300; seed < 315; ++seed) {
        const auto inst = testing::random_solved_instance(seed, 8, 8, 0.15, 5);
        if (!inst) continue;
        const Tpg tpg = build_tpg(inst->plan);
        for (const Type2Edge& e : tpg.type2) {
            // m enters loc(v_{i+1}^m) no later than n enters the conflict.
            CHECK(tpg.entry_times[e.from.agent][e.from.index] <=
                  tpg.entry_times[e.to.agent][e.to.index]);
            CHECK(tpg.loc({e.from.agent, e.from.index - 1}) == e.conflict);
            CHECK(tpg.loc(e.to) == e.conflict);
            CHECK(e.from.agent != e.to.agent);
        }
        // Vertex counts: path length minus waits.
        for (int a = 0; a < tpg.num_agents(); ++a) {
            int waits = 0;
            const auto& steps = inst->plan.paths[a].steps;
            for (std::size_t t = 1; t < steps.size(); ++t) {
                waits += steps[t] == steps[t - 1] ? 1 : 0;
            }
            CHECK(tpg.chain_length(a) == static_cast<int>(steps.size()) - waits);
        }
    }
}

TEST_CASE("is_valid_tpg agrees with exhaustive enumeration on small graphs") {
    int checked = 0;
    for (std::uint64_t seed = 400; seed < 430 && checked < 12; ++seed) {
        const auto inst = testing::random_solved_instance(seed, 6, 6, 0.2, 3);
        if (!inst) continue;
        const Tpg tpg = build_tpg(inst->plan);
        if (tpg.total_vertices() > 20) continue;
        ++checked;
        CHECK(is_valid_tpg(tpg) == oracle::valid_tpg_by_enumeration(tpg));
        CHECK(is_valid_tpg(tpg));
    }
    CHECK(checked >= 5);
}

TEST_CASE("dot export marks type-2 edges dashed") {
    const std::string dot = to_dot(build_tpg(testing::scenario2_plan()));
    CHECK(dot.find("style=dashed") != std::string::npos);
    CHECK(dot.find("1,1@0:1") != std::string::npos);
}
