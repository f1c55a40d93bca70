#include <doctest.h>

#include "btpg/io.hpp"
#include "btpg/plan.hpp"
#include "support/fixtures.hpp"

using namespace btpg;

TEST_CASE("swap across an edge is an edge conflict") {
    MapfPlan plan;
    plan.map = GridMap(2, 1);
    plan.paths = {
        {0, {{0, 0}, {1, 0}}},
        {1, {{1, 0}, {0, 0}}},
    };
    const ValidationReport report = validate_plan(plan);
    CHECK_FALSE(report.ok());
    bool edge_conflict = false;
    for (const Violation& v : report.violations) {
        edge_conflict = edge_conflict || v.kind == ViolationKind::EdgeConflict;
    }
    CHECK(edge_conflict);
}

TEST_CASE("following into a just-vacated cell is allowed") {
    // Agent 1 enters E=(1,0) at the exact timestep agent 0 leaves it.
    MapfPlan plan;
    plan.map = GridMap(3, 1);
    plan.paths = {
        {0, {{1, 0}, {2, 0}}},
        {1, {{0, 0}, {1, 0}}},
    };
    CHECK(validate_plan(plan).ok());
}

TEST_CASE("single agent with waits is fine") {
    MapfPlan plan;
    plan.map = GridMap(4, 1);
    plan.paths = {{0, {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {1, 0}}}};
    CHECK(validate_plan(plan).ok());
    CHECK(path_duration(plan.paths[0]) == 4);
}

TEST_CASE("structural violations are reported") {
    MapfPlan plan;
    plan.map = GridMap(3, 3);
    plan.map.set_blocked({1, 1});

    SUBCASE("out of bounds") {
        plan.paths = {{0, {{2, 2}, {3, 2}}}};
        const auto report = validate_plan(plan);
        REQUIRE_FALSE(report.ok());
        CHECK(report.violations[0].kind == ViolationKind::OutOfBounds);
    }
    SUBCASE("blocked cell") {
        plan.paths = {{0, {{1, 0}, {1, 1}}}};
        const auto report = validate_plan(plan);
        REQUIRE_FALSE(report.ok());
        CHECK(report.violations[0].kind == ViolationKind::BlockedCell);
    }
    SUBCASE("diagonal step rejected") {
        plan.paths = {{0, {{0, 0}, {1, 1}}}};
        const auto report = validate_plan(plan);
        REQUIRE_FALSE(report.ok());
        bool non_adjacent = false;
        for (const Violation& v : report.violations) {
            non_adjacent = non_adjacent || v.kind == ViolationKind::NonAdjacentStep;
        }
        CHECK(non_adjacent);
    }
    SUBCASE("no agents") {
        const auto report = validate_plan(plan);
        REQUIRE_FALSE(report.ok());
        CHECK(report.violations[0].kind == ViolationKind::EmptyPlan);
    }
}

TEST_CASE("resting agents conflict with later visitors") {
    MapfPlan plan;
    plan.map = GridMap(3, 1);
    plan.paths = {
        {0, {{0, 0}, {1, 0}}},           // rests at (1,0) from t=1 on
        {1, {{2, 0}, {2, 0}, {1, 0}}},   // walks into it at t=2
    };
    const auto report = validate_plan(plan);
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations[0].kind == ViolationKind::VertexConflict);
    CHECK(report.violations[0].timestep == 2);
}

TEST_CASE("movingai map parsing") {
    SUBCASE("all free") {
        const GridMap map = load_map("type octile\nheight 2\nwidth 2\nmap\n..\n..\n");
        CHECK(map.width() == 2);
        CHECK(map.height() == 2);
        CHECK(map.blocked_cells().empty());
    }
    SUBCASE("one obstacle") {
        const GridMap map = load_map("type octile\nheight 1\nwidth 2\nmap\n.@\n");
        CHECK(map.blocked({1, 0}));
        CHECK_FALSE(map.blocked({0, 0}));
    }
    SUBCASE("trees are blocked") {
        const GridMap map = load_map("type octile\nheight 1\nwidth 2\nmap\nT.\n");
        CHECK(map.blocked({0, 0}));
    }
    SUBCASE("malformed header reports the line") {
        try {
            load_map("type octile\nheight x\nwidth 2\nmap\n..\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
        }
    }
    SUBCASE("short row reports the line") {
        try {
            load_map("type octile\nheight 2\nwidth 3\nmap\n...\n..\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 6);
        }
    }
}

TEST_CASE("movingai scenario parsing") {
    const GridMap map = load_map("type octile\nheight 2\nwidth 3\nmap\n...\n...\n");
    SUBCASE("well formed") {
        const auto entries = load_scenario(
            "version 1\n0\tm.map\t3\t2\t0\t0\t2\t1\t3.0\n0\tm.map\t3\t2\t1\t0\t0\t1\t2.0\n",
            map);
        REQUIRE(entries.size() == 2);
        CHECK(entries[0].start == Location{0, 0});
        CHECK(entries[0].goal == Location{2, 1});
        CHECK(entries[1].start == Location{1, 0});
    }
    SUBCASE("out-of-bounds coordinates are rejected with a line number") {
        try {
            load_scenario("version 1\n0\tm.map\t3\t2\t0\t0\t5\t1\t3.0\n", map);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
        }
    }
}

TEST_CASE("plan json round trip") {
    const MapfPlan plan = testing::scenario1_plan();
    const MapfPlan back = plan_from_json(plan_to_json(plan));
    CHECK(back == plan);
    CHECK(validate_plan(back).ok() == validate_plan(plan).ok());
}

TEST_CASE("round trip preserves the validation verdict of a conflicting plan") {
    MapfPlan plan;
    plan.map = GridMap(2, 1);
    plan.paths = {
        {0, {{0, 0}, {1, 0}}},
        {1, {{1, 0}, {0, 0}}},
    };
    REQUIRE_FALSE(validate_plan(plan).ok());
    const MapfPlan back = plan_from_json(plan_to_json(plan));
    CHECK(back == plan);
    CHECK_FALSE(validate_plan(back).ok());
}

TEST_CASE("plan json rejects bad inputs") {
    CHECK_THROWS_AS(plan_from_json("{"), ParseError);
    CHECK_THROWS_AS(plan_from_json(R"({"width":2,"height":1,"blocked":[],"paths":[]})"),
                    ParseError);
    // Non-adjacent consecutive steps.
    CHECK_THROWS_AS(
        plan_from_json(
            R"({"width":3,"height":3,"blocked":[],"paths":[{"agent":0,"steps":[[0,0],[2,2]]}]})"),
        ParseError);
    // Missing field.
    CHECK_THROWS_AS(plan_from_json(R"({"width":2,"height":1,"paths":[]})"), ParseError);
}

TEST_CASE("random plans survive the json round trip with the same verdict") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto inst = testing::random_solved_instance(seed, 8, 8, 0.15, 4);
        REQUIRE(inst.has_value());
        const MapfPlan back = plan_from_json(plan_to_json(inst->plan));
        CHECK(back == inst->plan);
        CHECK(validate_plan(back).ok());
    }
}
