#pragma once

#include <optional>

#include "btpg/plan.hpp"
#include "btpg/planner.hpp"
#include "btpg/tpg.hpp"

namespace btpg::testing {

// Two agents crossing a corridor in opposite directions; the passing order
// at the two shared cells cannot be switched. Agent 0 (green) traverses
// E=(1,0) then F=(2,0); agent 1 (blue) traverses F then E later.
inline MapfPlan scenario1_plan() {
    MapfPlan plan;
    plan.map = GridMap(4, 2);
    plan.paths = {
        {0, {{1, 1}, {1, 0}, {2, 0}, {2, 1}}},
        {1, {{3, 1}, {3, 0}, {3, 0}, {2, 0}, {1, 0}, {0, 0}}},
    };
    return plan;
}

// Agent 0 (green) goes D=(0,1), E=(1,1), F=(2,1); agent 1 (blue) goes
// B=(1,0), waits, E=(1,1), H=(1,2). One switchable conflict at E.
inline MapfPlan scenario2_plan() {
    MapfPlan plan;
    plan.map = GridMap(3, 3);
    plan.paths = {
        {0, {{0, 1}, {1, 1}, {2, 1}}},
        {1, {{1, 0}, {1, 0}, {1, 1}, {1, 2}}},
    };
    return plan;
}

inline Type2Edge scenario2_edge() {
    return {{0, 2}, {1, 1}, {1, 1}};  // (F_green, E_blue)
}

// Three agents rotating through locations A -> B -> C -> A in one step.
// Not embeddable on a 4-connected grid (a triangle), so built directly.
inline Tpg rotation_tpg() {
    const Location A{0, 0}, B{1, 0}, C{2, 0};
    Tpg tpg;
    tpg.chains = {{A, B}, {B, C}, {C, A}};
    tpg.entry_times = {{0, 1}, {0, 1}, {0, 1}};
    // At each location the resident leaves as the predecessor arrives.
    tpg.type2 = {
        {{1, 1}, {0, 1}, B},  // agent 0 enters B no earlier than agent 1 enters C
        {{2, 1}, {1, 1}, C},
        {{0, 1}, {2, 1}, A},
    };
    return tpg;
}

// Grid-realizable rotation: four agents cycling around a 2x2 block.
inline MapfPlan rotation_plan_2x2() {
    MapfPlan plan;
    plan.map = GridMap(2, 2);
    plan.paths = {
        {0, {{0, 0}, {1, 0}}},
        {1, {{1, 0}, {1, 1}}},
        {2, {{1, 1}, {0, 1}}},
        {3, {{0, 1}, {0, 0}}},
    };
    return plan;
}

// Agent 1 follows agent 0 through the cells (1,0),(2,0),(3,0).
inline MapfPlan corridor_follow_plan() {
    MapfPlan plan;
    plan.map = GridMap(5, 1);
    plan.paths = {
        {0, {{1, 0}, {2, 0}, {3, 0}, {4, 0}}},
        {1, {{0, 0}, {1, 0}, {2, 0}, {3, 0}}},
    };
    return plan;
}

// The agents traverse the cells (0,0)..(3,0) in opposite directions at
// disjoint times.
inline MapfPlan corridor_opposite_plan() {
    MapfPlan plan;
    plan.map = GridMap(5, 2);
    plan.paths = {
        {0, {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {3, 1}}},
        {1, {{4, 1}, {4, 1}, {4, 1}, {4, 1}, {4, 0}, {3, 0}, {2, 0}, {1, 0}, {0, 0}}},
    };
    return plan;
}

// Three agents, three switchable conflicts at A=(1,1), C=(2,1), E=(2,2).
// Examined in order e_A, e_C, e_E: the reversal of e_C closes a cycle
// through e_A and e_E on the first pass, but once e_E is a pair the cycle
// contains an earlier state of agent 1 and a later pass converts e_C too.
inline MapfPlan fig6_style_plan() {
    MapfPlan plan;
    plan.map = GridMap(4, 4);
    plan.paths = {
        {0, {{1, 0}, {1, 1}, {2, 1}, {3, 1}}},
        {1, {{0, 1}, {0, 1}, {1, 1}, {1, 2}, {2, 2}, {3, 2}}},
        {2, {{2, 0}, {2, 0}, {2, 0}, {2, 1}, {2, 1}, {2, 2}, {2, 3}}},
    };
    return plan;
}

inline Type2Edge fig6_edge_a() { return {{0, 2}, {1, 1}, {1, 1}}; }
inline Type2Edge fig6_edge_c() { return {{0, 3}, {2, 1}, {2, 1}}; }
inline Type2Edge fig6_edge_e() { return {{1, 4}, {2, 2}, {2, 2}}; }

// Probing e = (v_2^0, v_1^1) closes a three-edge all-type-2 cycle through
// agent 2, which is a rotation and must not invalidate the pair.
inline Tpg rotation_probe_tpg() {
    const Location a0{0, 0}, L{1, 0}, a2{2, 0};
    const Location b0{5, 0}, b2{6, 0};
    Tpg tpg;
    tpg.chains = {{a0, L, a2}, {b0, L, b2}, {b2, a0}};
    tpg.entry_times = {{0, 1, 2}, {0, 1, 2}, {0, 1}};
    tpg.type2 = {
        {{0, 2}, {1, 1}, L},   // probed edge e
        {{0, 1}, {2, 1}, a0},  // conflict at a0 = loc(v_1^2)
        {{2, 1}, {1, 2}, b2},  // conflict at b2 = loc(v_2^1)
    };
    return tpg;
}

struct RandomInstance {
    MapfPlan plan;
    std::uint64_t seed = 0;
};

// Deterministically generates a random solvable instance, resampling the
// map and endpoints until the planner succeeds.
inline std::optional<RandomInstance> random_solved_instance(std::uint64_t seed, int width,
                                                            int height, double density,
                                                            int agents, int attempts = 8) {
    for (int k = 0; k < attempts; ++k) {
        const std::uint64_t s = seed + 1000003ULL * k;
        try {
            const GridMap map = make_random_map(width, height, density, s);
            const InstanceSample sample = sample_endpoints(map, agents, s ^ 0x5bd1e995);
            PlannerOptions opt;
            opt.seed = s;
            RandomInstance inst;
            inst.plan = plan_prioritized(map, sample.starts, sample.goals, opt);
            inst.seed = s;
            return inst;
        } catch (const std::exception&) {
        }
    }
    return std::nullopt;
}

}  // namespace btpg::testing
