#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "btpg/plan.hpp"

namespace btpg {

struct PlannerOptions {
    int horizon = 0;         // 0: width * height + 2 * (width + height)
    int max_restarts = 24;   // priority reshuffles after a failed attempt
    int keep_best_of = 12;    // solved orderings compared by total duration
    std::uint64_t seed = 0;  // drives the reshuffles
};

struct PlanningError : std::runtime_error {
    PlanningError(const std::string& what, int agent_) : std::runtime_error(what), agent(agent_) {}

    int agent;
};

// Prioritized planning with space-time A*. Following is permitted: only
// vertex and edge conflicts are reserved against, and agents rest at their
// goals forever. Pre: starts pairwise distinct and passable, goals pairwise
// distinct and passable. Throws PlanningError when some agent cannot reach
// its goal within the horizon after all restarts.
MapfPlan plan_prioritized(const GridMap& map, const std::vector<Location>& starts,
                          const std::vector<Location>& goals, PlannerOptions opt = {});

GridMap make_random_map(int width, int height, double obstacle_density, std::uint64_t seed);

struct InstanceSample {
    std::vector<Location> starts;
    std::vector<Location> goals;
};

// Distinct start and goal cells drawn from the free cells of the map.
InstanceSample sample_endpoints(const GridMap& map, int n_agents, std::uint64_t seed);

}  // namespace btpg
