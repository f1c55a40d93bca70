#pragma once

#include <compare>
#include <string>
#include <vector>

#include "btpg/plan.hpp"

namespace btpg {

// State v_i^m: agent m at the i-th non-wait element of its path.
struct TpgVertex {
    int agent = 0;
    int index = 0;

    friend bool operator==(const TpgVertex&, const TpgVertex&) = default;
    friend auto operator<=>(const TpgVertex&, const TpgVertex&) = default;
};

// Precedence (v_{i+1}^m, v_j^n): agent n may enter the conflict location
// loc(v_j^n) = loc(v_i^m) no earlier than agent m enters loc(v_{i+1}^m).
struct Type2Edge {
    TpgVertex from;  // v_{i+1}^m
    TpgVertex to;    // v_j^n
    Location conflict{};

    friend bool operator==(const Type2Edge&, const Type2Edge&) = default;
};

struct Tpg {
    // Per-agent state locations with waits omitted. Type-1 edges run
    // between consecutive entries of each chain.
    std::vector<std::vector<Location>> chains;
    // Plan timestep at which each state is first entered.
    std::vector<std::vector<int>> entry_times;
    std::vector<Type2Edge> type2;

    int num_agents() const { return static_cast<int>(chains.size()); }
    int chain_length(int agent) const { return static_cast<int>(chains[agent].size()); }
    Location loc(TpgVertex v) const { return chains[v.agent][v.index]; }
    bool is_last(TpgVertex v) const { return v.index + 1 == chain_length(v.agent); }
    int total_vertices() const;

    // Arrival timestep of each agent in the originating plan.
    std::vector<int> plan_durations() const;
};

// Pre: validate_plan(plan).ok(). One vertex per non-wait path element; a
// type-2 edge for every ordered pair of visits to a shared location by
// distinct agents, earlier visitor first. Visits that are an agent's final
// state produce no outgoing edge.
Tpg build_tpg(const MapfPlan& plan);

enum class CycleClass { Rotation, NonRotation };

struct CycleEdge {
    TpgVertex from;
    TpgVertex to;
    bool type2 = false;
};

// Pre: edges form a closed walk of distinct edges (each edge's head is the
// next edge's tail and the last head equals the first tail). Rotation iff
// every edge is type-2 and there are more than two edges.
CycleClass classify_cycle(const std::vector<CycleEdge>& cycle);

// True iff every cycle in the graph is a rotation cycle. Equivalent to:
// no type-1 edge lies on any cycle (checked via strongly connected
// components) and no two type-2 edges are mutual.
bool is_valid_tpg(const Tpg& tpg);

// Graphviz export, type-2 edges dashed, vertices labeled loc@agent:index.
std::string to_dot(const Tpg& tpg);

}  // namespace btpg
