#pragma once

#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "btpg/btpg.hpp"
#include "btpg/tpg.hpp"

// Brute-force references kept independent of the library's search code:
// cycles are enumerated exhaustively and classified from first principles.
namespace btpg::oracle {

struct OracleEdge {
    int from;
    int to;
    bool type2;
    int pair;  // -1 when not part of a bidirectional pair
};

struct OracleGraph {
    int num_vertices = 0;
    std::vector<OracleEdge> edges;
    std::vector<std::vector<int>> out;  // edge ids by source
    std::vector<int> vertex_agent;
    std::vector<int> vertex_index;
};

inline OracleGraph graph_of_chains(const Tpg& tpg) {
    OracleGraph g;
    std::vector<int> offset(tpg.num_agents() + 1, 0);
    for (int a = 0; a < tpg.num_agents(); ++a) {
        offset[a + 1] = offset[a] + tpg.chain_length(a);
    }
    g.num_vertices = offset.back();
    g.out.resize(g.num_vertices);
    g.vertex_agent.resize(g.num_vertices);
    g.vertex_index.resize(g.num_vertices);
    for (int a = 0; a < tpg.num_agents(); ++a) {
        for (int i = 0; i < tpg.chain_length(a); ++i) {
            g.vertex_agent[offset[a] + i] = a;
            g.vertex_index[offset[a] + i] = i;
        }
        for (int i = 0; i + 1 < tpg.chain_length(a); ++i) {
            g.out[offset[a] + i].push_back(static_cast<int>(g.edges.size()));
            g.edges.push_back({offset[a] + i, offset[a] + i + 1, false, -1});
        }
    }
    for (const Type2Edge& e : tpg.type2) {
        const int f = offset[e.from.agent] + e.from.index;
        const int t = offset[e.to.agent] + e.to.index;
        g.out[f].push_back(static_cast<int>(g.edges.size()));
        g.edges.push_back({f, t, true, -1});
    }
    return g;
}

// Merged view of a BTPG: fixed edges plus both edges of every pair.
inline OracleGraph graph_of_btpg(const Btpg& b) {
    Tpg skeleton;
    skeleton.chains = b.base.chains;
    skeleton.entry_times = b.base.entry_times;
    skeleton.type2 = b.fixed;
    OracleGraph g = graph_of_chains(skeleton);
    std::vector<int> offset(b.base.num_agents() + 1, 0);
    for (int a = 0; a < b.base.num_agents(); ++a) {
        offset[a + 1] = offset[a] + b.base.chain_length(a);
    }
    for (int p = 0; p < b.num_pairs(); ++p) {
        for (const Type2Edge* e : {&b.pairs[p].forward, &b.pairs[p].reversed}) {
            const int f = offset[e->from.agent] + e->from.index;
            const int t = offset[e->to.agent] + e->to.index;
            g.out[f].push_back(static_cast<int>(g.edges.size()));
            g.edges.push_back({f, t, true, p});
        }
    }
    return g;
}

// Every vertex-simple directed cycle, as a list of edge ids. Cycles are
// found once each by anchoring at their minimum vertex.
inline std::vector<std::vector<int>> simple_cycles(const OracleGraph& g,
                                                   std::size_t limit = 500000) {
    std::vector<std::vector<int>> cycles;
    std::vector<int> path;
    std::vector<char> on_path(g.num_vertices, 0);

    struct Walker {
        const OracleGraph& g;
        std::vector<std::vector<int>>& cycles;
        std::vector<int>& path;
        std::vector<char>& on_path;
        std::size_t limit;
        int anchor;

        void walk(int v) {
            for (const int eid : g.out[v]) {
                const OracleEdge& e = g.edges[eid];
                if (e.to == anchor) {
                    path.push_back(eid);
                    cycles.push_back(path);
                    if (cycles.size() > limit) {
                        throw std::length_error("oracle cycle enumeration exploded");
                    }
                    path.pop_back();
                    continue;
                }
                if (e.to < anchor || on_path[e.to]) continue;
                on_path[e.to] = 1;
                path.push_back(eid);
                walk(e.to);
                path.pop_back();
                on_path[e.to] = 0;
            }
        }
    };

    for (int anchor = 0; anchor < g.num_vertices; ++anchor) {
        Walker w{g, cycles, path, on_path, limit, anchor};
        on_path[anchor] = 1;
        w.walk(anchor);
        on_path[anchor] = 0;
    }
    return cycles;
}

inline bool cycle_is_rotation(const OracleGraph& g, const std::vector<int>& cycle) {
    if (cycle.size() <= 2) return false;
    for (const int eid : cycle) {
        if (!g.edges[eid].type2) return false;
    }
    return true;
}

inline bool cycle_is_self(const OracleGraph& g, const std::vector<int>& cycle) {
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const int p = g.edges[cycle[i]].pair;
        if (p < 0) continue;
        for (std::size_t k = i + 1; k < cycle.size(); ++k) {
            if (g.edges[cycle[k]].pair == p && cycle[k] != cycle[i]) return true;
        }
    }
    return false;
}

// Non-deadlock shape: the cycle holds a vertex v_i^n and a pair edge
// leaving v_j^n with j > i, so first-come-first-served selection can never
// realize it as a deadlock.
inline bool cycle_is_non_deadlock(const OracleGraph& g, const std::vector<int>& cycle) {
    for (const int eid : cycle) {
        const OracleEdge& e = g.edges[eid];
        if (e.pair < 0) continue;
        const int agent = g.vertex_agent[e.from];
        const int j = g.vertex_index[e.from];
        for (const int other : cycle) {
            for (const int v : {g.edges[other].from, g.edges[other].to}) {
                if (g.vertex_agent[v] == agent && g.vertex_index[v] < j) return true;
            }
        }
    }
    return false;
}

// Reference implementation of the TPG validity property: every simple
// cycle must be a rotation.
inline bool valid_tpg_by_enumeration(const Tpg& tpg) {
    const OracleGraph g = graph_of_chains(tpg);
    for (const auto& cycle : simple_cycles(g)) {
        if (!cycle_is_rotation(g, cycle)) return false;
    }
    return true;
}

// Optimized-build guarantee: every simple cycle of the merged graph is a
// rotation, a self cycle, or a non-deadlock cycle.
inline bool valid_btpg_o_by_enumeration(const Btpg& b) {
    const OracleGraph g = graph_of_btpg(b);
    for (const auto& cycle : simple_cycles(g)) {
        if (cycle_is_rotation(g, cycle)) continue;
        if (cycle_is_self(g, cycle)) continue;
        if (cycle_is_non_deadlock(g, cycle)) continue;
        return false;
    }
    return true;
}

}  // namespace btpg::oracle
