#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "btpg/tpg.hpp"

namespace btpg {

// Two type-2 edges over one conflict location whose passing order is
// decided first-come-first-served at execution time.
struct BidirectionalPair {
    Type2Edge forward;   // e = (v_{i+1}^m, v_j^n), the plan's order
    Type2Edge reversed;  // e~ = (v_{j+1}^n, v_i^m)

    friend bool operator==(const BidirectionalPair&, const BidirectionalPair&) = default;
};

// Def-3 index arithmetic. Pre: forward.from.index >= 1 and forward.to is
// not the last state of its agent.
Type2Edge reversed_edge(const Tpg& tpg, const Type2Edge& forward);

enum class GroupKind { SameDirection, OppositeDirection };

// Consecutive type-2 edges of one ordered agent pair along a contiguous
// shared path segment, examined (and skipped) as a unit.
struct EdgeGroup {
    GroupKind kind{};
    std::vector<Type2Edge> edges;
};

struct Grouping {
    std::vector<EdgeGroup> groups;
    std::vector<Type2Edge> singletons;
};

Grouping group_type2_edges(const Tpg& tpg);

struct AnytimeSample {
    double t = 0.0;  // elapsed wall-clock seconds
    int pairs = 0;
};

struct AnytimeLog {
    std::vector<AnytimeSample> samples;
};

struct Btpg {
    Tpg base;                       // original TPG (chains + full E2)
    std::vector<Type2Edge> fixed;   // type-2 edges kept unidirectional
    std::vector<BidirectionalPair> pairs;
    std::vector<EdgeGroup> groups;  // grouped edges (also present in fixed)

    int num_pairs() const { return static_cast<int>(pairs.size()); }
};

enum class ProbeMode { Naive, Optimized };

// Working graph for pair examination. Holds the type-1 chains, all type-2
// edges, and the reversed edges of accepted pairs. The probe runs the
// cycle-detecting DFS: branches are edge-simple, a branch never takes both
// edges of one pair, reaching the probe origin over only type-2 edges with
// more than two of them is a tolerated rotation, and in Optimized mode a
// pair edge out of v_i^m is skipped when the branch already visited some
// v_{i'}^m with i' < i (such a cycle cannot deadlock).
class PairProbe {
public:
    explicit PairProbe(const Tpg& tpg);

    // Tentatively form the pair for `forward` and report whether a cycle
    // that would invalidate it closes. Graph state is restored on return.
    bool would_close_cycle(const Type2Edge& forward, ProbeMode mode);

    // Permanently convert `forward` into a bidirectional pair.
    void accept(const Type2Edge& forward);

    const std::vector<BidirectionalPair>& pairs() const { return pairs_; }

private:
    struct EdgeRec {
        int from_v;
        int to_v;
        int partner;  // co-pair edge id, -1 while unidirectional
        bool in_branch;
    };
    struct DfsOut {
        bool found;
        bool clean;  // subtree result independent of branch state
    };

    int vid(TpgVertex v) const { return offset_[v.agent] + v.index; }
    int edge_id(const Type2Edge& e) const;
    int push_reversed(const Type2Edge& forward, int forward_id);
    DfsOut dfs(int v);

    const Tpg* tpg_;
    std::vector<int> offset_;
    std::vector<int> vid_agent_;
    std::vector<int> vid_index_;
    std::vector<int> chain_end_;  // first vid past each agent's chain
    std::vector<EdgeRec> edges_;
    std::vector<std::vector<int>> out_;
    std::vector<BidirectionalPair> pairs_;

    // DFS state
    std::vector<std::uint8_t> t1_in_branch_;  // keyed by source vid
    std::vector<int> min_branch_index_;       // per agent, min visited state index
    std::vector<int> safe_epoch_;
    int epoch_ = 0;
    int origin_ = -1;
    ProbeMode mode_ = ProbeMode::Naive;
    int branch_edges_ = 0;  // |E_vis| including the seeded forward edge
    int t1_edges_ = 0;
};

struct BuildStats {
    double seconds = 0.0;
    int passes = 0;
    int type2_edges = 0;
    int singleton_edges = 0;
    bool timed_out = false;
};

struct BuildResult {
    Btpg graph;
    AnytimeLog log;
    BuildStats stats;
};

using Budget = std::chrono::steady_clock::duration;
inline constexpr Budget kNoBudget = Budget::max();

// Single pass over the singleton type-2 edges in deterministic order,
// converting each edge whose reversal closes no invalidating cycle.
// A non-positive budget returns the input with zero pairs.
BuildResult btpg_naive(const Tpg& tpg, Budget budget = kNoBudget);

// As btpg_naive with the relaxed cycle test, repeating full passes until
// a pass converts nothing or the budget expires.
BuildResult btpg_optimized(const Tpg& tpg, Budget budget = kNoBudget);

// The candidate edges btpg_naive/btpg_optimized examine, in order:
// singletons whose conflict location is not the tail agent's first state
// and whose head is not the head agent's last state.
std::vector<Type2Edge> examination_order(const Tpg& tpg, const Grouping& grouping);

inline constexpr int kInducedTpgCap = 20;

// Number of TPGs induced by choosing one edge per pair (2^k).
// Throws std::length_error when k exceeds `cap`.
std::uint64_t induced_tpg_count(const Btpg& g, int cap = kInducedTpgCap);

// The induced TPG for a bitmask over pairs (bit p set selects pair p's
// reversed edge).
Tpg induced_tpg(const Btpg& g, std::uint64_t mask);

}  // namespace btpg
