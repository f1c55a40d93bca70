#include "btpg/btpg.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace btpg {

namespace {

std::tuple<int, int, int, int> edge_key(const Type2Edge& e) {
    return {e.from.agent, e.from.index, e.to.agent, e.to.index};
}

}  // namespace

Type2Edge reversed_edge(const Tpg& tpg, const Type2Edge& forward) {
    const int m = forward.from.agent;
    const int i1 = forward.from.index;
    const int n = forward.to.agent;
    const int j = forward.to.index;
    if (i1 < 1) {
        throw std::invalid_argument("reversed_edge: forward tail has no predecessor");
    }
    if (j + 1 >= tpg.chain_length(n)) {
        throw std::invalid_argument("reversed_edge: head agent has no successor state");
    }
    return {{n, j + 1}, {m, i1 - 1}, forward.conflict};
}

Grouping group_type2_edges(const Tpg& tpg) {
    std::map<std::pair<int, int>, std::vector<Type2Edge>> by_agents;
    for (const Type2Edge& e : tpg.type2) {
        by_agents[{e.from.agent, e.to.agent}].push_back(e);
    }

    Grouping result;
    std::set<std::tuple<int, int, int, int>> grouped;
    for (auto& [agents, edges] : by_agents) {
        std::sort(edges.begin(), edges.end(), [](const Type2Edge& a, const Type2Edge& b) {
            return std::tie(a.from.index, a.to.index) < std::tie(b.from.index, b.to.index);
        });
        std::map<std::pair<int, int>, std::size_t> at;
        std::vector<bool> consumed(edges.size(), false);
        for (std::size_t k = 0; k < edges.size(); ++k) {
            at[{edges[k].from.index, edges[k].to.index}] = k;
        }
        auto find_free = [&](int i, int j) -> int {
            const auto it = at.find({i, j});
            if (it == at.end() || consumed[it->second]) return -1;
            return static_cast<int>(it->second);
        };
        for (std::size_t k = 0; k < edges.size(); ++k) {
            if (consumed[k]) continue;
            int i = edges[k].from.index;
            int j = edges[k].to.index;
            int dir = 0;
            if (find_free(i + 1, j + 1) >= 0) {
                dir = +1;
            } else if (find_free(i + 1, j - 1) >= 0) {
                dir = -1;
            } else {
                continue;  // no run from here; stays a singleton
            }
            EdgeGroup group;
            group.kind = dir > 0 ? GroupKind::SameDirection : GroupKind::OppositeDirection;
            int cur = static_cast<int>(k);
            while (cur >= 0) {
                consumed[cur] = true;
                group.edges.push_back(edges[cur]);
                grouped.insert(edge_key(edges[cur]));
                i += 1;
                j += dir;
                cur = find_free(i, j);
            }
            result.groups.push_back(std::move(group));
        }
    }

    for (const Type2Edge& e : tpg.type2) {
        if (!grouped.count(edge_key(e))) result.singletons.push_back(e);
    }
    return result;
}

PairProbe::PairProbe(const Tpg& tpg) : tpg_(&tpg) {
    const int n = tpg.num_agents();
    offset_.assign(n + 1, 0);
    for (int a = 0; a < n; ++a) offset_[a + 1] = offset_[a] + tpg.chain_length(a);
    const int V = offset_[n];
    vid_agent_.resize(V);
    vid_index_.resize(V);
    chain_end_.resize(V);
    for (int a = 0; a < n; ++a) {
        for (int i = 0; i < tpg.chain_length(a); ++i) {
            const int v = offset_[a] + i;
            vid_agent_[v] = a;
            vid_index_[v] = i;
            chain_end_[v] = offset_[a + 1];
        }
    }
    out_.resize(V);
    edges_.reserve(tpg.type2.size() * 2);
    for (const Type2Edge& e : tpg.type2) {
        const int id = static_cast<int>(edges_.size());
        edges_.push_back({vid(e.from), vid(e.to), -1, false});
        out_[vid(e.from)].push_back(id);
    }
    t1_in_branch_.assign(V, 0);
    min_branch_index_.assign(n, INT_MAX);
    safe_epoch_.assign(V, -1);
}

int PairProbe::edge_id(const Type2Edge& e) const {
    const int f = vid(e.from);
    const int t = vid(e.to);
    for (const int id : out_[f]) {
        if (edges_[id].to_v == t) return id;
    }
    throw std::invalid_argument("PairProbe: unknown type-2 edge");
}

int PairProbe::push_reversed(const Type2Edge& forward, int forward_id) {
    const Type2Edge rev = reversed_edge(*tpg_, forward);
    const int rid = static_cast<int>(edges_.size());
    edges_.push_back({vid(rev.from), vid(rev.to), forward_id, false});
    out_[vid(rev.from)].push_back(rid);
    return rid;
}

bool PairProbe::would_close_cycle(const Type2Edge& forward, ProbeMode mode) {
    const int eid = edge_id(forward);
    if (edges_[eid].partner != -1) {
        throw std::invalid_argument("PairProbe: edge already belongs to a pair");
    }
    const int rid = push_reversed(forward, eid);
    edges_[eid].partner = rid;

    ++epoch_;
    mode_ = mode;
    origin_ = edges_[rid].from_v;  // v_{j+1}^n
    const int start = edges_[rid].to_v;  // v_i^m
    branch_edges_ = 1;  // the forward edge stands in for the reversed edge
    t1_edges_ = 0;
    edges_[eid].in_branch = true;
    std::fill(min_branch_index_.begin(), min_branch_index_.end(), INT_MAX);
    min_branch_index_[vid_agent_[start]] = vid_index_[start];

    const bool found = dfs(start).found;

    edges_[eid].in_branch = false;
    edges_[eid].partner = -1;
    out_[edges_[rid].from_v].pop_back();
    edges_.pop_back();
    return found;
}

void PairProbe::accept(const Type2Edge& forward) {
    const int eid = edge_id(forward);
    if (edges_[eid].partner != -1) {
        throw std::invalid_argument("PairProbe: edge already belongs to a pair");
    }
    const int rid = push_reversed(forward, eid);
    edges_[eid].partner = rid;
    pairs_.push_back({forward, reversed_edge(*tpg_, forward)});
}

PairProbe::DfsOut PairProbe::dfs(int v) {
    if (v == origin_) {
        const bool rotation = t1_edges_ == 0 && branch_edges_ > 2;
        return {!rotation, false};
    }
    if (safe_epoch_[v] == epoch_) return {false, true};

    bool clean = true;
    if (v + 1 < chain_end_[v]) {
        if (t1_in_branch_[v]) {
            clean = false;
        } else {
            t1_in_branch_[v] = 1;
            ++t1_edges_;
            ++branch_edges_;
            const int child = v + 1;
            const int ca = vid_agent_[child];
            const int saved = min_branch_index_[ca];
            min_branch_index_[ca] = std::min(saved, vid_index_[child]);
            const DfsOut r = dfs(child);
            min_branch_index_[ca] = saved;
            t1_in_branch_[v] = 0;
            --t1_edges_;
            --branch_edges_;
            if (r.found) return {true, false};
            clean = clean && r.clean;
        }
    }

    for (const int eid : out_[v]) {
        EdgeRec& e = edges_[eid];
        if (e.in_branch) {
            clean = false;
            continue;
        }
        if (e.partner != -1) {
            // One branch may use at most one edge of a pair.
            if (edges_[e.partner].in_branch) {
                clean = false;
                continue;
            }
            // A cycle through this edge would also contain an earlier state
            // of the same agent, so it cannot deadlock.
            if (mode_ == ProbeMode::Optimized && min_branch_index_[vid_agent_[v]] < vid_index_[v]) {
                clean = false;
                continue;
            }
        }
        e.in_branch = true;
        ++branch_edges_;
        const int child = e.to_v;
        const int ca = vid_agent_[child];
        const int saved = min_branch_index_[ca];
        min_branch_index_[ca] = std::min(saved, vid_index_[child]);
        const DfsOut r = dfs(child);
        min_branch_index_[ca] = saved;
        e.in_branch = false;
        --branch_edges_;
        if (r.found) return {true, false};
        clean = clean && r.clean;
    }

    if (clean) safe_epoch_[v] = epoch_;
    return {false, clean};
}

std::vector<Type2Edge> examination_order(const Tpg& tpg, const Grouping& grouping) {
    std::vector<Type2Edge> candidates;
    for (const Type2Edge& e : grouping.singletons) {
        // The conflict location of an edge with from.index == 1 is the tail
        // agent's start state: nobody can pass it first. An edge into an
        // agent's last state has no well-formed reversal.
        if (e.from.index == 1) continue;
        if (e.to.index + 1 >= tpg.chain_length(e.to.agent)) continue;
        candidates.push_back(e);
    }
    std::sort(candidates.begin(), candidates.end(), [](const Type2Edge& a, const Type2Edge& b) {
        return edge_key(a) < edge_key(b);
    });
    return candidates;
}

namespace {

BuildResult build(const Tpg& tpg, ProbeMode mode, Budget budget) {
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::steady_clock::now() - start; };
    auto elapsed_s = [&] {
        return std::chrono::duration<double>(elapsed()).count();
    };

    BuildResult res;
    Grouping grouping = group_type2_edges(tpg);
    res.stats.type2_edges = static_cast<int>(tpg.type2.size());
    res.stats.singleton_edges = static_cast<int>(grouping.singletons.size());
    res.log.samples.push_back({0.0, 0});

    PairProbe probe(tpg);
    if (budget > Budget::zero()) {
        std::vector<Type2Edge> remaining = examination_order(tpg, grouping);
        while (true) {
            ++res.stats.passes;
            bool added = false;
            std::vector<Type2Edge> next;
            for (const Type2Edge& e : remaining) {
                if (budget != kNoBudget && elapsed() >= budget) {
                    res.stats.timed_out = true;
                    break;
                }
                if (probe.would_close_cycle(e, mode)) {
                    next.push_back(e);
                } else {
                    probe.accept(e);
                    added = true;
                    res.log.samples.push_back(
                        {elapsed_s(), static_cast<int>(probe.pairs().size())});
                }
            }
            if (res.stats.timed_out || mode == ProbeMode::Naive || !added) break;
            remaining = std::move(next);
        }
    }

    res.graph.base = tpg;
    res.graph.pairs = probe.pairs();
    res.graph.groups = std::move(grouping.groups);
    std::set<std::tuple<int, int, int, int>> paired;
    for (const BidirectionalPair& p : res.graph.pairs) paired.insert(edge_key(p.forward));
    for (const Type2Edge& e : tpg.type2) {
        if (!paired.count(edge_key(e))) res.graph.fixed.push_back(e);
    }
    res.stats.seconds = elapsed_s();
    res.log.samples.push_back({res.stats.seconds, res.graph.num_pairs()});
    return res;
}

}  // namespace

BuildResult btpg_naive(const Tpg& tpg, Budget budget) {
    return build(tpg, ProbeMode::Naive, budget);
}

BuildResult btpg_optimized(const Tpg& tpg, Budget budget) {
    return build(tpg, ProbeMode::Optimized, budget);
}

std::uint64_t induced_tpg_count(const Btpg& g, int cap) {
    const int k = g.num_pairs();
    if (k > cap) {
        throw std::length_error("induced TPG enumeration refused: " + std::to_string(k) +
                                " pairs exceed the cap of " + std::to_string(cap));
    }
    return std::uint64_t{1} << k;
}

Tpg induced_tpg(const Btpg& g, std::uint64_t mask) {
    Tpg t;
    t.chains = g.base.chains;
    t.entry_times = g.base.entry_times;
    t.type2 = g.fixed;
    for (int p = 0; p < g.num_pairs(); ++p) {
        const BidirectionalPair& pair = g.pairs[p];
        t.type2.push_back((mask >> p) & 1 ? pair.reversed : pair.forward);
    }
    return t;
}

}  // namespace btpg
