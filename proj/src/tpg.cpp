#include "btpg/tpg.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace btpg {

int Tpg::total_vertices() const {
    int n = 0;
    for (const auto& c : chains) n += static_cast<int>(c.size());
    return n;
}

std::vector<int> Tpg::plan_durations() const {
    std::vector<int> out;
    out.reserve(entry_times.size());
    for (const auto& times : entry_times) {
        out.push_back(times.empty() ? 0 : times.back());
    }
    return out;
}

Tpg build_tpg(const MapfPlan& plan) {
    if (!validate_plan(plan).ok()) {
        throw std::invalid_argument("build_tpg: plan fails validation");
    }

    Tpg tpg;
    const int n = plan.num_agents();
    tpg.chains.resize(n);
    tpg.entry_times.resize(n);
    for (int a = 0; a < n; ++a) {
        const auto& steps = plan.paths[a].steps;
        for (int t = 0; t < static_cast<int>(steps.size()); ++t) {
            if (t == 0 || steps[t] != steps[t - 1]) {
                tpg.chains[a].push_back(steps[t]);
                tpg.entry_times[a].push_back(t);
            }
        }
    }

    struct Visit {
        int entry_time;
        int agent;
        int index;
    };
    std::map<Location, std::vector<Visit>> visits;
    for (int a = 0; a < n; ++a) {
        for (int i = 0; i < tpg.chain_length(a); ++i) {
            visits[tpg.chains[a][i]].push_back({tpg.entry_times[a][i], a, i});
        }
    }

    for (auto& [loc, vs] : visits) {
        std::sort(vs.begin(), vs.end(),
                  [](const Visit& a, const Visit& b) { return a.entry_time < b.entry_time; });
        for (std::size_t i = 0; i < vs.size(); ++i) {
            // The earlier visitor's successor state must exist; a visit that
            // is an agent's final state is never departed.
            if (vs[i].index + 1 >= tpg.chain_length(vs[i].agent)) continue;
            for (std::size_t k = i + 1; k < vs.size(); ++k) {
                if (vs[k].agent == vs[i].agent) continue;
                tpg.type2.push_back({{vs[i].agent, vs[i].index + 1},
                                     {vs[k].agent, vs[k].index},
                                     loc});
            }
        }
    }

    std::sort(tpg.type2.begin(), tpg.type2.end(), [](const Type2Edge& a, const Type2Edge& b) {
        return std::tie(a.from.agent, a.from.index, a.to.agent, a.to.index) <
               std::tie(b.from.agent, b.from.index, b.to.agent, b.to.index);
    });
    return tpg;
}

CycleClass classify_cycle(const std::vector<CycleEdge>& cycle) {
    if (cycle.empty()) {
        throw std::invalid_argument("classify_cycle: empty input");
    }
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const auto& next = cycle[(i + 1) % cycle.size()];
        if (!(cycle[i].to == next.from)) {
            throw std::invalid_argument("classify_cycle: edges do not form a closed walk");
        }
    }
    const bool all_type2 =
        std::all_of(cycle.begin(), cycle.end(), [](const CycleEdge& e) { return e.type2; });
    if (all_type2 && cycle.size() > 2) return CycleClass::Rotation;
    return CycleClass::NonRotation;
}

namespace {

// Iterative Tarjan SCC over the merged graph (type-1 + type-2 edges).
struct SccResult {
    std::vector<int> component;
};

SccResult strongly_connected_components(int num_vertices,
                                        const std::vector<std::vector<int>>& out) {
    SccResult res;
    res.component.assign(num_vertices, -1);
    std::vector<int> index(num_vertices, -1), lowlink(num_vertices, 0);
    std::vector<std::uint8_t> on_stack(num_vertices, 0);
    std::vector<int> stack;
    int next_index = 0;
    int next_component = 0;

    struct Frame {
        int v;
        std::size_t child;
    };
    std::vector<Frame> call;

    for (int start = 0; start < num_vertices; ++start) {
        if (index[start] != -1) continue;
        call.push_back({start, 0});
        while (!call.empty()) {
            Frame& f = call.back();
            const int v = f.v;
            if (f.child == 0) {
                index[v] = lowlink[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            if (f.child < out[v].size()) {
                const int w = out[v][f.child++];
                if (index[w] == -1) {
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
            } else {
                if (lowlink[v] == index[v]) {
                    while (true) {
                        const int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        res.component[w] = next_component;
                        if (w == v) break;
                    }
                    ++next_component;
                }
                call.pop_back();
                if (!call.empty()) {
                    const int parent = call.back().v;
                    lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
                }
            }
        }
    }
    return res;
}

}  // namespace

bool is_valid_tpg(const Tpg& tpg) {
    const int n = tpg.num_agents();
    std::vector<int> offset(n + 1, 0);
    for (int a = 0; a < n; ++a) offset[a + 1] = offset[a] + tpg.chain_length(a);
    const int V = offset[n];
    auto vid = [&](TpgVertex v) { return offset[v.agent] + v.index; };

    std::vector<std::vector<int>> out(V);
    for (int a = 0; a < n; ++a) {
        for (int i = 0; i + 1 < tpg.chain_length(a); ++i) {
            out[offset[a] + i].push_back(offset[a] + i + 1);
        }
    }
    std::unordered_set<std::uint64_t> type2_keys;
    type2_keys.reserve(tpg.type2.size() * 2);
    auto key = [&](int from, int to) {
        return (static_cast<std::uint64_t>(from) << 32) | static_cast<std::uint32_t>(to);
    };
    for (const Type2Edge& e : tpg.type2) {
        const int f = vid(e.from);
        const int t = vid(e.to);
        // A mutual pair of type-2 edges is a two-edge cycle, hence a deadlock.
        if (type2_keys.count(key(t, f))) return false;
        type2_keys.insert(key(f, t));
        out[f].push_back(t);
    }

    const SccResult scc = strongly_connected_components(V, out);
    for (int a = 0; a < n; ++a) {
        for (int i = 0; i + 1 < tpg.chain_length(a); ++i) {
            const int u = offset[a] + i;
            if (scc.component[u] == scc.component[u + 1]) return false;
        }
    }
    return true;
}

std::string to_dot(const Tpg& tpg) {
    std::ostringstream os;
    os << "digraph tpg {\n  rankdir=LR;\n";
    auto name = [&](TpgVertex v) {
        std::ostringstream n;
        n << "v" << v.agent << "_" << v.index;
        return n.str();
    };
    for (int a = 0; a < tpg.num_agents(); ++a) {
        for (int i = 0; i < tpg.chain_length(a); ++i) {
            const Location l = tpg.chains[a][i];
            os << "  " << name({a, i}) << " [label=\"" << l.x << "," << l.y << "@" << a << ":"
               << i << "\"];\n";
        }
        for (int i = 0; i + 1 < tpg.chain_length(a); ++i) {
            os << "  " << name({a, i}) << " -> " << name({a, i + 1}) << ";\n";
        }
    }
    for (const Type2Edge& e : tpg.type2) {
        os << "  " << name(e.from) << " -> " << name(e.to) << " [style=dashed];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace btpg
