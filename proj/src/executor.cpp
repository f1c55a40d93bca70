#include "btpg/executor.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace btpg {

namespace {

double unit_uniform(std::uint64_t raw) {
    return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

std::uint64_t agent_stream_seed(std::uint64_t seed, int agent) {
    return seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(agent + 1));
}

}  // namespace

bool DelaySchedule::stalled(int agent, int t) const {
    for (const StallEvent& e : events_) {
        if (e.agent != agent) continue;
        if (e.start > t) break;  // events are sorted by (agent, start)
        if (t < e.start + e.length) return true;
    }
    return false;
}

int DelaySchedule::stall_before(int agent, int t) const {
    int total = 0;
    for (const StallEvent& e : events_) {
        if (e.agent != agent || e.start >= t) continue;
        total += std::min(e.length, t - e.start);
    }
    return total;
}

int DelaySchedule::unobstructed_completion(int agent, int moves) const {
    int t = 0;
    int done = 0;
    while (done < moves) {
        if (!stalled(agent, t)) ++done;
        ++t;
    }
    return t;
}

void DelaySchedule::add_stall(int agent, int start, int length) {
    if (length <= 0) return;
    events_.push_back({agent, start, length});
    std::sort(events_.begin(), events_.end(), [](const StallEvent& a, const StallEvent& b) {
        return std::tie(a.agent, a.start) < std::tie(b.agent, b.start);
    });
    horizon_ = std::max(horizon_, start + length);
    num_agents_ = std::max(num_agents_, agent + 1);
}

void DelaySchedule::set_num_agents(int n) { num_agents_ = std::max(num_agents_, n); }

int DelaySchedule::total_stall_timesteps() const {
    int total = 0;
    for (const StallEvent& e : events_) total += e.length;
    return total;
}

DelaySchedule inject_delays(const DelayConfig& config, int n_agents, int horizon,
                            std::uint64_t seed) {
    DelaySchedule schedule;
    schedule.horizon_ = horizon;
    schedule.num_agents_ = n_agents;
    if (n_agents <= 0 || config.delayed_fraction <= 0.0 || config.trigger_prob <= 0.0) {
        return schedule;
    }

    int k = static_cast<int>(std::ceil(config.delayed_fraction * n_agents - 1e-12));
    k = std::clamp(k, 0, n_agents);

    std::vector<int> order(n_agents);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    for (int i = n_agents - 1; i > 0; --i) {
        const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
        std::swap(order[i], order[j]);
    }
    std::vector<int> delayed(order.begin(), order.begin() + k);
    std::sort(delayed.begin(), delayed.end());

    for (const int agent : delayed) {
        std::mt19937_64 agent_rng(agent_stream_seed(seed, agent));
        int t = 0;
        while (t < horizon) {
            if (unit_uniform(agent_rng()) < config.trigger_prob) {
                schedule.events_.push_back({agent, t, config.delay_length});
                t += config.delay_length;
            } else {
                ++t;
            }
        }
    }
    std::sort(schedule.events_.begin(), schedule.events_.end(),
              [](const StallEvent& a, const StallEvent& b) {
                  return std::tie(a.agent, a.start) < std::tie(b.agent, b.start);
              });
    return schedule;
}

double ExecutionTrace::mean_completion() const {
    if (completion.empty()) return 0.0;
    double sum = 0.0;
    for (const int c : completion) sum += c;
    return sum / static_cast<double>(completion.size());
}

int ExecutionTrace::used_pairs() const {
    int used = 0;
    for (const PairSelection& s : selections) used += s.reversed ? 1 : 0;
    return used;
}

namespace {

struct Constraint {
    int src_agent;
    int src_index;
    int pair;       // -1 for fixed edges
    bool reversed;  // which side of the pair this constraint belongs to
};

enum class PairState { Unresolved, Forward, Reversed };

}  // namespace

ExecutionTrace simulate(const Btpg& graph, const DelaySchedule& delays, SimOptions opt) {
    const Tpg& base = graph.base;
    const int n = base.num_agents();

    std::vector<int> last(n);
    for (int a = 0; a < n; ++a) last[a] = base.chain_length(a) - 1;

    // Incoming constraints per (agent, state).
    std::vector<std::vector<std::vector<Constraint>>> into(n);
    for (int a = 0; a < n; ++a) into[a].resize(base.chain_length(a));
    for (const Type2Edge& e : graph.fixed) {
        into[e.to.agent][e.to.index].push_back({e.from.agent, e.from.index, -1, false});
    }
    for (int p = 0; p < graph.num_pairs(); ++p) {
        const Type2Edge& f = graph.pairs[p].forward;
        const Type2Edge& r = graph.pairs[p].reversed;
        into[f.to.agent][f.to.index].push_back({f.from.agent, f.from.index, p, false});
        into[r.to.agent][r.to.index].push_back({r.from.agent, r.from.index, p, true});
    }

    std::vector<PairState> pair_state(graph.num_pairs(), PairState::Unresolved);
    std::vector<TpgVertex> trig_fwd(graph.num_pairs()), trig_rev(graph.num_pairs());
    for (int p = 0; p < graph.num_pairs(); ++p) {
        const BidirectionalPair& pr = graph.pairs[p];
        trig_fwd[p] = {pr.forward.from.agent, pr.forward.from.index - 1};
        trig_rev[p] = {pr.forward.to.agent, pr.forward.to.index};
    }

    auto active = [&](const Constraint& c) {
        if (c.pair < 0) return true;
        if (c.reversed) return pair_state[c.pair] == PairState::Reversed;
        return pair_state[c.pair] == PairState::Forward;
    };

    ExecutionTrace trace;
    trace.completion.assign(n, 0);
    std::vector<int> idx(n, 0);

    const std::vector<int> durations = base.plan_durations();
    const int makespan = durations.empty()
                             ? 0
                             : *std::max_element(durations.begin(), durations.end());
    const int cap = opt.timestep_cap > 0
                        ? opt.timestep_cap
                        : 10 * (makespan + delays.total_stall_timesteps() +
                                base.total_vertices()) +
                              50;

    auto record_row = [&] {
        std::vector<Location> row(n);
        std::vector<int> srow(n);
        for (int a = 0; a < n; ++a) {
            row[a] = base.chains[a][idx[a]];
            srow[a] = idx[a];
        }
        trace.positions.push_back(std::move(row));
        trace.state_index.push_back(std::move(srow));
    };
    record_row();

    auto all_done = [&] {
        for (int a = 0; a < n; ++a) {
            if (idx[a] != last[a]) return false;
        }
        return true;
    };

    std::vector<std::uint8_t> can_move(n);
    int t = 0;
    while (!all_done()) {
        if (t >= cap) {
            throw SimulationError("timestep cap " + std::to_string(cap) +
                                      " exceeded; execution did not converge",
                                  trace);
        }

        for (int a = 0; a < n; ++a) {
            can_move[a] = idx[a] != last[a] && !delays.stalled(a, t);
        }

        // Greatest fixpoint over simultaneously committable moves, then
        // first-come-first-served arbitration of unresolved pairs. Ties go
        // to the forward claimant, whose eligibility never depends on the
        // reversed claimant's move.
        while (true) {
            bool changed = true;
            while (changed) {
                changed = false;
                for (int a = 0; a < n; ++a) {
                    if (!can_move[a]) continue;
                    const int target = idx[a] + 1;
                    for (const Constraint& c : into[a][target]) {
                        if (!active(c)) continue;
                        const bool ok =
                            idx[c.src_agent] >= c.src_index ||
                            (can_move[c.src_agent] && idx[c.src_agent] + 1 == c.src_index);
                        if (!ok) {
                            can_move[a] = 0;
                            changed = true;
                            break;
                        }
                    }
                }
            }
            bool raced = false;
            for (int p = 0; p < graph.num_pairs(); ++p) {
                if (pair_state[p] != PairState::Unresolved) continue;
                const bool m_claim = can_move[trig_fwd[p].agent] &&
                                     idx[trig_fwd[p].agent] + 1 == trig_fwd[p].index;
                const bool n_claim = can_move[trig_rev[p].agent] &&
                                     idx[trig_rev[p].agent] + 1 == trig_rev[p].index;
                if (m_claim && n_claim) {
                    can_move[trig_rev[p].agent] = 0;
                    raced = true;
                }
            }
            if (!raced) break;
        }

        bool progressed = false;
        for (int a = 0; a < n; ++a) {
            if (!can_move[a]) continue;
            ++idx[a];
            progressed = true;
            if (idx[a] == last[a]) trace.completion[a] = t + 1;
        }

        for (int p = 0; p < graph.num_pairs(); ++p) {
            if (pair_state[p] != PairState::Unresolved) continue;
            if (idx[trig_fwd[p].agent] >= trig_fwd[p].index) {
                pair_state[p] = PairState::Forward;
                trace.selections.push_back({p, false, t + 1});
            } else if (idx[trig_rev[p].agent] >= trig_rev[p].index) {
                pair_state[p] = PairState::Reversed;
                trace.selections.push_back({p, true, t + 1});
            }
        }

        bool stalled_any = false;
        for (int a = 0; a < n && !stalled_any; ++a) {
            stalled_any = idx[a] != last[a] && delays.stalled(a, t);
        }
        if (!progressed && !stalled_any && !all_done()) {
            std::ostringstream os;
            os << "deadlock at t=" << t << ":";
            for (int a = 0; a < n; ++a) {
                if (idx[a] == last[a]) continue;
                os << " agent " << a << "@state " << idx[a];
                for (const Constraint& c : into[a][idx[a] + 1]) {
                    if (!active(c)) continue;
                    if (idx[c.src_agent] < c.src_index) {
                        os << " waits on " << c.src_agent << ">=" << c.src_index << ";";
                        break;
                    }
                }
            }
            throw SimulationError(os.str(), trace);
        }

        ++t;
        record_row();
    }

    for (const StallEvent& e : delays.events()) {
        if (e.agent < n && e.start < trace.completion[e.agent]) {
            trace.delays.push_back(e);
        }
    }
    return trace;
}

ExecutionTrace simulate(const Tpg& graph, const DelaySchedule& delays, SimOptions opt) {
    Btpg wrapper;
    wrapper.base = graph;
    wrapper.fixed = graph.type2;
    return simulate(wrapper, delays, opt);
}

double ideal_mean_timesteps(const std::vector<int>& plan_durations,
                            const DelaySchedule& delays) {
    if (plan_durations.empty()) return 0.0;
    double sum = 0.0;
    for (int a = 0; a < static_cast<int>(plan_durations.size()); ++a) {
        sum += delays.unobstructed_completion(a, plan_durations[a]);
    }
    return sum / static_cast<double>(plan_durations.size());
}

Metrics compute_metrics(const std::vector<int>& plan_durations,
                        const ExecutionTrace& tpg_trace, const ExecutionTrace& btpg_trace,
                        const DelaySchedule& delays) {
    if (tpg_trace.completion.size() != btpg_trace.completion.size() ||
        tpg_trace.completion.size() != plan_durations.size()) {
        throw std::invalid_argument("compute_metrics: traces do not match the plan");
    }
    Metrics m;
    m.t_tpg = tpg_trace.mean_completion();
    m.t_btpg = btpg_trace.mean_completion();
    m.t_ideal = ideal_mean_timesteps(plan_durations, delays);
    m.used_pairs = btpg_trace.used_pairs();
    const double denom = m.t_tpg - m.t_ideal;
    if (denom <= 1e-12) {
        m.degenerate = true;
        m.improvement = 0.0;
    } else {
        m.improvement = (m.t_tpg - m.t_btpg) / denom;
    }
    return m;
}

int default_schedule_horizon(int makespan) { return 4 * makespan + 200; }

PairedRun run_paired(const Btpg& graph, const DelayConfig& config, std::uint64_t seed) {
    PairedRun run;
    const std::vector<int> durations = graph.base.plan_durations();
    const int makespan =
        durations.empty() ? 0 : *std::max_element(durations.begin(), durations.end());
    run.schedule = inject_delays(config, graph.base.num_agents(),
                                 default_schedule_horizon(makespan), seed);

    Btpg tpg_only;
    tpg_only.base = graph.base;
    tpg_only.fixed = graph.base.type2;
    run.tpg_trace = simulate(tpg_only, run.schedule);
    run.btpg_trace = simulate(graph, run.schedule);
    run.metrics = compute_metrics(durations, run.tpg_trace, run.btpg_trace, run.schedule);
    return run;
}

void write_trace_jsonl(const ExecutionTrace& trace, std::ostream& os) {
    using nlohmann::json;
    std::map<int, json> events_at;
    for (const StallEvent& e : trace.delays) {
        events_at[e.start].push_back({{"delay", {{"agent", e.agent}, {"len", e.length}}}});
    }
    for (const PairSelection& s : trace.selections) {
        events_at[s.timestep].push_back(
            {{"select", {{"pair", s.pair}, {"reversed", s.reversed}}}});
    }
    for (int t = 0; t < trace.timesteps(); ++t) {
        json row;
        row["t"] = t;
        json pos = json::array();
        for (const Location& l : trace.positions[t]) pos.push_back({l.x, l.y});
        row["pos"] = std::move(pos);
        if (auto it = events_at.find(t); it != events_at.end()) {
            row["events"] = it->second;
        }
        os << row.dump() << "\n";
    }
}

std::optional<std::string> verify_trace(const ExecutionTrace& trace, const GridMap* map) {
    const int T = trace.timesteps();
    for (int t = 0; t < T; ++t) {
        const auto& row = trace.positions[t];
        const int n = static_cast<int>(row.size());
        for (int a = 0; a < n; ++a) {
            if (map && !map->passable(row[a])) {
                return "agent " + std::to_string(a) + " off the map or on a blocked cell at t=" +
                       std::to_string(t);
            }
            if (t > 0 && !adjacent_or_same(trace.positions[t - 1][a], row[a])) {
                return "agent " + std::to_string(a) + " makes a non-adjacent move into t=" +
                       std::to_string(t);
            }
            for (int b = a + 1; b < n; ++b) {
                if (row[a] == row[b]) {
                    return "vertex conflict between agents " + std::to_string(a) + " and " +
                           std::to_string(b) + " at t=" + std::to_string(t);
                }
                if (t > 0 && trace.positions[t - 1][a] == row[b] &&
                    trace.positions[t - 1][b] == row[a] &&
                    !(row[a] == trace.positions[t - 1][a])) {
                    return "edge conflict between agents " + std::to_string(a) + " and " +
                           std::to_string(b) + " into t=" + std::to_string(t);
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace btpg
