#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "btpg/btpg.hpp"

namespace btpg {

struct DelayConfig {
    double delayed_fraction = 0.10;  // share of agents subject to delays
    double trigger_prob = 0.30;      // per non-delayed timestep
    int delay_length = 5;            // timesteps per triggered stall
    std::uint64_t seed = 0;
};

struct StallEvent {
    int agent = 0;
    int start = 0;
    int length = 0;
};

// Per-agent stall timeline over [0, horizon), independent of agent motion:
// at each non-stalled timestep a delayed agent draws once, and a hit
// freezes it for delay_length timesteps. Identical for every policy run
// under the same seed.
class DelaySchedule {
public:
    DelaySchedule() = default;

    bool stalled(int agent, int t) const;
    int horizon() const { return horizon_; }
    const std::vector<StallEvent>& events() const { return events_; }

    // Total stall timesteps of `agent` in [0, t).
    int stall_before(int agent, int t) const;

    // Completion time of an agent that needs `moves` non-stalled timesteps
    // and is never blocked by anyone.
    int unobstructed_completion(int agent, int moves) const;

    void add_stall(int agent, int start, int length);  // hand-built schedules
    void set_num_agents(int n);
    int total_stall_timesteps() const;

private:
    friend DelaySchedule inject_delays(const DelayConfig&, int, int, std::uint64_t);
    int horizon_ = 0;
    int num_agents_ = 0;
    std::vector<StallEvent> events_;  // sorted by (agent, start), non-overlapping
};

// ceil(delayed_fraction * n) agents chosen uniformly by seed; each draws a
// stall of delay_length timesteps with trigger_prob at every non-stalled
// timestep below the horizon.
DelaySchedule inject_delays(const DelayConfig& config, int n_agents, int horizon,
                            std::uint64_t seed);

struct PairSelection {
    int pair = -1;
    bool reversed = false;
    int timestep = -1;
};

struct ExecutionTrace {
    std::vector<std::vector<Location>> positions;  // positions[t][agent]
    std::vector<std::vector<int>> state_index;     // state_index[t][agent]
    std::vector<StallEvent> delays;                // stalls that began before completion
    std::vector<PairSelection> selections;         // in resolution order
    std::vector<int> completion;                   // per-agent arrival timestep

    int timesteps() const { return static_cast<int>(positions.size()); }
    double mean_completion() const;
    int used_pairs() const;  // selections that picked the reversed edge
};

struct SimulationError : std::runtime_error {
    explicit SimulationError(const std::string& what, ExecutionTrace partial_ = {})
        : std::runtime_error(what), partial(std::move(partial_)) {}

    ExecutionTrace partial;  // trace up to the abort, for diagnostics
};

struct SimOptions {
    int timestep_cap = 0;  // 0: 10 * (makespan + scheduled stalls) + 50
};

// Runs the execution policy: every non-stalled agent advances when all of
// its governing type-2 constraints hold under "no earlier than" semantics
// (sources may be satisfied by moves committed in the same timestep), and
// each unresolved bidirectional pair is claimed by the first agent to reach
// its trigger state, ties going to the forward edge. Throws SimulationError
// on deadlock or when the timestep cap is exceeded.
ExecutionTrace simulate(const Btpg& graph, const DelaySchedule& delays, SimOptions opt = {});
ExecutionTrace simulate(const Tpg& graph, const DelaySchedule& delays, SimOptions opt = {});

struct Metrics {
    double t_tpg = 0.0;    // mean execution timesteps under the TPG policy
    double t_btpg = 0.0;   // mean execution timesteps under the BTPG policy
    double t_ideal = 0.0;  // mean plan duration plus own-stall time
    double improvement = 0.0;
    bool degenerate = false;  // t_tpg <= t_ideal: improvement reported as 0
    int used_pairs = 0;
};

// (T_TPG - T_BTPG) / (T_TPG - T_Ideal) over one paired run.
// Pre: both traces come from the same plan and delay schedule.
Metrics compute_metrics(const std::vector<int>& plan_durations,
                        const ExecutionTrace& tpg_trace, const ExecutionTrace& btpg_trace,
                        const DelaySchedule& delays);

double ideal_mean_timesteps(const std::vector<int>& plan_durations,
                            const DelaySchedule& delays);

// Horizon covering any plausible run of a plan with the given makespan.
int default_schedule_horizon(int makespan);

struct PairedRun {
    DelaySchedule schedule;
    ExecutionTrace tpg_trace;
    ExecutionTrace btpg_trace;
    Metrics metrics;
};

// Simulates the base TPG and the BTPG under one shared delay schedule.
PairedRun run_paired(const Btpg& graph, const DelayConfig& config, std::uint64_t seed);

// One JSON record per timestep with agent positions and events.
void write_trace_jsonl(const ExecutionTrace& trace, std::ostream& os);

// Checks adjacency (when a map is supplied), vertex conflicts, and edge
// conflicts over the whole trace. Returns a description of the first
// problem found, or nullopt.
std::optional<std::string> verify_trace(const ExecutionTrace& trace,
                                        const GridMap* map = nullptr);

}  // namespace btpg
