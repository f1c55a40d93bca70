#pragma once

#include <cstdint>
#include <string>

namespace btpg::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kInfeasible = 2;
inline constexpr int kInternal = 3;

struct PlanArgs {
    std::string map_file;
    std::string scen_file;
    int agents = 0;
    std::uint64_t seed = 0;
    std::string out;
};

struct BuildArgs {
    std::string plan_file;
    std::string algo = "btpg-o";  // tpg | btpg-n | btpg-o
    long long budget_ms = -1;     // negative: unlimited
    std::string out;
};

struct SimulateArgs {
    std::string graph_file;
    double delay_frac = 0.10;
    double delay_prob = 0.30;
    int delay_len = 5;
    int seeds = 10;
    std::uint64_t seed_base = 1;
    std::string out;
    std::string trace_out;  // optional: BTPG trace of the first seed
};

struct BenchArgs {
    std::string config_file;
};

int cmd_plan(const PlanArgs& args);
int cmd_build(const BuildArgs& args);
int cmd_simulate(const SimulateArgs& args);
int cmd_bench(const BenchArgs& args);

}  // namespace btpg::cli
