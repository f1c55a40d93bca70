#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "btpg/executor.hpp"
#include "btpg/planner.hpp"

namespace btpg {

struct BenchMapSpec {
    std::string id;
    std::string file;  // MovingAI .map path; empty when randomly generated
    bool random = false;
    int width = 0;
    int height = 0;
    double obstacle_density = 0.0;
    std::uint64_t seed = 0;
};

struct BenchConfig {
    std::vector<BenchMapSpec> maps;
    std::vector<int> agent_counts;
    int scenarios = 10;
    std::uint64_t scenario_seed_base = 1000;
    int seeds = 10;
    std::uint64_t sim_seed_base = 1;
    DelayConfig delay;
    long long budget_ms = -1;  // negative: unlimited
    std::string out_prefix = "bench";
    int threads = 0;  // 0: hardware concurrency
};

BenchConfig bench_config_from_json(const std::string& text);

struct BenchRow {
    std::string map_id;
    int agents = 0;
    int scenario = 0;
    std::uint64_t seed = 0;
    double t_tpg = 0, t_btpg_n = 0, t_btpg_o = 0, t_ideal = 0;
    double imp_n = 0, imp_o = 0;
    bool degenerate = false;
    int pairs_n = 0, pairs_o = 0, used_n = 0, used_o = 0;
    double build_s_n = 0, build_s_o = 0;
    int type2 = 0, singletons = 0;
};

struct BenchAggregate {
    std::string map_id;
    int agents = 0;
    int rows = 0;
    double mean_imp_n = 0, median_imp_n = 0, max_imp_n = 0, min_imp_n = 0;
    double mean_imp_o = 0, median_imp_o = 0, max_imp_o = 0, min_imp_o = 0;
    double mean_t_tpg = 0, mean_t_btpg_n = 0, mean_t_btpg_o = 0, mean_t_ideal = 0;
    // Shares of BTPG-o improvements: none, (0,10%], (10%,20%], >20%.
    double share_zero = 0, share_low = 0, share_mid = 0, share_high = 0;
};

struct AnytimeRow {
    std::string map_id;
    int agents = 0;
    int scenario = 0;
    std::string algo;
    double t = 0.0;
    int pairs = 0;
};

struct BenchOutput {
    std::vector<BenchRow> rows;
    std::vector<BenchAggregate> aggregates;
    std::vector<AnytimeRow> anytime;
    std::vector<std::string> skipped;  // instances the planner could not solve
};

BenchOutput run_bench(const BenchConfig& config);

std::vector<BenchAggregate> aggregate_rows(const std::vector<BenchRow>& rows);

std::string rows_to_csv(const std::vector<BenchRow>& rows);
std::string aggregates_to_csv(const std::vector<BenchAggregate>& aggregates);
std::string anytime_to_csv(const std::vector<AnytimeRow>& rows);

std::string format_double(double value);

}  // namespace btpg
