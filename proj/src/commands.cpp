#include "btpg/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "btpg/bench.hpp"
#include "btpg/executor.hpp"
#include "btpg/graph_io.hpp"
#include "btpg/io.hpp"
#include "btpg/planner.hpp"
#include "btpg/tpg.hpp"

namespace btpg::cli {

namespace {

int report_infeasible(const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfeasible;
}

}  // namespace

int cmd_plan(const PlanArgs& args) {
    try {
        const GridMap map = load_map(read_file(args.map_file));
        const auto entries = load_scenario(read_file(args.scen_file), map);
        if (args.agents <= 0 || args.agents > static_cast<int>(entries.size())) {
            std::cerr << "error: scenario provides " << entries.size() << " agents, "
                      << args.agents << " requested\n";
            return kInfeasible;
        }
        std::vector<Location> starts, goals;
        for (int a = 0; a < args.agents; ++a) {
            starts.push_back(entries[a].start);
            goals.push_back(entries[a].goal);
        }
        PlannerOptions opt;
        opt.seed = args.seed;
        const MapfPlan plan = plan_prioritized(map, starts, goals, opt);
        write_file(args.out, plan_to_json(plan));
        std::cout << "planned " << args.agents << " agents, makespan " << plan.makespan()
                  << ", wrote " << args.out << "\n";
        return kOk;
    } catch (const std::exception& e) {
        return report_infeasible(e);
    }
}

int cmd_build(const BuildArgs& args) {
    try {
        const MapfPlan plan = plan_from_json(read_file(args.plan_file));
        const ValidationReport report = validate_plan(plan);
        if (!report.ok()) {
            std::cerr << "error: invalid plan: " << describe(report.violations.front()) << "\n";
            return kInfeasible;
        }
        const Tpg tpg = build_tpg(plan);

        GraphFile file;
        file.algo = args.algo;
        file.map = plan.map;
        const Budget budget =
            args.budget_ms < 0 ? kNoBudget : Budget(std::chrono::milliseconds(args.budget_ms));
        if (args.algo == "tpg") {
            const Grouping grouping = group_type2_edges(tpg);
            file.graph.base = tpg;
            file.graph.fixed = tpg.type2;
            file.graph.groups = grouping.groups;
            file.stats.type2_edges = static_cast<int>(tpg.type2.size());
            file.stats.singleton_edges = static_cast<int>(grouping.singletons.size());
            file.log.samples.push_back({0.0, 0});
        } else if (args.algo == "btpg-n" || args.algo == "btpg-o") {
            const BuildResult result =
                args.algo == "btpg-n" ? btpg_naive(tpg, budget) : btpg_optimized(tpg, budget);
            file.graph = result.graph;
            file.log = result.log;
            file.stats = result.stats;
        } else {
            std::cerr << "error: unknown algo '" << args.algo << "'\n";
            return kUsage;
        }
        write_file(args.out, graph_to_json(file));
        std::cout << args.algo << ": " << file.graph.num_pairs() << " pairs from "
                  << file.stats.singleton_edges << " singletons ("
                  << file.stats.type2_edges << " type-2 edges, "
                  << file.graph.groups.size() << " groups) in "
                  << format_double(file.stats.seconds) << "s, wrote " << args.out << "\n";
        return kOk;
    } catch (const std::exception& e) {
        return report_infeasible(e);
    }
}

int cmd_simulate(const SimulateArgs& args) {
    GraphFile file;
    try {
        file = graph_from_json(read_file(args.graph_file));
    } catch (const std::exception& e) {
        return report_infeasible(e);
    }

    DelayConfig delay;
    delay.delayed_fraction = args.delay_frac;
    delay.trigger_prob = args.delay_prob;
    delay.delay_length = args.delay_len;

    std::vector<BenchRow> rows;
    try {
        for (int s = 0; s < args.seeds; ++s) {
            const std::uint64_t seed = args.seed_base + s;
            delay.seed = seed;
            const PairedRun run = run_paired(file.graph, delay, seed);
            if (s == 0 && !args.trace_out.empty()) {
                std::ofstream f(args.trace_out);
                write_trace_jsonl(run.btpg_trace, f);
            }
            BenchRow row;
            row.map_id = args.graph_file;
            row.agents = file.graph.base.num_agents();
            row.scenario = 0;
            row.seed = seed;
            row.t_tpg = run.metrics.t_tpg;
            row.t_ideal = run.metrics.t_ideal;
            row.degenerate = run.metrics.degenerate;
            row.type2 = file.stats.type2_edges;
            row.singletons = file.stats.singleton_edges;
            if (file.algo == "btpg-n") {
                row.t_btpg_n = run.metrics.t_btpg;
                row.imp_n = run.metrics.improvement;
                row.pairs_n = file.graph.num_pairs();
                row.used_n = run.metrics.used_pairs;
                row.build_s_n = file.stats.seconds;
            } else {
                row.t_btpg_o = run.metrics.t_btpg;
                row.imp_o = run.metrics.improvement;
                row.pairs_o = file.graph.num_pairs();
                row.used_o = run.metrics.used_pairs;
                row.build_s_o = file.stats.seconds;
            }
            rows.push_back(std::move(row));
        }
    } catch (const SimulationError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        const std::string dump = args.out + ".deadlock.jsonl";
        std::ofstream f(dump);
        write_trace_jsonl(e.partial, f);
        std::cerr << "partial trace dumped to " << dump << "\n";
        return kInternal;
    } catch (const std::exception& e) {
        return report_infeasible(e);
    }

    write_file(args.out, rows_to_csv(rows));
    double mean_imp = 0;
    for (const BenchRow& r : rows) {
        mean_imp += file.algo == "btpg-n" ? r.imp_n : r.imp_o;
    }
    std::cout << "simulated " << args.seeds << " seeds, mean improvement "
              << format_double(rows.empty() ? 0.0 : mean_imp / rows.size()) << ", wrote "
              << args.out << "\n";
    return kOk;
}

int cmd_bench(const BenchArgs& args) {
    try {
        const BenchConfig cfg = bench_config_from_json(read_file(args.config_file));
        const BenchOutput out = run_bench(cfg);
        write_file(cfg.out_prefix + "_rows.csv", rows_to_csv(out.rows));
        write_file(cfg.out_prefix + "_agg.csv", aggregates_to_csv(out.aggregates));
        write_file(cfg.out_prefix + "_anytime.csv", anytime_to_csv(out.anytime));
        for (const std::string& s : out.skipped) std::cerr << "skipped: " << s << "\n";
        std::cout << out.rows.size() << " simulations over " << out.aggregates.size()
                  << " cells, wrote " << cfg.out_prefix << "_{rows,agg,anytime}.csv\n";
        for (const BenchAggregate& a : out.aggregates) {
            std::cout << "  " << a.map_id << " x" << a.agents << ": mean imp n/o "
                      << format_double(a.mean_imp_n) << "/" << format_double(a.mean_imp_o)
                      << ", T " << format_double(a.mean_t_tpg) << " -> "
                      << format_double(a.mean_t_btpg_n) << " -> "
                      << format_double(a.mean_t_btpg_o) << "\n";
        }
        return kOk;
    } catch (const SimulationError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    } catch (const std::exception& e) {
        return report_infeasible(e);
    }
}

}  // namespace btpg::cli
