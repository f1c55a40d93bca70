#include <CLI11.hpp>

#include "btpg/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"MAPF plan post-processing: TPG/BTPG construction and delayed execution"};
    app.require_subcommand(1);

    btpg::cli::PlanArgs plan_args;
    CLI::App* plan = app.add_subcommand("plan", "Plan paths with prioritized space-time A*");
    plan->add_option("--map", plan_args.map_file, "MovingAI .map file")->required();
    plan->add_option("--scen", plan_args.scen_file, "MovingAI .scen file")->required();
    plan->add_option("--agents", plan_args.agents, "number of agents")->required();
    plan->add_option("--seed", plan_args.seed, "planner seed");
    plan->add_option("--out", plan_args.out, "output plan JSON")->required();

    btpg::cli::BuildArgs build_args;
    CLI::App* build = app.add_subcommand("build", "Build a TPG or BTPG from a plan");
    build->add_option("--plan", build_args.plan_file, "plan JSON file")->required();
    build->add_option("--algo", build_args.algo, "tpg | btpg-n | btpg-o")
        ->check(CLI::IsMember({"tpg", "btpg-n", "btpg-o"}));
    build->add_option("--budget-ms", build_args.budget_ms,
                      "construction budget in milliseconds (negative: unlimited)");
    build->add_option("--out", build_args.out, "output graph JSON")->required();

    btpg::cli::SimulateArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "Paired TPG/BTPG delayed execution");
    sim->add_option("--graph", sim_args.graph_file, "graph JSON file")->required();
    sim->add_option("--delay-frac", sim_args.delay_frac, "fraction of agents delayed");
    sim->add_option("--delay-prob", sim_args.delay_prob, "per-timestep trigger probability");
    sim->add_option("--delay-len", sim_args.delay_len, "stall length in timesteps");
    sim->add_option("--seeds", sim_args.seeds, "number of simulation seeds");
    sim->add_option("--seed", sim_args.seed_base, "first simulation seed");
    sim->add_option("--out", sim_args.out, "output CSV")->required();
    sim->add_option("--trace-out", sim_args.trace_out, "JSONL trace of the first seed");

    btpg::cli::BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "Sweep maps x agents x scenarios x seeds");
    bench->add_option("config", bench_args.config_file, "bench config JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? btpg::cli::kOk : btpg::cli::kUsage;
    }

    if (plan->parsed()) return btpg::cli::cmd_plan(plan_args);
    if (build->parsed()) return btpg::cli::cmd_build(build_args);
    if (sim->parsed()) return btpg::cli::cmd_simulate(sim_args);
    if (bench->parsed()) return btpg::cli::cmd_bench(bench_args);
    return btpg::cli::kUsage;
}
