#include "btpg/bench.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <numeric>
#include <sstream>
#include <thread>

#include "btpg/io.hpp"
#include "btpg/tpg.hpp"

namespace btpg {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

Budget budget_from_ms(long long ms) {
    if (ms < 0) return kNoBudget;
    return std::chrono::milliseconds(ms);
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

BenchConfig bench_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid bench config: ") + e.what());
    }
    BenchConfig cfg;
    try {
        for (const json& jm : j.at("maps")) {
            BenchMapSpec spec;
            spec.id = jm.at("id").get<std::string>();
            if (jm.contains("file")) {
                spec.file = jm.at("file").get<std::string>();
            } else {
                const json& jr = jm.at("random");
                spec.random = true;
                spec.width = jr.at("width").get<int>();
                spec.height = jr.at("height").get<int>();
                spec.obstacle_density = jr.at("obstacle_density").get<double>();
                spec.seed = jr.value("seed", 0ULL);
            }
            cfg.maps.push_back(std::move(spec));
        }
        cfg.agent_counts = j.at("agent_counts").get<std::vector<int>>();
        cfg.scenarios = j.value("scenarios", 10);
        cfg.scenario_seed_base = j.value("scenario_seed_base", 1000ULL);
        cfg.seeds = j.value("seeds", 10);
        cfg.sim_seed_base = j.value("sim_seed_base", 1ULL);
        if (j.contains("delay")) {
            const json& jd = j.at("delay");
            cfg.delay.delayed_fraction = jd.value("fraction", 0.10);
            cfg.delay.trigger_prob = jd.value("prob", 0.30);
            cfg.delay.delay_length = jd.value("length", 5);
        }
        cfg.budget_ms = j.value("budget_ms", -1LL);
        cfg.out_prefix = j.value("out_prefix", std::string("bench"));
        cfg.threads = j.value("threads", 0);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bench config schema error: ") + e.what());
    }
    return cfg;
}

namespace {

struct Job {
    int map_index;
    int agents;
    int scenario;
};

struct JobResult {
    std::vector<BenchRow> rows;
    std::vector<AnytimeRow> anytime;
    std::string skipped;
};

JobResult run_job(const BenchConfig& cfg, const GridMap& map, const std::string& map_id,
                  const Job& job) {
    JobResult result;
    const std::uint64_t instance_seed = cfg.scenario_seed_base +
                                        1000003ULL * job.scenario + 31ULL * job.agents +
                                        fnv1a(map_id);

    MapfPlan plan;
    bool planned = false;
    for (std::uint64_t attempt = 0; attempt < 5 && !planned; ++attempt) {
        try {
            const InstanceSample sample =
                sample_endpoints(map, job.agents, instance_seed + 7919 * attempt);
            PlannerOptions popt;
            popt.seed = instance_seed + attempt;
            plan = plan_prioritized(map, sample.starts, sample.goals, popt);
            planned = true;
        } catch (const std::exception&) {
        }
    }
    if (!planned) {
        std::ostringstream os;
        os << map_id << " agents=" << job.agents << " scenario=" << job.scenario
           << ": planner gave up";
        result.skipped = os.str();
        return result;
    }

    const Tpg tpg = build_tpg(plan);
    const Budget budget = budget_from_ms(cfg.budget_ms);
    const BuildResult bn = btpg_naive(tpg, budget);
    const BuildResult bo = btpg_optimized(tpg, budget);

    for (const AnytimeSample& s : bn.log.samples) {
        result.anytime.push_back({map_id, job.agents, job.scenario, "btpg-n", s.t, s.pairs});
    }
    for (const AnytimeSample& s : bo.log.samples) {
        result.anytime.push_back({map_id, job.agents, job.scenario, "btpg-o", s.t, s.pairs});
    }

    const std::vector<int> durations = tpg.plan_durations();
    const int makespan =
        durations.empty() ? 0 : *std::max_element(durations.begin(), durations.end());

    Btpg tpg_only;
    tpg_only.base = tpg;
    tpg_only.fixed = tpg.type2;

    for (int s = 0; s < cfg.seeds; ++s) {
        const std::uint64_t seed = cfg.sim_seed_base + s;
        const DelaySchedule schedule = inject_delays(
            cfg.delay, tpg.num_agents(), default_schedule_horizon(makespan), seed);
        const ExecutionTrace tr_t = simulate(tpg_only, schedule);
        const ExecutionTrace tr_n = simulate(bn.graph, schedule);
        const ExecutionTrace tr_o = simulate(bo.graph, schedule);
        const Metrics mn = compute_metrics(durations, tr_t, tr_n, schedule);
        const Metrics mo = compute_metrics(durations, tr_t, tr_o, schedule);

        BenchRow row;
        row.map_id = map_id;
        row.agents = job.agents;
        row.scenario = job.scenario;
        row.seed = seed;
        row.t_tpg = mn.t_tpg;
        row.t_btpg_n = mn.t_btpg;
        row.t_btpg_o = mo.t_btpg;
        row.t_ideal = mn.t_ideal;
        row.imp_n = mn.improvement;
        row.imp_o = mo.improvement;
        row.degenerate = mn.degenerate;
        row.pairs_n = bn.graph.num_pairs();
        row.pairs_o = bo.graph.num_pairs();
        row.used_n = tr_n.used_pairs();
        row.used_o = tr_o.used_pairs();
        row.build_s_n = bn.stats.seconds;
        row.build_s_o = bo.stats.seconds;
        row.type2 = bn.stats.type2_edges;
        row.singletons = bn.stats.singleton_edges;
        result.rows.push_back(std::move(row));
    }
    return result;
}

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

std::vector<BenchAggregate> aggregate_rows(const std::vector<BenchRow>& rows) {
    std::vector<BenchAggregate> out;
    std::vector<std::pair<std::string, int>> cells;
    for (const BenchRow& r : rows) {
        const std::pair<std::string, int> cell{r.map_id, r.agents};
        if (std::find(cells.begin(), cells.end(), cell) == cells.end()) cells.push_back(cell);
    }
    for (const auto& cell : cells) {
        BenchAggregate agg;
        agg.map_id = cell.first;
        agg.agents = cell.second;
        std::vector<double> imp_n, imp_o;
        for (const BenchRow& r : rows) {
            if (r.map_id != cell.first || r.agents != cell.second) continue;
            ++agg.rows;
            imp_n.push_back(r.imp_n);
            imp_o.push_back(r.imp_o);
            agg.mean_t_tpg += r.t_tpg;
            agg.mean_t_btpg_n += r.t_btpg_n;
            agg.mean_t_btpg_o += r.t_btpg_o;
            agg.mean_t_ideal += r.t_ideal;
            if (r.imp_o <= 0.0) {
                agg.share_zero += 1;
            } else if (r.imp_o <= 0.10) {
                agg.share_low += 1;
            } else if (r.imp_o <= 0.20) {
                agg.share_mid += 1;
            } else {
                agg.share_high += 1;
            }
        }
        const double n = agg.rows;
        agg.mean_t_tpg /= n;
        agg.mean_t_btpg_n /= n;
        agg.mean_t_btpg_o /= n;
        agg.mean_t_ideal /= n;
        agg.share_zero /= n;
        agg.share_low /= n;
        agg.share_mid /= n;
        agg.share_high /= n;
        agg.mean_imp_n = std::accumulate(imp_n.begin(), imp_n.end(), 0.0) / n;
        agg.mean_imp_o = std::accumulate(imp_o.begin(), imp_o.end(), 0.0) / n;
        agg.median_imp_n = median_of(imp_n);
        agg.median_imp_o = median_of(imp_o);
        agg.max_imp_n = *std::max_element(imp_n.begin(), imp_n.end());
        agg.min_imp_n = *std::min_element(imp_n.begin(), imp_n.end());
        agg.max_imp_o = *std::max_element(imp_o.begin(), imp_o.end());
        agg.min_imp_o = *std::min_element(imp_o.begin(), imp_o.end());
        out.push_back(std::move(agg));
    }
    return out;
}

BenchOutput run_bench(const BenchConfig& cfg) {
    std::vector<GridMap> maps;
    for (const BenchMapSpec& spec : cfg.maps) {
        if (spec.random) {
            maps.push_back(make_random_map(spec.width, spec.height, spec.obstacle_density,
                                           spec.seed));
        } else {
            maps.push_back(load_map(read_file(spec.file)));
        }
    }

    std::vector<Job> jobs;
    for (int m = 0; m < static_cast<int>(cfg.maps.size()); ++m) {
        for (const int agents : cfg.agent_counts) {
            for (int s = 0; s < cfg.scenarios; ++s) {
                jobs.push_back({m, agents, s});
            }
        }
    }

    std::vector<JobResult> results(jobs.size());
    std::atomic<std::size_t> next{0};
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                             : std::min<unsigned>(hw, jobs.size());
    auto work = [&] {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= jobs.size()) break;
            const Job& job = jobs[k];
            results[k] = run_job(cfg, maps[job.map_index], cfg.maps[job.map_index].id, job);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& th : pool) th.join();
    }

    BenchOutput out;
    for (const JobResult& r : results) {
        if (!r.skipped.empty()) out.skipped.push_back(r.skipped);
        out.rows.insert(out.rows.end(), r.rows.begin(), r.rows.end());
        out.anytime.insert(out.anytime.end(), r.anytime.begin(), r.anytime.end());
    }
    out.aggregates = aggregate_rows(out.rows);
    return out;
}

std::string rows_to_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << "map,agents,scenario,seed,t_tpg,t_btpg_n,t_btpg_o,t_ideal,imp_n,imp_o,degenerate,"
          "pairs_n,pairs_o,used_n,used_o,build_s_n,build_s_o,type2,singletons\n";
    for (const BenchRow& r : rows) {
        os << r.map_id << ',' << r.agents << ',' << r.scenario << ',' << r.seed << ','
           << format_double(r.t_tpg) << ',' << format_double(r.t_btpg_n) << ','
           << format_double(r.t_btpg_o) << ',' << format_double(r.t_ideal) << ','
           << format_double(r.imp_n) << ',' << format_double(r.imp_o) << ','
           << (r.degenerate ? 1 : 0) << ',' << r.pairs_n << ',' << r.pairs_o << ',' << r.used_n
           << ',' << r.used_o << ',' << format_double(r.build_s_n) << ','
           << format_double(r.build_s_o) << ',' << r.type2 << ',' << r.singletons << '\n';
    }
    return os.str();
}

std::string aggregates_to_csv(const std::vector<BenchAggregate>& aggregates) {
    std::ostringstream os;
    os << "map,agents,rows,mean_imp_n,median_imp_n,max_imp_n,min_imp_n,mean_imp_o,"
          "median_imp_o,max_imp_o,min_imp_o,mean_t_tpg,mean_t_btpg_n,mean_t_btpg_o,"
          "mean_t_ideal,share_zero,share_0_10,share_10_20,share_gt_20\n";
    for (const BenchAggregate& a : aggregates) {
        os << a.map_id << ',' << a.agents << ',' << a.rows << ','
           << format_double(a.mean_imp_n) << ',' << format_double(a.median_imp_n) << ','
           << format_double(a.max_imp_n) << ',' << format_double(a.min_imp_n) << ','
           << format_double(a.mean_imp_o) << ',' << format_double(a.median_imp_o) << ','
           << format_double(a.max_imp_o) << ',' << format_double(a.min_imp_o) << ','
           << format_double(a.mean_t_tpg) << ',' << format_double(a.mean_t_btpg_n) << ','
           << format_double(a.mean_t_btpg_o) << ',' << format_double(a.mean_t_ideal) << ','
           << format_double(a.share_zero) << ',' << format_double(a.share_low) << ','
           << format_double(a.share_mid) << ',' << format_double(a.share_high) << '\n';
    }
    return os.str();
}

std::string anytime_to_csv(const std::vector<AnytimeRow>& rows) {
    std::ostringstream os;
    os << "map,agents,scenario,algo,t,pairs\n";
    for (const AnytimeRow& r : rows) {
        os << r.map_id << ',' << r.agents << ',' << r.scenario << ',' << r.algo << ','
           << format_double(r.t) << ',' << r.pairs << '\n';
    }
    return os.str();
}

}  // namespace btpg
