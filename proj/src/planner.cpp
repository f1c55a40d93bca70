#include "btpg/planner.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <queue>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace btpg {

namespace {

constexpr std::array<Location, 5> kMoves = {
    Location{0, 0}, Location{1, 0}, Location{-1, 0}, Location{0, 1}, Location{0, -1}};

// Vertex, edge, and goal-rest reservations of the already planned agents.
class ReservationTable {
public:
    explicit ReservationTable(const GridMap& map) : map_(&map) {
        rest_start_.assign(static_cast<std::size_t>(map.width()) * map.height(), INT_MAX);
        last_visit_.assign(rest_start_.size(), -1);
    }

    void reserve_path(const Path& path) {
        for (int t = 0; t < static_cast<int>(path.steps.size()); ++t) {
            vertex_.insert(vkey(path.steps[t], t));
            last_visit_[cell(path.steps[t])] =
                std::max(last_visit_[cell(path.steps[t])], t);
            if (t > 0 && !(path.steps[t] == path.steps[t - 1])) {
                edge_.insert(ekey(path.steps[t - 1], path.steps[t], t - 1));
            }
        }
        const int arrival = static_cast<int>(path.steps.size()) - 1;
        rest_start_[cell(path.steps.back())] =
            std::min(rest_start_[cell(path.steps.back())], arrival);
    }

    bool vertex_free(Location l, int t) const {
        if (t >= rest_start_[cell(l)]) return false;
        return !vertex_.count(vkey(l, t));
    }

    // Moving from -> to during [t, t+1): blocked if someone traverses the
    // opposite direction in the same interval.
    bool edge_free(Location from, Location to, int t) const {
        return !edge_.count(ekey(to, from, t));
    }

    // An agent may settle on its goal at time t only if no reserved path
    // touches the goal cell at or after t.
    bool can_rest(Location goal, int t) const {
        return t > last_visit_[cell(goal)] && t < rest_start_[cell(goal)];
    }

private:
    std::size_t cell(Location l) const {
        return static_cast<std::size_t>(l.y) * map_->width() + l.x;
    }
    std::uint64_t vkey(Location l, int t) const {
        return (static_cast<std::uint64_t>(t) << 32) | cell(l);
    }
    std::uint64_t ekey(Location from, Location to, int t) const {
        const std::uint64_t c = cell(from) * rest_start_.size() + cell(to);
        return (static_cast<std::uint64_t>(t) << 40) ^ c;
    }

    const GridMap* map_;
    std::unordered_set<std::uint64_t> vertex_;
    std::unordered_set<std::uint64_t> edge_;
    std::vector<int> rest_start_;
    std::vector<int> last_visit_;
};

std::vector<int> backward_bfs(const GridMap& map, Location goal) {
    const std::size_t size = static_cast<std::size_t>(map.width()) * map.height();
    std::vector<int> dist(size, INT_MAX);
    auto cell = [&](Location l) {
        return static_cast<std::size_t>(l.y) * map.width() + l.x;
    };
    std::queue<Location> queue;
    dist[cell(goal)] = 0;
    queue.push(goal);
    while (!queue.empty()) {
        const Location cur = queue.front();
        queue.pop();
        for (std::size_t k = 1; k < kMoves.size(); ++k) {
            const Location next{cur.x + kMoves[k].x, cur.y + kMoves[k].y};
            if (!map.passable(next)) continue;
            if (dist[cell(next)] != INT_MAX) continue;
            dist[cell(next)] = dist[cell(cur)] + 1;
            queue.push(next);
        }
    }
    return dist;
}

struct AStarNode {
    int f;
    int t;
    Location loc;
    friend bool operator>(const AStarNode& a, const AStarNode& b) {
        return std::tie(a.f, a.t, a.loc.x, a.loc.y) > std::tie(b.f, b.t, b.loc.x, b.loc.y);
    }
};

std::vector<Location> space_time_astar(const GridMap& map, Location start, Location goal,
                                       const ReservationTable& table,
                                       const std::vector<int>& goal_dist, int horizon) {
    auto cell = [&](Location l) {
        return static_cast<std::size_t>(l.y) * map.width() + l.x;
    };
    if (goal_dist[cell(start)] == INT_MAX) return {};

    auto skey = [&](Location l, int t) {
        return (static_cast<std::uint64_t>(t) << 32) | cell(l);
    };
    std::unordered_map<std::uint64_t, std::uint64_t> parent;
    std::priority_queue<AStarNode, std::vector<AStarNode>, std::greater<AStarNode>> open;
    std::unordered_set<std::uint64_t> closed;

    if (!table.vertex_free(start, 0)) return {};
    open.push({goal_dist[cell(start)], 0, start});
    parent[skey(start, 0)] = skey(start, 0);

    while (!open.empty()) {
        const AStarNode node = open.top();
        open.pop();
        const std::uint64_t key = skey(node.loc, node.t);
        if (closed.count(key)) continue;
        closed.insert(key);

        if (node.loc == goal && table.can_rest(goal, node.t)) {
            std::vector<Location> steps;
            std::uint64_t cur = key;
            int t = node.t;
            Location l = node.loc;
            while (true) {
                steps.push_back(l);
                const std::uint64_t prev = parent.at(cur);
                if (prev == cur) break;
                --t;
                l = {static_cast<int>(prev & 0xFFFFFFFFu) % map.width(),
                     static_cast<int>(prev & 0xFFFFFFFFu) / map.width()};
                cur = prev;
            }
            std::reverse(steps.begin(), steps.end());
            return steps;
        }
        if (node.t >= horizon) continue;

        for (const Location& d : kMoves) {
            const Location next{node.loc.x + d.x, node.loc.y + d.y};
            if (!map.passable(next)) continue;
            if (goal_dist[cell(next)] == INT_MAX) continue;
            if (!table.vertex_free(next, node.t + 1)) continue;
            if (!table.edge_free(node.loc, next, node.t)) continue;
            const std::uint64_t nkey = skey(next, node.t + 1);
            if (closed.count(nkey) || parent.count(nkey)) continue;
            parent[nkey] = key;
            open.push({node.t + 1 + goal_dist[cell(next)], node.t + 1, next});
        }
    }
    return {};
}

}  // namespace

MapfPlan plan_prioritized(const GridMap& map, const std::vector<Location>& starts,
                          const std::vector<Location>& goals, PlannerOptions opt) {
    const int n = static_cast<int>(starts.size());
    if (n == 0 || goals.size() != starts.size()) {
        throw PlanningError("starts and goals must be non-empty and matched", -1);
    }
    for (int a = 0; a < n; ++a) {
        if (!map.passable(starts[a]) || !map.passable(goals[a])) {
            throw PlanningError("endpoint blocked or out of bounds for agent " +
                                    std::to_string(a),
                                a);
        }
        for (int b = a + 1; b < n; ++b) {
            if (starts[a] == starts[b] || goals[a] == goals[b]) {
                throw PlanningError("duplicate start or goal between agents " +
                                        std::to_string(a) + " and " + std::to_string(b),
                                    a);
            }
        }
    }

    const int horizon =
        opt.horizon > 0 ? opt.horizon : map.width() * map.height() + 2 * (map.width() + map.height());

    std::vector<std::vector<int>> goal_dist(n);
    for (int a = 0; a < n; ++a) goal_dist[a] = backward_bfs(map, goals[a]);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(opt.seed);
    int failed_agent = -1;

    MapfPlan best;
    long long best_cost = -1;
    int kept = 0;
    for (int attempt = 0; attempt <= opt.max_restarts; ++attempt) {
        if (attempt > 0) {
            for (int i = n - 1; i > 0; --i) {
                const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
                std::swap(order[i], order[j]);
            }
        }
        ReservationTable table(map);
        MapfPlan plan;
        plan.map = map;
        plan.paths.resize(n);
        bool ok = true;
        for (const int a : order) {
            std::vector<Location> steps =
                space_time_astar(map, starts[a], goals[a], table, goal_dist[a], horizon);
            if (steps.empty()) {
                ok = false;
                failed_agent = a;
                break;
            }
            plan.paths[a] = {a, std::move(steps)};
            table.reserve_path(plan.paths[a]);
        }
        if (!ok) continue;
        long long cost = 0;
        for (const Path& p : plan.paths) cost += path_duration(p);
        if (best_cost < 0 || cost < best_cost) {
            best_cost = cost;
            best = std::move(plan);
        }
        if (++kept >= std::max(1, opt.keep_best_of)) break;
    }
    if (best_cost >= 0) return best;
    throw PlanningError("no path within horizon for agent " + std::to_string(failed_agent),
                        failed_agent);
}

GridMap make_random_map(int width, int height, double obstacle_density, std::uint64_t seed) {
    GridMap map(width, height);
    std::mt19937_64 rng(seed);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (u < obstacle_density) map.set_blocked({x, y});
        }
    }
    return map;
}

InstanceSample sample_endpoints(const GridMap& map, int n_agents, std::uint64_t seed) {
    std::vector<Location> cells = map.free_cells();
    if (static_cast<int>(cells.size()) < 2 * n_agents) {
        throw std::invalid_argument("not enough free cells for " + std::to_string(n_agents) +
                                    " agents");
    }
    std::mt19937_64 rng(seed);
    for (std::size_t i = cells.size() - 1; i > 0; --i) {
        const std::size_t j = rng() % (i + 1);
        std::swap(cells[i], cells[j]);
    }
    InstanceSample sample;
    sample.starts.assign(cells.begin(), cells.begin() + n_agents);
    sample.goals.assign(cells.begin() + n_agents, cells.begin() + 2 * n_agents);
    return sample;
}

}  // namespace btpg
