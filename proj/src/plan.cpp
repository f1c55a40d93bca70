#include "btpg/plan.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace btpg {

bool adjacent_or_same(Location a, Location b) {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y) <= 1;
}

GridMap::GridMap(int width, int height) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("GridMap dimensions must be positive");
    }
    cells_.assign(static_cast<std::size_t>(width) * height, 0);
}

void GridMap::set_blocked(Location l, bool value) {
    if (!in_bounds(l)) {
        throw std::out_of_range("blocked cell outside the map");
    }
    cells_[idx(l)] = value ? 1 : 0;
}

std::vector<Location> GridMap::blocked_cells() const {
    std::vector<Location> out;
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            if (blocked({x, y})) out.push_back({x, y});
        }
    }
    return out;
}

std::vector<Location> GridMap::free_cells() const {
    std::vector<Location> out;
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            if (!blocked({x, y})) out.push_back({x, y});
        }
    }
    return out;
}

int path_duration(const Path& path) {
    if (path.steps.empty()) return 0;
    int t = static_cast<int>(path.steps.size()) - 1;
    while (t > 0 && path.steps[t - 1] == path.steps.back()) --t;
    return t;
}

int MapfPlan::makespan() const {
    int m = 0;
    for (const auto& p : paths) {
        m = std::max(m, static_cast<int>(p.steps.size()) - 1);
    }
    return m;
}

Location position_at(const Path& path, int t) {
    if (t < 0) t = 0;
    if (t >= static_cast<int>(path.steps.size())) return path.steps.back();
    return path.steps[t];
}

std::string describe(const Violation& v) {
    std::ostringstream os;
    switch (v.kind) {
        case ViolationKind::EmptyPlan: os << "plan has no agents"; break;
        case ViolationKind::EmptyPath:
            os << "agent " << v.agent_a << " has an empty path";
            break;
        case ViolationKind::OutOfBounds:
            os << "agent " << v.agent_a << " leaves the map at t=" << v.timestep
               << " (" << v.where.x << "," << v.where.y << ")";
            break;
        case ViolationKind::BlockedCell:
            os << "agent " << v.agent_a << " enters a blocked cell at t=" << v.timestep
               << " (" << v.where.x << "," << v.where.y << ")";
            break;
        case ViolationKind::NonAdjacentStep:
            os << "agent " << v.agent_a << " makes a non-adjacent step into t=" << v.timestep;
            break;
        case ViolationKind::VertexConflict:
            os << "agents " << v.agent_a << " and " << v.agent_b << " share ("
               << v.where.x << "," << v.where.y << ") at t=" << v.timestep;
            break;
        case ViolationKind::EdgeConflict:
            os << "agents " << v.agent_a << " and " << v.agent_b
               << " swap cells into t=" << v.timestep;
            break;
    }
    return os.str();
}

ValidationReport validate_plan(const MapfPlan& plan) {
    ValidationReport report;
    if (plan.paths.empty()) {
        report.violations.push_back({ViolationKind::EmptyPlan});
        return report;
    }

    const int n = plan.num_agents();
    bool structural_ok = true;
    for (int a = 0; a < n; ++a) {
        const auto& path = plan.paths[a];
        if (path.steps.empty()) {
            report.violations.push_back({ViolationKind::EmptyPath, -1, a});
            structural_ok = false;
            continue;
        }
        for (int t = 0; t < static_cast<int>(path.steps.size()); ++t) {
            const Location l = path.steps[t];
            if (!plan.map.in_bounds(l)) {
                report.violations.push_back({ViolationKind::OutOfBounds, t, a, -1, l});
                structural_ok = false;
                continue;
            }
            if (plan.map.blocked(l)) {
                report.violations.push_back({ViolationKind::BlockedCell, t, a, -1, l});
                structural_ok = false;
            }
            if (t > 0 && !adjacent_or_same(path.steps[t - 1], l)) {
                report.violations.push_back({ViolationKind::NonAdjacentStep, t, a, -1, l});
                structural_ok = false;
            }
        }
    }
    if (!structural_ok) return report;

    const int horizon = plan.makespan();
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const auto& pa = plan.paths[a];
            const auto& pb = plan.paths[b];
            for (int t = 0; t <= horizon; ++t) {
                const Location la = position_at(pa, t);
                const Location lb = position_at(pb, t);
                if (la == lb) {
                    report.violations.push_back({ViolationKind::VertexConflict, t, a, b, la});
                }
                if (t < horizon) {
                    const Location na = position_at(pa, t + 1);
                    const Location nb = position_at(pb, t + 1);
                    if (na == lb && nb == la && na != la) {
                        report.violations.push_back(
                            {ViolationKind::EdgeConflict, t + 1, a, b, na});
                    }
                }
            }
        }
    }
    return report;
}

}  // namespace btpg
