#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace btpg {

struct Location {
    int x = 0;
    int y = 0;

    friend bool operator==(const Location&, const Location&) = default;
    friend auto operator<=>(const Location&, const Location&) = default;
};

// 4-adjacent (Manhattan distance 1) or identical.
bool adjacent_or_same(Location a, Location b);

// 4-connected grid. Origin is the top-left cell, x indexes columns
// and y indexes rows (MovingAI convention).
class GridMap {
public:
    GridMap() = default;
    GridMap(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }

    bool in_bounds(Location l) const {
        return l.x >= 0 && l.x < width_ && l.y >= 0 && l.y < height_;
    }
    bool blocked(Location l) const { return cells_[idx(l)] != 0; }
    bool passable(Location l) const { return in_bounds(l) && !blocked(l); }

    void set_blocked(Location l, bool value = true);

    std::vector<Location> blocked_cells() const;  // row-major order
    std::vector<Location> free_cells() const;     // row-major order

    friend bool operator==(const GridMap&, const GridMap&) = default;

private:
    std::size_t idx(Location l) const {
        return static_cast<std::size_t>(l.y) * width_ + l.x;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> cells_;
};

// Timed path of one agent. steps[t] is the location at timestep t.
struct Path {
    int agent = 0;
    std::vector<Location> steps;

    friend bool operator==(const Path&, const Path&) = default;
};

// Timestep at which the path settles on its final location (trailing
// waits trimmed). A single-step path has duration 0.
int path_duration(const Path& path);

struct MapfPlan {
    GridMap map;
    std::vector<Path> paths;

    int num_agents() const { return static_cast<int>(paths.size()); }
    int makespan() const;  // longest path length minus one

    friend bool operator==(const MapfPlan&, const MapfPlan&) = default;
};

enum class ViolationKind {
    EmptyPlan,
    EmptyPath,
    OutOfBounds,
    BlockedCell,
    NonAdjacentStep,
    VertexConflict,
    EdgeConflict,
};

struct Violation {
    ViolationKind kind{};
    int timestep = -1;
    int agent_a = -1;
    int agent_b = -1;  // -1 when only one agent is involved
    Location where{};
};

std::string describe(const Violation& v);

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

// Checks structural legality (bounds, blocked cells, 4-adjacency) and
// conflict freeness (vertex and edge conflicts, with agents resting at
// their final location forever). Following is permitted and never flagged.
ValidationReport validate_plan(const MapfPlan& plan);

// Position of an agent at timestep t, resting at the final location
// once the path is exhausted.
Location position_at(const Path& path, int t);

}  // namespace btpg
