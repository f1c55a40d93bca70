#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "btpg/plan.hpp"

namespace btpg {

struct ParseError : std::runtime_error {
    ParseError(const std::string& message, int line = -1)
        : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + message
                                       : message),
          line(line) {}

    int line;
};

// MovingAI .map text: "type octile / height H / width W / map" header
// followed by H rows of W terrain characters. '.' and 'G' are free,
// '@', 'O', 'T', 'S', 'W' are blocked.
GridMap load_map(const std::string& text);

struct ScenarioEntry {
    Location start;
    Location goal;
};

// MovingAI .scen text: optional "version" line, then whitespace-separated
// rows whose fields 5-8 are start-x, start-y, goal-x, goal-y.
std::vector<ScenarioEntry> load_scenario(const std::string& text, const GridMap& map);

// {"width":W,"height":H,"blocked":[[x,y],...],"paths":[{"agent":i,"steps":[[x,y],...]},...]}
std::string plan_to_json(const MapfPlan& plan);
MapfPlan plan_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace btpg
