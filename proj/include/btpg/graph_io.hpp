#pragma once

#include <string>

#include "btpg/btpg.hpp"
#include "btpg/plan.hpp"

namespace btpg {

// Self-contained build artifact: the graph, the map it lives on, the
// anytime log, and build statistics.
struct GraphFile {
    std::string algo;  // "tpg" | "btpg-n" | "btpg-o"
    GridMap map;
    Btpg graph;
    AnytimeLog log;
    BuildStats stats;
};

std::string graph_to_json(const GraphFile& file);
GraphFile graph_from_json(const std::string& text);

}  // namespace btpg
