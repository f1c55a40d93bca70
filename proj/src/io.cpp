#include "btpg/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace btpg {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

int parse_header_int(const std::string& line, const std::string& key, int lineno) {
    std::istringstream is(line);
    std::string word;
    long long value = -1;
    if (!(is >> word >> value) || word != key || value <= 0) {
        throw ParseError("expected '" + key + " <positive integer>'", lineno);
    }
    return static_cast<int>(value);
}

}  // namespace

GridMap load_map(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;

    auto next_line = [&]() -> bool {
        while (std::getline(is, line)) {
            ++lineno;
            return true;
        }
        return false;
    };

    if (!next_line() || trim(line).rfind("type", 0) != 0) {
        throw ParseError("expected 'type ...' header", lineno);
    }
    if (!next_line()) throw ParseError("missing 'height' header", lineno + 1);
    const int height = parse_header_int(trim(line), "height", lineno);
    if (!next_line()) throw ParseError("missing 'width' header", lineno + 1);
    const int width = parse_header_int(trim(line), "width", lineno);
    if (!next_line() || trim(line) != "map") {
        throw ParseError("expected 'map' header", lineno);
    }

    GridMap map(width, height);
    for (int y = 0; y < height; ++y) {
        if (!next_line()) throw ParseError("map body ends early", lineno + 1);
        std::string row = line;
        if (!row.empty() && row.back() == '\r') row.pop_back();
        if (static_cast<int>(row.size()) < width) {
            throw ParseError("row shorter than declared width", lineno);
        }
        for (int x = 0; x < width; ++x) {
            switch (row[x]) {
                case '.':
                case 'G':
                    break;
                case '@':
                case 'O':
                case 'T':
                case 'S':
                case 'W':
                    map.set_blocked({x, y});
                    break;
                default:
                    throw ParseError(std::string("unknown terrain character '") + row[x] + "'",
                                     lineno);
            }
        }
    }
    return map;
}

std::vector<ScenarioEntry> load_scenario(const std::string& text, const GridMap& map) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    std::vector<ScenarioEntry> entries;

    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.rfind("version", 0) == 0) continue;

        std::istringstream row(t);
        int bucket = 0;
        std::string map_name;
        int map_w = 0, map_h = 0;
        ScenarioEntry e;
        if (!(row >> bucket >> map_name >> map_w >> map_h >> e.start.x >> e.start.y >>
              e.goal.x >> e.goal.y)) {
            throw ParseError("malformed scenario row", lineno);
        }
        if (!map.in_bounds(e.start) || !map.in_bounds(e.goal)) {
            throw ParseError("scenario endpoint outside the map", lineno);
        }
        if (map.blocked(e.start) || map.blocked(e.goal)) {
            throw ParseError("scenario endpoint on a blocked cell", lineno);
        }
        entries.push_back(e);
    }
    return entries;
}

std::string plan_to_json(const MapfPlan& plan) {
    json j;
    j["width"] = plan.map.width();
    j["height"] = plan.map.height();
    json blocked = json::array();
    for (const Location& l : plan.map.blocked_cells()) {
        blocked.push_back({l.x, l.y});
    }
    j["blocked"] = std::move(blocked);
    json paths = json::array();
    for (const Path& p : plan.paths) {
        json steps = json::array();
        for (const Location& l : p.steps) steps.push_back({l.x, l.y});
        paths.push_back({{"agent", p.agent}, {"steps", std::move(steps)}});
    }
    j["paths"] = std::move(paths);
    return j.dump();
}

MapfPlan plan_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }

    auto require = [&](const json& obj, const char* field) -> const json& {
        if (!obj.contains(field)) {
            throw ParseError(std::string("missing field '") + field + "'");
        }
        return obj.at(field);
    };
    auto as_location = [](const json& cell, const char* field) -> Location {
        if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number_integer() ||
            !cell[1].is_number_integer()) {
            throw ParseError(std::string("field '") + field + "' must hold [x,y] pairs");
        }
        return {cell[0].get<int>(), cell[1].get<int>()};
    };

    const json& jw = require(j, "width");
    const json& jh = require(j, "height");
    if (!jw.is_number_integer() || !jh.is_number_integer() || jw.get<int>() <= 0 ||
        jh.get<int>() <= 0) {
        throw ParseError("fields 'width'/'height' must be positive integers");
    }

    MapfPlan plan;
    plan.map = GridMap(jw.get<int>(), jh.get<int>());
    for (const json& cell : require(j, "blocked")) {
        const Location l = as_location(cell, "blocked");
        if (!plan.map.in_bounds(l)) {
            throw ParseError("field 'blocked' lists a cell outside the map");
        }
        plan.map.set_blocked(l);
    }

    const json& jpaths = require(j, "paths");
    if (!jpaths.is_array() || jpaths.empty()) {
        throw ParseError("field 'paths' must be a non-empty array: no agents");
    }
    for (const json& jp : jpaths) {
        Path p;
        const json& jagent = require(jp, "agent");
        if (!jagent.is_number_integer()) throw ParseError("field 'agent' must be an integer");
        p.agent = jagent.get<int>();
        const json& jsteps = require(jp, "steps");
        if (!jsteps.is_array() || jsteps.empty()) {
            throw ParseError("field 'steps' must be a non-empty array");
        }
        for (const json& cell : jsteps) p.steps.push_back(as_location(cell, "steps"));
        for (std::size_t t = 0; t < p.steps.size(); ++t) {
            if (!plan.map.in_bounds(p.steps[t])) {
                throw ParseError("field 'steps' leaves the map (agent " +
                                 std::to_string(p.agent) + ")");
            }
            if (t > 0 && !adjacent_or_same(p.steps[t - 1], p.steps[t])) {
                throw ParseError("field 'steps' has non-adjacent consecutive steps (agent " +
                                 std::to_string(p.agent) + ")");
            }
        }
        plan.paths.push_back(std::move(p));
    }
    return plan;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot write file: " + path);
    f << content;
}

}  // namespace btpg
