#include "btpg/graph_io.hpp"

#include <json.hpp>

#include <algorithm>

#include "btpg/io.hpp"

namespace btpg {

namespace {

using nlohmann::json;

json edge_to_json(const Type2Edge& e) {
    return {{"from", {e.from.agent, e.from.index}},
            {"to", {e.to.agent, e.to.index}},
            {"loc", {e.conflict.x, e.conflict.y}}};
}

Type2Edge edge_from_json(const json& j) {
    Type2Edge e;
    e.from = {j.at("from")[0].get<int>(), j.at("from")[1].get<int>()};
    e.to = {j.at("to")[0].get<int>(), j.at("to")[1].get<int>()};
    e.conflict = {j.at("loc")[0].get<int>(), j.at("loc")[1].get<int>()};
    return e;
}

}  // namespace

std::string graph_to_json(const GraphFile& file) {
    json j;
    j["algo"] = file.algo;

    json blocked = json::array();
    for (const Location& l : file.map.blocked_cells()) blocked.push_back({l.x, l.y});
    j["map"] = {{"width", file.map.width()},
                {"height", file.map.height()},
                {"blocked", std::move(blocked)}};

    json agents = json::array();
    const Tpg& base = file.graph.base;
    for (int a = 0; a < base.num_agents(); ++a) {
        json states = json::array();
        for (const Location& l : base.chains[a]) states.push_back({l.x, l.y});
        agents.push_back({{"agent", a},
                          {"states", std::move(states)},
                          {"entry_times", base.entry_times[a]}});
    }
    j["agents"] = std::move(agents);

    json fixed = json::array();
    for (const Type2Edge& e : file.graph.fixed) fixed.push_back(edge_to_json(e));
    j["fixed"] = std::move(fixed);

    json pairs = json::array();
    for (const BidirectionalPair& p : file.graph.pairs) {
        pairs.push_back(
            {{"forward", edge_to_json(p.forward)}, {"reversed", edge_to_json(p.reversed)}});
    }
    j["pairs"] = std::move(pairs);

    json groups = json::array();
    for (const EdgeGroup& g : file.graph.groups) {
        json edges = json::array();
        for (const Type2Edge& e : g.edges) edges.push_back(edge_to_json(e));
        groups.push_back({{"kind", g.kind == GroupKind::SameDirection ? "same" : "opposite"},
                          {"edges", std::move(edges)}});
    }
    j["groups"] = std::move(groups);

    json anytime = json::array();
    for (const AnytimeSample& s : file.log.samples) {
        anytime.push_back({{"t", s.t}, {"pairs", s.pairs}});
    }
    j["anytime"] = std::move(anytime);

    j["stats"] = {{"type2_edges", file.stats.type2_edges},
                  {"singleton_edges", file.stats.singleton_edges},
                  {"pairs_found", file.graph.num_pairs()},
                  {"build_seconds", file.stats.seconds},
                  {"passes", file.stats.passes},
                  {"timed_out", file.stats.timed_out}};
    return j.dump();
}

GraphFile graph_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid graph JSON: ") + e.what());
    }
    try {
        GraphFile file;
        file.algo = j.at("algo").get<std::string>();

        const json& jm = j.at("map");
        file.map = GridMap(jm.at("width").get<int>(), jm.at("height").get<int>());
        for (const json& cell : jm.at("blocked")) {
            file.map.set_blocked({cell[0].get<int>(), cell[1].get<int>()});
        }

        Tpg& base = file.graph.base;
        const json& jagents = j.at("agents");
        base.chains.resize(jagents.size());
        base.entry_times.resize(jagents.size());
        for (const json& ja : jagents) {
            const int a = ja.at("agent").get<int>();
            for (const json& cell : ja.at("states")) {
                base.chains[a].push_back({cell[0].get<int>(), cell[1].get<int>()});
            }
            base.entry_times[a] = ja.at("entry_times").get<std::vector<int>>();
        }

        for (const json& je : j.at("fixed")) file.graph.fixed.push_back(edge_from_json(je));
        for (const json& jp : j.at("pairs")) {
            file.graph.pairs.push_back({edge_from_json(jp.at("forward")),
                                        edge_from_json(jp.at("reversed"))});
        }
        for (const json& jg : j.at("groups")) {
            EdgeGroup g;
            g.kind = jg.at("kind").get<std::string>() == "same" ? GroupKind::SameDirection
                                                                : GroupKind::OppositeDirection;
            for (const json& je : jg.at("edges")) g.edges.push_back(edge_from_json(je));
            file.graph.groups.push_back(std::move(g));
        }

        base.type2 = file.graph.fixed;
        for (const BidirectionalPair& p : file.graph.pairs) base.type2.push_back(p.forward);
        std::sort(base.type2.begin(), base.type2.end(),
                  [](const Type2Edge& a, const Type2Edge& b) {
                      return std::tie(a.from.agent, a.from.index, a.to.agent, a.to.index) <
                             std::tie(b.from.agent, b.from.index, b.to.agent, b.to.index);
                  });

        for (const json& js : j.at("anytime")) {
            file.log.samples.push_back({js.at("t").get<double>(), js.at("pairs").get<int>()});
        }

        const json& jstats = j.at("stats");
        file.stats.type2_edges = jstats.at("type2_edges").get<int>();
        file.stats.singleton_edges = jstats.at("singleton_edges").get<int>();
        file.stats.seconds = jstats.at("build_seconds").get<double>();
        file.stats.passes = jstats.at("passes").get<int>();
        file.stats.timed_out = jstats.at("timed_out").get<bool>();
        return file;
    } catch (const json::exception& e) {
        throw ParseError(std::string("graph JSON schema error: ") + e.what());
    }
}

}  // namespace btpg
