#include "delaycons/config.hpp"

#include "delaycons/errors.hpp"
#include "delaycons/io.hpp"

#include <set>

namespace delaycons {

nlohmann::json config_to_json(const ExperimentConfig& c) {
    return {{"input", c.input},
            {"graph_type", c.graph_type},
            {"n_nodes", c.n_nodes},
            {"degree", c.degree},
            {"clusters", c.clusters},
            {"p_intra", c.p_intra},
            {"p_inter", c.p_inter},
            {"seed", c.seed},
            {"delay", c.delay},
            {"strategies", c.strategies},
            {"include_complete", c.include_complete},
            {"csv_out", c.csv_out},
            {"summary_out", c.summary_out}};
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("config must be a JSON object");
    static const std::set<std::string> known = {"input",   "graph_type", "n_nodes", "degree",     "clusters",
                                                "p_intra", "p_inter",    "seed",    "delay",      "strategies",
                                                "include_complete",      "csv_out", "summary_out"};
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) throw InputError("unknown config key '" + key + "'");
        if (value.is_object()) throw InputError("config key '" + key + "' must not be nested");
    }
    ExperimentConfig c;
    try {
        auto take = [&](const char* key, auto& field) {
            if (j.contains(key)) j.at(key).get_to(field);
        };
        take("input", c.input);
        take("graph_type", c.graph_type);
        take("n_nodes", c.n_nodes);
        take("degree", c.degree);
        take("clusters", c.clusters);
        take("p_intra", c.p_intra);
        take("p_inter", c.p_inter);
        take("seed", c.seed);
        take("delay", c.delay);
        take("strategies", c.strategies);
        take("include_complete", c.include_complete);
        take("csv_out", c.csv_out);
        take("summary_out", c.summary_out);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("bad config value: ") + e.what());
    }
    return c;
}

Topology generate_graph(const ExperimentConfig& c) {
    const auto& t = c.graph_type;
    if (t == "regular") return gen_regular(c.n_nodes, c.degree, c.seed);
    if (t == "ring") return ring_graph(c.n_nodes);
    if (t == "path") return path_graph(c.n_nodes);
    if (t == "complete") return complete_graph(c.n_nodes);
    if (t == "star") return star_graph(c.n_nodes);
    if (t == "clustered") {
        ClusterParams p = c.clusters.empty() ? ClusterParams::defaults_for(c.n_nodes) : ClusterParams{};
        if (!c.clusters.empty()) p.cluster_sizes = c.clusters;
        p.p_intra = c.p_intra;
        p.p_inter = c.p_inter;
        return gen_clustered_random(c.n_nodes, p, c.seed);
    }
    throw InputError("unknown graph type '" + t + "'");
}

Topology load_base_graph(const ExperimentConfig& c) {
    return c.input.empty() ? generate_graph(c) : io::read_edge_list_file(c.input);
}

std::string describe_base(const ExperimentConfig& c) {
    if (!c.input.empty()) return "file:" + c.input;
    std::string d = c.graph_type + ":n=" + std::to_string(c.n_nodes);
    if (c.graph_type == "regular") d += ",degree=" + std::to_string(c.degree);
    if (c.graph_type == "clustered") {
        d += ",p_intra=" + io::format_double(c.p_intra) + ",p_inter=" + io::format_double(c.p_inter);
    }
    return d;
}

std::vector<Strategy> parse_strategies(const std::vector<std::string>& names) {
    std::vector<Strategy> out;
    for (const auto& name : names) {
        if (name == "all") {
            for (Strategy s : kAllStrategies) out.push_back(s);
            continue;
        }
        auto s = parse_strategy(name);
        if (!s) throw InputError("unknown strategy '" + name + "'");
        out.push_back(*s);
    }
    if (out.empty()) throw InputError("no strategies selected");
    return out;
}

} // namespace delaycons
