#pragma once

#include "delaycons/graph.hpp"
#include "delaycons/sweep.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace delaycons {

/// Reproducible sweep experiment. Stored as flat JSON; every default is
/// written out so a saved file fully determines the run.
struct ExperimentConfig {
    /// Edge-list path; when set it takes precedence over the generator fields.
    std::string input;
    /// regular | ring | path | complete | star | clustered
    std::string graph_type = "regular";
    int n_nodes = 100;
    int degree = 3;
    std::vector<int> clusters;
    double p_intra = 0.3;
    double p_inter = 0.005;
    std::uint64_t seed = 1;
    std::string delay = "linear";
    std::vector<std::string> strategies = {"uniform-standard", "uniform-optimal", "multi-optimal"};
    bool include_complete = true;
    std::string csv_out;
    std::string summary_out;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

nlohmann::json config_to_json(const ExperimentConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Builds the base graph named by the generator fields (ignores `input`).
Topology generate_graph(const ExperimentConfig& c);
/// Reads `input` when set, otherwise generates.
Topology load_base_graph(const ExperimentConfig& c);
/// Human-readable description of the base graph source.
std::string describe_base(const ExperimentConfig& c);

std::vector<Strategy> parse_strategies(const std::vector<std::string>& names);

} // namespace delaycons
