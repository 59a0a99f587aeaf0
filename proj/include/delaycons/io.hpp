#pragma once

#include "delaycons/gains.hpp"
#include "delaycons/graph.hpp"
#include "delaycons/sim.hpp"
#include "delaycons/sweep.hpp"

#include <iosfwd>
#include <string>

#include <json.hpp>

namespace delaycons::io {

// Edge list: "N <n_nodes>" then one "i j" line per edge, 0-based, i < j.
Topology read_edge_list(std::istream& in);
Topology read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Topology& g);
void write_edge_list_file(const std::string& path, const Topology& g);

// Gain matrix JSON: {n, pattern_edges, weights, diagonal}. weights[e] is the
// edge weight w_e of pattern_edges[e] (K(u,v) = -w_e); diagonal is checked
// against the weights on load.
nlohmann::json gain_to_json(const GainMatrix& k);
GainMatrix gain_from_json(const nlohmann::json& j);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

/// Quotes a CSV field when it holds a comma, quote or line break.
std::string csv_field(const std::string& text);

inline constexpr const char* kSweepCsvHeader = "n,tau,strategy,gain_or_beta,lambda2,lambdaN,ubar,stable,rate";

void write_sweep_csv(std::ostream& out, const SweepResult& result);
std::string sweep_csv(const SweepResult& result);
nlohmann::json sweep_summary(const SweepResult& result, const std::string& delay_description);
nlohmann::json report_to_json(const RateReport& r);

/// "k,x_0,...,x_{N-1}" then one row per time step.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Writes text to a file, throwing InputError when it cannot be opened.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

} // namespace delaycons::io
