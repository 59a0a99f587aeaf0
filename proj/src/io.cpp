#include "delaycons/io.hpp"

#include "delaycons/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace delaycons::io {

namespace {

int parse_int(const std::string& token, int line_no) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw InputError("edge list line " + std::to_string(line_no) + ": bad integer '" + token + "'");
    }
    return value;
}

} // namespace

Topology read_edge_list(std::istream& in) {
    std::string line;
    int line_no = 0;
    int n_nodes = -1;
    std::vector<Edge> edges;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string t; fields >> t;) tokens.push_back(t);
        if (tokens.empty()) continue;
        if (n_nodes < 0) {
            if (tokens.size() != 2 || tokens[0] != "N") {
                throw InputError("edge list must start with 'N <n_nodes>'");
            }
            n_nodes = parse_int(tokens[1], line_no);
            continue;
        }
        if (tokens.size() != 2) {
            throw InputError("edge list line " + std::to_string(line_no) + ": expected two node indices");
        }
        edges.push_back({parse_int(tokens[0], line_no), parse_int(tokens[1], line_no)});
    }
    if (n_nodes < 0) throw InputError("edge list is empty");
    return {n_nodes, std::move(edges)};
}

Topology read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open edge list " + path);
    return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Topology& g) {
    out << "N " << g.n_nodes() << '\n';
    for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_edge_list_file(const std::string& path, const Topology& g) {
    std::ostringstream s;
    write_edge_list(s, g);
    write_text_file(path, s.str());
}

nlohmann::json gain_to_json(const GainMatrix& k) {
    nlohmann::json j;
    j["n"] = k.size();
    auto edges = nlohmann::json::array();
    for (const auto& e : k.pattern().edges()) edges.push_back({e.u, e.v});
    j["pattern_edges"] = std::move(edges);
    j["weights"] = std::vector<double>(k.weights().begin(), k.weights().end());
    j["diagonal"] = k.diagonal();
    return j;
}

GainMatrix gain_from_json(const nlohmann::json& j) {
    try {
        const int n = j.at("n").get<int>();
        std::vector<Edge> edges;
        for (const auto& pair : j.at("pattern_edges")) {
            if (!pair.is_array() || pair.size() != 2) throw InputError("pattern_edges entries must be [i, j] pairs");
            edges.push_back({pair[0].get<int>(), pair[1].get<int>()});
        }
        std::vector<Edge> order = edges;
        Topology pattern(n, std::move(edges));
        auto weights = j.at("weights").get<std::vector<double>>();
        if (weights.size() != order.size()) throw InputError("weights and pattern_edges differ in length");
        // Topology sorts its edges; carry the weights along.
        std::vector<double> sorted(weights.size());
        auto canon = pattern.edges();
        for (std::size_t e = 0; e < order.size(); ++e) {
            Edge key{std::min(order[e].u, order[e].v), std::max(order[e].u, order[e].v)};
            auto it = std::lower_bound(canon.begin(), canon.end(), key);
            sorted[static_cast<std::size_t>(it - canon.begin())] = weights[e];
        }
        GainMatrix k(std::move(pattern), std::move(sorted));
        if (j.contains("diagonal")) {
            auto diag = j.at("diagonal").get<std::vector<double>>();
            auto expect = k.diagonal();
            if (diag.size() != expect.size()) throw InputError("diagonal has the wrong length");
            for (std::size_t i = 0; i < diag.size(); ++i) {
                if (std::abs(diag[i] - expect[i]) > 1e-12 * std::max(1.0, std::abs(expect[i]))) {
                    throw InputError("diagonal entry " + std::to_string(i) + " does not cancel its row");
                }
            }
        }
        return k;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed gain matrix JSON: ") + e.what());
    }
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return {buf, ptr};
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + '"';
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << kSweepCsvHeader << '\n';
    for (const auto& r : result.reports) {
        out << r.hops << ',' << r.tau << ',' << csv_field(std::string(to_string(r.strategy))) << ','
            << format_double(r.scale) << ',' << format_double(r.lambda2) << ',' << format_double(r.lambda_max)
            << ',' << format_double(r.ubar) << ',' << (r.stable ? "true" : "false") << ','
            << format_double(r.rate) << '\n';
    }
}

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream s;
    write_sweep_csv(s, result);
    return s.str();
}

nlohmann::json report_to_json(const RateReport& r) {
    return {{"n", r.hops},           {"tau", r.tau},         {"strategy", std::string(to_string(r.strategy))},
            {"gain_or_beta", r.scale}, {"lambda2", r.lambda2}, {"lambdaN", r.lambda_max},
            {"ubar", r.ubar},        {"stable", r.stable},   {"rate", r.rate}};
}

nlohmann::json sweep_summary(const SweepResult& result, const std::string& delay_description) {
    nlohmann::json j;
    j["base"] = result.base_descriptor;
    j["seed"] = result.seed;
    j["delay"] = delay_description;
    j["cells"] = result.reports.size();
    auto optimal = nlohmann::json::object();
    for (std::size_t s = 0; s < result.strategies.size(); ++s) {
        const auto* best = result.best_report(s);
        optimal[std::string(to_string(result.strategies[s]))] = best ? report_to_json(*best) : nlohmann::json();
    }
    j["optimal"] = std::move(optimal);
    return j;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << 'k';
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
    for (std::size_t i = 0; i < n; ++i) out << ",x_" << i;
    out << '\n';
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        out << k;
        for (double v : traj.states[k]) out << ',' << format_double(v);
        out << '\n';
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
    if (!out) throw InputError("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace delaycons::io
