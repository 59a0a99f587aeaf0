// delaycons: generate architectures, design gains, sweep hop counts and
// simulate delayed consensus from the command line.

#include "delaycons/config.hpp"
#include "delaycons/errors.hpp"
#include "delaycons/gains.hpp"
#include "delaycons/graph.hpp"
#include "delaycons/io.hpp"
#include "delaycons/sim.hpp"
#include "delaycons/spectral.hpp"
#include "delaycons/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace delaycons;
using nlohmann::json;

enum ExitCode : int { kOk = 0, kUsage = 2, kInput = 3, kNumerical = 4 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void print_graph_summary(const Topology& g) {
    std::cout << "N " << g.n_nodes() << '\n'
              << "edges " << g.n_edges() << '\n'
              << "max_degree " << g.max_degree() << '\n'
              << "diameter " << (g.is_connected() ? std::to_string(max_hop(g)) : "inf") << '\n';
}

void print_design(const GainDesign& d) {
    std::cout << "strategy " << to_string(d.strategy) << '\n'
              << "tau " << d.tau << '\n'
              << "gain_or_beta " << io::format_double(d.scale) << '\n'
              << "lambda2 " << io::format_double(d.lambda2) << '\n'
              << "lambdaN " << io::format_double(d.lambda_max) << '\n'
              << "ubar " << io::format_double(d.ubar) << '\n'
              << "rate " << io::format_double(d.rate) << '\n'
              << "stable " << (d.stable ? "true" : "false") << '\n';
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        io::write_text_file(path, text);
    }
}

struct GraphFlags {
    std::string type = "regular";
    int n = 100;
    int degree = 3;
    std::uint64_t seed = 1;
    std::vector<int> clusters;
    double p_intra = 0.3;
    double p_inter = 0.005;
};

struct Options {
    int threads = 0;
    GraphFlags graph;
    std::string out;

    // closure / design / rate
    std::string in;
    int hops = 1;
    std::optional<int> tau;
    std::string delay;
    std::string strategy = "multi-opt";
    std::string gains;
    std::optional<double> lambda;

    // sweep
    std::string config;
    std::string save_config;
    std::string strategies;
    bool no_complete = false;
    std::string summary;

    // simulate
    int horizon = 200;
    std::optional<int> burn_in;
    std::string meta;
    bool allow_unstable = false;
};

void add_graph_flags(CLI::App* cmd, GraphFlags& g) {
    cmd->add_option("--type", g.type, "regular | ring | path | complete | star | clustered")->capture_default_str();
    cmd->add_option("--n", g.n, "node count")->capture_default_str();
    cmd->add_option("--degree", g.degree, "degree for --type regular")->capture_default_str();
    cmd->add_option("--seed", g.seed, "generator seed")->capture_default_str();
    cmd->add_option("--clusters", g.clusters, "cluster sizes for --type clustered")->delimiter(',');
    cmd->add_option("--p-intra", g.p_intra, "intra-cluster edge probability")->capture_default_str();
    cmd->add_option("--p-inter", g.p_inter, "inter-cluster edge probability")->capture_default_str();
}

ExperimentConfig graph_config(const GraphFlags& g) {
    ExperimentConfig c;
    c.graph_type = g.type;
    c.n_nodes = g.n;
    c.degree = g.degree;
    c.seed = g.seed;
    c.clusters = g.clusters;
    c.p_intra = g.p_intra;
    c.p_inter = g.p_inter;
    return c;
}

int resolve_tau(const Options& o) {
    if (o.tau && !o.delay.empty()) throw UsageError("give either --tau or --delay, not both");
    if (o.tau) {
        if (*o.tau < 0) throw InputError("--tau must be >= 0");
        return *o.tau;
    }
    if (!o.delay.empty()) return DelayModel::parse(o.delay).tau(o.hops);
    throw UsageError("one of --tau or --delay is required");
}

int cmd_graph(const Options& o) {
    Topology g = generate_graph(graph_config(o.graph));
    if (!o.out.empty()) io::write_edge_list_file(o.out, g);
    print_graph_summary(g);
    return kOk;
}

int cmd_closure(const Options& o) {
    Topology g = hop_closure(io::read_edge_list_file(o.in), o.hops);
    if (!o.out.empty()) io::write_edge_list_file(o.out, g);
    print_graph_summary(g);
    return kOk;
}

int cmd_design(const Options& o) {
    auto strategy = parse_strategy(o.strategy);
    if (!strategy) throw UsageError("unknown strategy '" + o.strategy + "'");
    const int tau = resolve_tau(o);
    Topology closure = hop_closure(io::read_edge_list_file(o.in), o.hops);
    GainDesign d = design_gains(closure, tau, *strategy);
    json j = io::gain_to_json(d.matrix);
    j["tau"] = d.tau;
    j["strategy"] = std::string(to_string(d.strategy));
    j["gain_or_beta"] = d.scale;
    j["rate"] = d.rate;
    j["stable"] = d.stable;
    if (!o.out.empty()) io::write_text_file(o.out, j.dump(2) + "\n");
    print_design(d);
    return kOk;
}

json load_json(const std::string& path) {
    try {
        return json::parse(io::read_text_file(path));
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

int tau_from(const Options& o, const json& gains_json) {
    if (o.tau) return *o.tau;
    if (gains_json.contains("tau")) return gains_json.at("tau").get<int>();
    throw UsageError("--tau is required when the gain file carries no delay");
}

int cmd_rate(const Options& o) {
    if (o.lambda) {
        if (!o.tau) throw UsageError("--lambda needs --tau");
        const int tau = *o.tau;
        std::cout << "rho " << io::format_double(rho(*o.lambda, tau)) << '\n'
                  << "ubar " << io::format_double(stability_bound(tau)) << '\n'
                  << "lambda_th " << io::format_double(lambda_th(tau)) << '\n';
        return kOk;
    }
    if (o.gains.empty()) throw UsageError("rate needs --gains or --lambda");
    json j = load_json(o.gains);
    GainMatrix k = io::gain_from_json(j);
    const int tau = tau_from(o, j);
    Spectrum spec = gain_spectrum(k);
    auto rest = nonzero_part(spec);
    std::cout << "tau " << tau << '\n'
              << "lambda2 " << io::format_double(rest.front()) << '\n'
              << "lambdaN " << io::format_double(rest.back()) << '\n'
              << "ubar " << io::format_double(stability_bound(tau)) << '\n'
              << "rate " << io::format_double(conv_rate(spec, tau)) << '\n'
              << "stable " << (is_stable(spec, tau) ? "true" : "false") << '\n';
    return kOk;
}

int cmd_sweep(const Options& o, CLI::App* cmd) {
    ExperimentConfig c;
    if (!o.config.empty()) c = config_from_json(load_json(o.config));
    auto given = [&](const char* flag) { return cmd->get_option(flag)->count() > 0; };
    if (given("--in")) c.input = o.in;
    if (given("--type")) c.graph_type = o.graph.type;
    if (given("--n")) c.n_nodes = o.graph.n;
    if (given("--degree")) c.degree = o.graph.degree;
    if (given("--seed")) c.seed = o.graph.seed;
    if (given("--clusters")) c.clusters = o.graph.clusters;
    if (given("--p-intra")) c.p_intra = o.graph.p_intra;
    if (given("--p-inter")) c.p_inter = o.graph.p_inter;
    if (given("--delay")) c.delay = o.delay;
    if (given("--strategies")) {
        c.strategies.clear();
        std::stringstream list(o.strategies);
        for (std::string item; std::getline(list, item, ',');) {
            if (!item.empty()) c.strategies.push_back(item);
        }
    }
    if (given("--no-complete")) c.include_complete = !o.no_complete;
    if (given("--out")) c.csv_out = o.out;
    if (given("--summary")) c.summary_out = o.summary;
    if (!o.save_config.empty()) io::write_text_file(o.save_config, config_to_json(c).dump(2) + "\n");

    const auto strategies = parse_strategies(c.strategies);
    const DelayModel delays = DelayModel::parse(c.delay);
    const Topology base = load_base_graph(c);
    if (!base.is_connected()) throw InputError("base graph is disconnected");

    SweepOptions opts;
    opts.include_complete = c.include_complete;
    opts.threads = o.threads;
    SweepResult result = sweep(base, delays, strategies, opts);
    result.base_descriptor = describe_base(c);
    result.seed = c.seed;

    emit(c.csv_out, io::sweep_csv(result));
    const std::string summary = io::sweep_summary(result, delays.describe()).dump(2) + "\n";
    if (!c.summary_out.empty()) {
        io::write_text_file(c.summary_out, summary);
    } else if (!c.csv_out.empty() && c.csv_out != "-") {
        std::cout << summary;
    }
    return kOk;
}

int cmd_simulate(const Options& o) {
    if (o.gains.empty()) throw UsageError("simulate needs --gains");
    json j = load_json(o.gains);
    GainMatrix k = io::gain_from_json(j);
    const int tau = tau_from(o, j);
    if (o.horizon < tau + 2) {
        throw UsageError("--horizon must be at least tau + 2 = " + std::to_string(tau + 2));
    }
    Spectrum spec = gain_spectrum(k);
    const bool stable = is_stable(spec, tau);
    if (!stable && !o.allow_unstable) {
        throw InputError("gain matrix is unstable for tau=" + std::to_string(tau) + " (pass --allow-unstable)");
    }
    const double predicted = conv_rate(spec, tau);
    const std::uint64_t seed = o.graph.seed;
    auto x0 = generic_initial_state(k, seed);
    Trajectory traj = simulate(k, tau, x0, o.horizon);
    const int burn_in = o.burn_in ? *o.burn_in : o.horizon / 4;

    json meta;
    meta["n"] = k.size();
    meta["tau"] = tau;
    meta["strategy"] = j.value("strategy", std::string("custom"));
    meta["horizon"] = o.horizon;
    meta["seed"] = seed;
    meta["burn_in"] = burn_in;
    meta["stable"] = stable;
    meta["predicted_rate"] = predicted;
    const auto dis = traj.disagreement();
    meta["initial_disagreement"] = dis.front();
    meta["final_disagreement"] = dis.back();
    meta["diverged"] = !(dis.back() <= dis.front());
    try {
        meta["empirical_rate"] = empirical_rate(traj, burn_in);
    } catch (const InsufficientSignal& e) {
        meta["empirical_rate"] = nullptr;
        meta["note"] = e.what();
    }

    std::ostringstream csv;
    io::write_trajectory_csv(csv, traj);
    if (!o.out.empty()) io::write_text_file(o.out, csv.str());
    const std::string meta_text = meta.dump(2) + "\n";
    if (!o.meta.empty()) io::write_text_file(o.meta, meta_text);
    std::cout << meta_text;
    return kOk;
}

int default_threads() {
    if (const char* env = std::getenv("DELAYCONS_THREADS")) {
        try {
            int t = std::stoi(env);
            if (t > 0) return t;
        } catch (const std::exception&) {
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delayed consensus: architectures, gain design and convergence-rate sweeps"};
    app.require_subcommand(1);
    Options o;
    o.threads = default_threads();
    app.add_option("--threads", o.threads, "worker threads (default: $DELAYCONS_THREADS or all cores)");

    auto* graph = app.add_subcommand("graph", "generate a base graph");
    add_graph_flags(graph, o.graph);
    graph->add_option("--out", o.out, "edge-list output path");

    auto* closure = app.add_subcommand("closure", "n-hop closure of an edge list");
    closure->add_option("--in", o.in, "input edge list")->required();
    closure->add_option("--hops", o.hops, "hop count n >= 1")->required();
    closure->add_option("--out", o.out, "edge-list output path");

    auto* design = app.add_subcommand("design", "design feedback gains for one architecture");
    design->add_option("--in", o.in, "base edge list")->required();
    design->add_option("--hops", o.hops, "hop count n")->capture_default_str();
    design->add_option("--tau", o.tau, "delay in steps");
    design->add_option("--delay", o.delay, "linear | quadratic | table:<path>");
    design->add_option("--strategy", o.strategy, "uniform-std | uniform-opt | multi-opt")->capture_default_str();
    design->add_option("--out", o.out, "gain JSON output path");

    auto* rate = app.add_subcommand("rate", "convergence rate of a gain matrix or a single eigenvalue");
    rate->add_option("--gains", o.gains, "gain JSON");
    rate->add_option("--tau", o.tau, "delay in steps");
    rate->add_option("--lambda", o.lambda, "single gain eigenvalue");

    auto* sweep_cmd = app.add_subcommand("sweep", "sweep hop counts under a delay model");
    add_graph_flags(sweep_cmd, o.graph);
    sweep_cmd->add_option("--in", o.in, "base edge list (overrides the generator)");
    sweep_cmd->add_option("--config", o.config, "experiment config JSON; flags override it");
    sweep_cmd->add_option("--save-config", o.save_config, "write the resolved config JSON");
    sweep_cmd->add_option("--delay", o.delay, "linear | quadratic | table:<path>");
    sweep_cmd->add_option("--strategies", o.strategies, "comma list or 'all'");
    sweep_cmd->add_flag("--no-complete", o.no_complete, "stop before the complete graph");
    sweep_cmd->add_option("--out", o.out, "CSV output path (default stdout)");
    sweep_cmd->add_option("--summary", o.summary, "summary JSON output path");

    auto* sim = app.add_subcommand("simulate", "simulate the delayed dynamics for a gain matrix");
    sim->add_option("--gains", o.gains, "gain JSON")->required();
    sim->add_option("--tau", o.tau, "delay in steps (default: from the gain file)");
    sim->add_option("--horizon", o.horizon, "number of steps")->capture_default_str();
    sim->add_option("--seed", o.graph.seed, "initial-state seed")->capture_default_str();
    sim->add_option("--burn-in", o.burn_in, "first step of the rate fit (default horizon/4)");
    sim->add_option("--out", o.out, "trajectory CSV path");
    sim->add_option("--meta", o.meta, "metadata JSON path");
    sim->add_flag("--allow-unstable", o.allow_unstable, "run even if the design is unstable");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    if (o.threads > 0) omp_set_num_threads(o.threads);

    try {
        if (graph->parsed()) return cmd_graph(o);
        if (closure->parsed()) return cmd_closure(o);
        if (design->parsed()) return cmd_design(o);
        if (rate->parsed()) return cmd_rate(o);
        if (sweep_cmd->parsed()) return cmd_sweep(o, sweep_cmd);
        if (sim->parsed()) return cmd_simulate(o);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const OptimizerError& e) {
        std::cerr << "numerical failure: " << e.what() << " (best iterate lambda2=" << e.lambda2
                  << " lambdaN=" << e.lambda_max << ")\n";
        return kNumerical;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const InputError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kInput;
    }
    return kUsage;
}
