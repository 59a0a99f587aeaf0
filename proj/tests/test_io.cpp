#include <catch_amalgamated.hpp>

#include "delaycons/config.hpp"
#include "delaycons/errors.hpp"
#include "delaycons/io.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

using namespace delaycons;

TEST_CASE("edge list round trip", "[io]") {
    auto g = gen_regular(20, 3, 4);
    std::stringstream s;
    io::write_edge_list(s, g);
    CHECK(io::read_edge_list(s) == g);

    std::istringstream crlf("N 3\r\n\r\n2 1\r\n0 1\r\n");
    auto parsed = io::read_edge_list(crlf);
    CHECK(parsed == path_graph(3));
}

TEST_CASE("edge list errors", "[io]") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return io::read_edge_list(in);
    };
    CHECK_THROWS_AS(parse(""), InputError);
    CHECK_THROWS_AS(parse("3\n0 1\n"), InputError);
    CHECK_THROWS_AS(parse("N 3\n0 1 2\n"), InputError);
    CHECK_THROWS_AS(parse("N 3\n0 x\n"), InputError);
    CHECK_THROWS_AS(parse("N 3\n0 5\n"), InputError);
    CHECK_THROWS_AS(parse("N 3\n1 1\n"), InputError);
    CHECK_THROWS_AS(io::read_edge_list_file("/nonexistent/graph.txt"), InputError);
}

TEST_CASE("gain matrix JSON", "[io]") {
    GainMatrix k(ring_graph(5), {0.1, -0.2, 0.3, 0.4, 0.5});
    auto j = io::gain_to_json(k);
    auto back = io::gain_from_json(j);
    CHECK(back.pattern() == k.pattern());
    CHECK(std::vector<double>(back.weights().begin(), back.weights().end()) ==
          std::vector<double>(k.weights().begin(), k.weights().end()));

    // Weights follow the listed edge order, whatever it is.
    nlohmann::json shuffled = {{"n", 3}, {"pattern_edges", {{2, 1}, {0, 1}}}, {"weights", {0.7, 0.2}}};
    auto reordered = io::gain_from_json(shuffled);
    CHECK(reordered.dense()(1, 2) == -0.7);
    CHECK(reordered.dense()(0, 1) == -0.2);

    auto bad_diag = j;
    bad_diag["diagonal"][0] = 9.0;
    CHECK_THROWS_AS(io::gain_from_json(bad_diag), InputError);
    auto short_weights = j;
    short_weights["weights"].erase(0);
    CHECK_THROWS_AS(io::gain_from_json(short_weights), InputError);
    CHECK_THROWS_AS(io::gain_from_json(nlohmann::json{{"n", "three"}}), InputError);

    auto extra = j;
    extra["tau"] = 3;
    CHECK(io::gain_from_json(extra).pattern() == k.pattern());
}

TEST_CASE("doubles round trip through text", "[io]") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng) * std::pow(10.0, i % 20 - 10);
        const auto text = io::format_double(v);
        double back = 0.0;
        std::from_chars(text.data(), text.data() + text.size(), back);
        CHECK(back == v);
    }
    CHECK(io::format_double(0.5) == "0.5");
    CHECK(io::format_double(INFINITY) == "inf");
}

TEST_CASE("csv quoting", "[io]") {
    CHECK(io::csv_field("plain") == "plain");
    CHECK(io::csv_field("a,b") == "\"a,b\"");
    CHECK(io::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(io::csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("sweep CSV layout", "[io]") {
    auto r = sweep(ring_graph(6), DelayModel::linear(), {Strategy::UniformStandard, Strategy::UniformOptimal});
    auto csv = io::sweep_csv(r);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "n,tau,strategy,gain_or_beta,lambda2,lambdaN,ubar,stable,rate");
    int rows = 0;
    std::vector<std::string> order;
    while (std::getline(lines, line)) {
        ++rows;
        order.push_back(line.substr(0, line.find(',', line.find(',') + 1)));
        CHECK(std::count(line.begin(), line.end(), ',') == 8);
    }
    CHECK(rows == 6);
    CHECK(order == std::vector<std::string>{"1,1", "1,1", "2,2", "2,2", "3,3", "3,3"});
    CHECK(csv.find("uniform-standard") != std::string::npos);

    auto summary = io::sweep_summary(r, "linear");
    CHECK(summary["cells"] == 6);
    CHECK(summary["optimal"].contains("uniform-optimal"));
}

TEST_CASE("trajectory CSV", "[io]") {
    Trajectory t;
    t.tau = 1;
    t.states = {{1.0, -1.0}, {0.75, -0.75}};
    std::ostringstream out;
    io::write_trajectory_csv(out, t);
    CHECK(out.str() == "k,x_0,x_1\n0,1,-1\n1,0.75,-0.75\n");
}

TEST_CASE("experiment config round trip", "[io][config]") {
    ExperimentConfig c;
    c.graph_type = "clustered";
    c.n_nodes = 40;
    c.clusters = {10, 30};
    c.p_inter = 0.0;
    c.seed = 123456789012345ULL;
    c.delay = "quadratic";
    c.strategies = {"multi-optimal"};
    c.include_complete = false;
    c.csv_out = "out.csv";
    auto j = config_to_json(c);
    CHECK(config_from_json(j) == c);
    CHECK(config_from_json(nlohmann::json::parse(j.dump())) == c);
    CHECK(config_from_json(nlohmann::json::object()) == ExperimentConfig{});

    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"bogus", 1}}), InputError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"seed", {{"a", 1}}}}), InputError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"n_nodes", "many"}}), InputError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::array()), InputError);
}

TEST_CASE("config graph sources and strategies", "[config]") {
    ExperimentConfig c;
    c.n_nodes = 30;
    CHECK(generate_graph(c) == gen_regular(30, 3, 1));
    c.graph_type = "ring";
    CHECK(generate_graph(c) == ring_graph(30));
    c.graph_type = "hexagonal";
    CHECK_THROWS_AS(generate_graph(c), InputError);
    c.graph_type = "regular";
    CHECK(describe_base(c) == "regular:n=30,degree=3");

    CHECK(parse_strategies({"all"}).size() == 3);
    CHECK(parse_strategies({"uniform-opt", "multi-optimal"}) ==
          std::vector<Strategy>{Strategy::UniformOptimal, Strategy::MultiOptimal});
    CHECK_THROWS_AS(parse_strategies({"best"}), InputError);
    CHECK_THROWS_AS(parse_strategies({}), InputError);
}
