#include "delaycons/graph.hpp"

#include "delaycons/errors.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>
#include <string>

namespace delaycons {

namespace {

constexpr int kMaxAttempts = 1000;

std::mt19937_64 attempt_rng(std::uint64_t seed, int attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(attempt)};
    return std::mt19937_64(seq);
}

} // namespace

Topology::Topology(int n_nodes, std::vector<Edge> edges) : n_nodes_(n_nodes) {
    if (n_nodes <= 0) {
        throw InputError("topology needs at least one node, got " + std::to_string(n_nodes));
    }
    for (auto& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= n_nodes || e.v >= n_nodes) {
            throw InputError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                             ") out of range for " + std::to_string(n_nodes) + " nodes");
        }
        if (e.u == e.v) {
            throw InputError("self-loop at node " + std::to_string(e.u));
        }
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
        throw InputError("duplicate edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ")");
    }
    edges_ = std::move(edges);
    adjacency_.assign(static_cast<std::size_t>(n_nodes), {});
    for (const auto& e : edges_) {
        adjacency_[e.u].push_back(e.v);
        adjacency_[e.v].push_back(e.u);
    }
    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

int Topology::max_degree() const noexcept {
    int d = 0;
    for (const auto& nb : adjacency_) d = std::max(d, static_cast<int>(nb.size()));
    return d;
}

int Topology::min_degree() const noexcept {
    if (adjacency_.empty()) return 0;
    int d = n_nodes_;
    for (const auto& nb : adjacency_) d = std::min(d, static_cast<int>(nb.size()));
    return d;
}

bool Topology::has_edge(int a, int b) const {
    if (a == b || a < 0 || b < 0 || a >= n_nodes_ || b >= n_nodes_) return false;
    const auto& nb = adjacency_[a];
    return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<int> Topology::distances_from(int source) const {
    std::vector<int> dist(static_cast<std::size_t>(n_nodes_), -1);
    std::queue<int> frontier;
    dist[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        int u = frontier.front();
        frontier.pop();
        for (int w : adjacency_[u]) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                frontier.push(w);
            }
        }
    }
    return dist;
}

bool Topology::is_connected() const {
    if (n_nodes_ == 0) return false;
    auto dist = distances_from(0);
    return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

bool Topology::is_complete() const noexcept {
    const auto n = static_cast<std::size_t>(n_nodes_);
    return edges_.size() == n * (n - 1) / 2;
}

Topology path_graph(int n_nodes) {
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n_nodes; ++i) edges.push_back({i, i + 1});
    return {n_nodes, std::move(edges)};
}

Topology ring_graph(int n_nodes) {
    if (n_nodes < 3) throw InputError("ring needs at least 3 nodes");
    std::vector<Edge> edges;
    for (int i = 0; i < n_nodes; ++i) edges.push_back({i, (i + 1) % n_nodes});
    return {n_nodes, std::move(edges)};
}

Topology complete_graph(int n_nodes) {
    std::vector<Edge> edges;
    for (int i = 0; i < n_nodes; ++i)
        for (int j = i + 1; j < n_nodes; ++j) edges.push_back({i, j});
    return {n_nodes, std::move(edges)};
}

Topology star_graph(int n_nodes) {
    std::vector<Edge> edges;
    for (int i = 1; i < n_nodes; ++i) edges.push_back({0, i});
    return {n_nodes, std::move(edges)};
}

Topology hop_closure(const Topology& base, int hops) {
    if (hops < 1) throw InputError("hop count must be >= 1, got " + std::to_string(hops));
    if (!base.is_connected()) throw InputError("hop closure requires a connected base graph");
    if (hops == 1) return base;

    const int n = base.n_nodes();
    std::vector<Edge> edges;
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<int> frontier, next;
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        frontier.assign(1, s);
        for (int depth = 1; depth <= hops && !frontier.empty(); ++depth) {
            next.clear();
            for (int u : frontier) {
                for (int w : base.neighbors(u)) {
                    if (dist[w] >= 0) continue;
                    dist[w] = depth;
                    next.push_back(w);
                    if (w > s) edges.push_back({s, w});
                }
            }
            frontier.swap(next);
        }
    }
    return {n, std::move(edges)};
}

int max_hop(const Topology& base) {
    if (!base.is_connected()) throw InputError("diameter undefined for a disconnected graph");
    int diameter = 0;
    for (int s = 0; s < base.n_nodes(); ++s) {
        auto dist = base.distances_from(s);
        diameter = std::max(diameter, *std::max_element(dist.begin(), dist.end()));
    }
    return diameter;
}

Eigen::MatrixXd laplacian(const Topology& g) {
    const int n = g.n_nodes();
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edges()) {
        lap(e.u, e.v) -= 1.0;
        lap(e.v, e.u) -= 1.0;
        lap(e.u, e.u) += 1.0;
        lap(e.v, e.v) += 1.0;
    }
    return lap;
}

Topology gen_regular(int n_nodes, int degree, std::uint64_t seed) {
    if (n_nodes < 2 || degree < 1 || degree >= n_nodes) {
        throw InputError("regular graph needs 1 <= degree < n_nodes, got n=" + std::to_string(n_nodes) +
                         " degree=" + std::to_string(degree));
    }
    if ((static_cast<long long>(n_nodes) * degree) % 2 != 0) {
        throw InputError("n_nodes * degree must be even");
    }
    if (degree == 1 && n_nodes > 2) {
        throw InputError("a 1-regular graph on more than 2 nodes is never connected");
    }

    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(n_nodes) * degree);
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        auto rng = attempt_rng(seed, attempt);
        stubs.clear();
        for (int i = 0; i < n_nodes; ++i)
            for (int k = 0; k < degree; ++k) stubs.push_back(i);
        std::shuffle(stubs.begin(), stubs.end(), rng);

        std::vector<Edge> edges;
        edges.reserve(stubs.size() / 2);
        bool simple = true;
        for (std::size_t k = 0; k < stubs.size(); k += 2) {
            int a = stubs[k], b = stubs[k + 1];
            if (a == b) {
                simple = false;
                break;
            }
            edges.push_back({std::min(a, b), std::max(a, b)});
        }
        if (!simple) continue;
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;

        Topology g(n_nodes, std::move(edges));
        if (g.is_connected()) return g;
    }
    throw InputError("no simple connected " + std::to_string(degree) + "-regular graph on " +
                     std::to_string(n_nodes) + " nodes after " + std::to_string(kMaxAttempts) + " attempts");
}

ClusterParams ClusterParams::defaults_for(int n_nodes) {
    ClusterParams p;
    // Proportions 1:2:3:4; the largest cluster absorbs the rounding.
    int assigned = 0;
    for (int part = 1; part <= 3; ++part) {
        int size = n_nodes * part / 10;
        p.cluster_sizes.push_back(size);
        assigned += size;
    }
    p.cluster_sizes.push_back(n_nodes - assigned);
    std::erase(p.cluster_sizes, 0);
    return p;
}

Topology gen_clustered_random(int n_nodes, const ClusterParams& params, std::uint64_t seed) {
    const auto& sizes = params.cluster_sizes;
    if (sizes.empty()) throw InputError("at least one cluster is required");
    if (std::any_of(sizes.begin(), sizes.end(), [](int s) { return s <= 0; })) {
        throw InputError("cluster sizes must be positive");
    }
    if (std::accumulate(sizes.begin(), sizes.end(), 0) != n_nodes) {
        throw InputError("cluster sizes must sum to n_nodes=" + std::to_string(n_nodes));
    }
    if (!(params.p_intra >= 0.0 && params.p_intra <= 1.0) || !(params.p_inter >= 0.0 && params.p_inter <= 1.0)) {
        throw InputError("edge probabilities must lie in [0, 1]");
    }
    if (params.p_intra == 0.0 && std::any_of(sizes.begin(), sizes.end(), [](int s) { return s > 1; })) {
        throw InputError("p_intra = 0 leaves clusters disconnected");
    }
    if (sizes.size() > 1 && params.p_inter == 0.0 && !params.force_bridges) {
        throw InputError("p_inter = 0 without forced bridges leaves clusters disconnected");
    }
    if (n_nodes == 1) return {1, {}};

    std::vector<int> cluster_of(static_cast<std::size_t>(n_nodes));
    std::vector<int> first_node;
    for (int c = 0, node = 0; c < static_cast<int>(sizes.size()); ++c) {
        first_node.push_back(node);
        for (int k = 0; k < sizes[c]; ++k) cluster_of[node++] = c;
    }

    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        auto rng = attempt_rng(seed, attempt);
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        std::vector<Edge> edges;
        for (int i = 0; i < n_nodes; ++i) {
            for (int j = i + 1; j < n_nodes; ++j) {
                double p = cluster_of[i] == cluster_of[j] ? params.p_intra : params.p_inter;
                if (coin(rng) < p) edges.push_back({i, j});
            }
        }
        if (params.force_bridges) {
            for (std::size_t c = 0; c + 1 < sizes.size(); ++c) {
                std::uniform_int_distribution<int> pick_a(0, sizes[c] - 1), pick_b(0, sizes[c + 1] - 1);
                int a = first_node[c] + pick_a(rng);
                int b = first_node[c + 1] + pick_b(rng);
                Edge bridge{a, b};
                if (std::find(edges.begin(), edges.end(), bridge) == edges.end()) edges.push_back(bridge);
            }
        }
        Topology g(n_nodes, std::move(edges));
        if (g.is_connected()) return g;
    }
    throw InputError("clustered graph still disconnected after " + std::to_string(kMaxAttempts) + " attempts");
}

} // namespace delaycons
