#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace delaycons {

/// Unordered node pair, stored with u < v.
struct Edge {
    int u = 0;
    int v = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on nodes [0, n_nodes). Edges are kept sorted
/// lexicographically so two topologies with the same edge set compare equal.
class Topology {
public:
    Topology() = default;

    /// Validates and canonicalizes. Pairs may come in either orientation;
    /// self-loops, duplicates and out-of-range indices throw InputError.
    Topology(int n_nodes, std::vector<Edge> edges);

    [[nodiscard]] int n_nodes() const noexcept { return n_nodes_; }
    [[nodiscard]] std::size_t n_edges() const noexcept { return edges_.size(); }
    [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }
    [[nodiscard]] const std::vector<int>& neighbors(int node) const { return adjacency_.at(node); }
    [[nodiscard]] int degree(int node) const { return static_cast<int>(adjacency_.at(node).size()); }
    [[nodiscard]] int max_degree() const noexcept;
    [[nodiscard]] int min_degree() const noexcept;
    [[nodiscard]] bool has_edge(int a, int b) const;
    [[nodiscard]] bool is_connected() const;
    [[nodiscard]] bool is_complete() const noexcept;

    /// BFS distances from `source`; unreachable nodes get -1.
    [[nodiscard]] std::vector<int> distances_from(int source) const;

    friend bool operator==(const Topology& a, const Topology& b) {
        return a.n_nodes_ == b.n_nodes_ && a.edges_ == b.edges_;
    }

private:
    int n_nodes_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adjacency_;
};

// Fixed families.
Topology path_graph(int n_nodes);
Topology ring_graph(int n_nodes);
Topology complete_graph(int n_nodes);
Topology star_graph(int n_nodes);

/// Graph on the same nodes joining every pair at distance 1..hops in `base`.
/// `base` must be connected; hops >= 1.
Topology hop_closure(const Topology& base, int hops);

/// Diameter of a connected graph: the smallest hop count whose closure is complete.
int max_hop(const Topology& base);

/// Combinatorial Laplacian D - A.
Eigen::MatrixXd laplacian(const Topology& g);

/// Connected simple `degree`-regular graph from the pairing model, retried
/// with fresh pairings until simple and connected (at most 1000 attempts).
Topology gen_regular(int n_nodes, int degree, std::uint64_t seed);

/// Planted-partition parameters. Cluster sizes must sum to the node count.
struct ClusterParams {
    std::vector<int> cluster_sizes;
    double p_intra = 0.3;
    double p_inter = 0.005;
    /// Join consecutive clusters with one random edge on every attempt.
    bool force_bridges = true;

    /// Four clusters in proportion 1:2:3:4 with the default probabilities.
    static ClusterParams defaults_for(int n_nodes);
};

/// Stochastic block graph with dense clusters and sparse links between them,
/// resampled until connected (at most 1000 attempts).
Topology gen_clustered_random(int n_nodes, const ClusterParams& params, std::uint64_t seed);

} // namespace delaycons
