#pragma once

// Reference computations used only by the tests. None of these share code
// paths with the library routines they check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// Largest root modulus for tau = 1 from the quadratic formula.
inline double rho_tau1(double lambda) {
    if (lambda <= 0.25) return 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * lambda));
    return std::sqrt(lambda);
}

/// Durand-Kerner iteration on a monic polynomial given by its coefficients
/// from the constant term upwards (leading 1 omitted).
inline std::vector<cplx> durand_kerner(const std::vector<double>& low_coeffs, int iterations = 5000) {
    const std::size_t m = low_coeffs.size();
    auto eval = [&](cplx z) {
        cplx acc = 1.0;
        for (std::size_t k = m; k-- > 0;) acc = acc * z + low_coeffs[k];
        return acc;
    };
    std::vector<cplx> z(m);
    const cplx base(0.4, 0.9);
    for (std::size_t i = 0; i < m; ++i) z[i] = std::pow(base, static_cast<double>(i));
    for (int it = 0; it < iterations; ++it) {
        double moved = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            cplx denom = 1.0;
            for (std::size_t j = 0; j < m; ++j)
                if (j != i) denom *= z[i] - z[j];
            cplx step = eval(z[i]) / denom;
            z[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-16) break;
    }
    return z;
}

/// Greedy nearest matching; returns the largest matched distance, or infinity
/// on a size mismatch.
inline double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& x : a) {
        auto it = std::min_element(b.begin(), b.end(),
                                   [&](const cplx& p, const cplx& q) { return std::abs(p - x) < std::abs(q - x); });
        worst = std::max(worst, std::abs(*it - x));
        b.erase(it);
    }
    return worst;
}

/// x(k+1) = x(k) - a x(k - tau) with constant pre-history x(k) = x0 for k <= 0.
inline std::vector<double> scalar_recurrence(double a, int tau, double x0, int steps) {
    std::vector<double> x{x0};
    for (int k = 0; k < steps; ++k) {
        const int lag = k - tau;
        const double delayed = lag >= 0 ? x[static_cast<std::size_t>(lag)] : x0;
        x.push_back(x.back() - a * delayed);
    }
    return x;
}

/// Sign changes in a coefficient sequence, zeros skipped (Descartes' rule).
inline int sign_changes(const std::vector<double>& coeffs) {
    int changes = 0, last = 0;
    for (double c : coeffs) {
        int s = (c > 0) - (c < 0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

/// Coefficients (highest degree first) of h(-z) = (-z)^(tau+1) - (-z)^tau + lambda.
inline std::vector<double> reflected_char_poly(double lambda, int tau) {
    std::vector<double> c(static_cast<std::size_t>(tau) + 2, 0.0);
    c[0] = (tau + 1) % 2 == 0 ? 1.0 : -1.0;
    c[1] = -(tau % 2 == 0 ? 1.0 : -1.0);
    c.back() += lambda;
    return c;
}

/// All-pairs BFS distance; -1 for unreachable.
inline std::vector<std::vector<int>> bfs_distances(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<std::vector<int>> dist(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
    for (int s = 0; s < n; ++s) {
        std::queue<int> q;
        dist[s][s] = 0;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int w : adj[u])
                if (dist[s][w] < 0) {
                    dist[s][w] = dist[s][u] + 1;
                    q.push(w);
                }
        }
    }
    return dist;
}

/// Random connected graph: a random spanning tree plus extra edges with probability p.
inline std::vector<std::pair<int, int>> random_connected_edges(int n, double p, std::mt19937_64& rng) {
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<bool>> present(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        int u = pick(rng);
        edges.emplace_back(u, v);
        present[u][v] = present[v][u] = true;
    }
    std::bernoulli_distribution coin(p);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!present[i][j] && coin(rng)) edges.emplace_back(i, j);
    return edges;
}

} // namespace oracle
