#include "delaycons/gains.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace delaycons {

GainMatrix::GainMatrix(Topology pattern, std::vector<double> edge_weights)
    : pattern_(std::move(pattern)), weights_(std::move(edge_weights)) {
    if (weights_.size() != pattern_.n_edges()) {
        throw InputError("expected " + std::to_string(pattern_.n_edges()) + " edge weights, got " +
                         std::to_string(weights_.size()));
    }
    for (double w : weights_) {
        if (!std::isfinite(w)) throw InputError("edge weights must be finite");
    }
}

GainMatrix GainMatrix::uniform(Topology pattern, double g) {
    std::vector<double> w(pattern.n_edges(), g);
    return {std::move(pattern), std::move(w)};
}

std::vector<double> GainMatrix::diagonal() const {
    std::vector<double> d(static_cast<std::size_t>(size()), 0.0);
    auto edges = pattern_.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        d[edges[e].u] += weights_[e];
        d[edges[e].v] += weights_[e];
    }
    return d;
}

Eigen::MatrixXd GainMatrix::dense() const {
    const int n = size();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    auto edges = pattern_.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [u, v] = edges[e];
        const double w = weights_[e];
        k(u, v) -= w;
        k(v, u) -= w;
        k(u, u) += w;
        k(v, v) += w;
    }
    return k;
}

GainMatrix GainMatrix::scaled(double factor) const {
    std::vector<double> w(weights_);
    for (double& x : w) x *= factor;
    return {pattern_, std::move(w)};
}

void GainMatrix::apply(std::span<const double> x, std::span<double> out) const {
    if (x.size() != static_cast<std::size_t>(size()) || out.size() != x.size()) {
        throw InputError("dimension mismatch in gain product");
    }
    std::fill(out.begin(), out.end(), 0.0);
    auto edges = pattern_.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [u, v] = edges[e];
        const double flow = weights_[e] * (x[u] - x[v]);
        out[u] += flow;
        out[v] -= flow;
    }
}

Spectrum gain_spectrum(const GainMatrix& k) { return laplacian_spectrum(k.dense()); }

bool is_stable(const Spectrum& spec, int tau) {
    if (spec.size() < 2) return false;
    const double ubar = stability_bound(tau);
    auto rest = nonzero_part(spec);
    if (rest.front() <= 0.0 || rest.back() >= ubar) return false;
    return conv_rate(spec, tau) < 1.0 - kMarginalTol;
}

bool is_stable(const GainMatrix& k, int tau) { return is_stable(gain_spectrum(k), tau); }

std::string_view to_string(Strategy s) noexcept {
    switch (s) {
        case Strategy::UniformStandard: return "uniform-standard";
        case Strategy::UniformOptimal: return "uniform-optimal";
        case Strategy::MultiOptimal: return "multi-optimal";
    }
    return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) noexcept {
    if (name == "uniform-standard" || name == "uniform-std") return Strategy::UniformStandard;
    if (name == "uniform-optimal" || name == "uniform-opt") return Strategy::UniformOptimal;
    if (name == "multi-optimal" || name == "multi-opt") return Strategy::MultiOptimal;
    return std::nullopt;
}

namespace {

void finish(GainDesign& d) {
    auto spec = gain_spectrum(d.matrix);
    auto rest = nonzero_part(spec);
    d.lambda2 = rest.front();
    d.lambda_max = rest.back();
    d.ubar = stability_bound(d.tau);
    d.rate = conv_rate(spec, d.tau);
    d.stable = is_stable(spec, d.tau);
}

void require_design_input(const Topology& g, int tau) {
    if (tau < 0) throw InputError("delay must be >= 0");
    if (g.n_nodes() < 2) throw InputError("gain design needs at least two nodes");
    if (!g.is_connected()) throw InputError("gain design needs a connected topology");
}

} // namespace

GainDesign uniform_standard(const Topology& g, int tau) {
    require_design_input(g, tau);
    GainDesign d;
    d.strategy = Strategy::UniformStandard;
    d.tau = tau;
    d.scale = stability_bound(tau) / (2.0 * g.max_degree() + 1.0);
    d.matrix = GainMatrix::uniform(g, d.scale);
    finish(d);
    auto lap = nonzero_part(laplacian_spectrum(laplacian(g)));
    d.eigen_ratio = lap.back() / lap.front();
    return d;
}

double bisect_balance(double lambda_lo, double lambda_hi, int tau) {
    if (!(lambda_lo > 0.0) || !(lambda_hi >= lambda_lo)) {
        throw InputError("bisect_balance needs 0 < lambda_lo <= lambda_hi");
    }
    if (lambda_hi - lambda_lo <= 1e-12 * lambda_hi) return lambda_th(tau) / lambda_hi;

    const double upper = stability_bound(tau) / lambda_hi * (1.0 - 1e-9);
    auto gap = [&](double s) { return rho(s * lambda_hi, tau) - rho(s * lambda_lo, tau); };
    // gap < 0 while both points sit on the decreasing branch of rho.
    if (gap(upper) <= 0.0) return upper;

    double lo = 0.0, hi = upper;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double g = gap(mid);
        if (g == 0.0) return mid;
        (g < 0.0 ? lo : hi) = mid;
    }
    // Pick the side with the smaller worst-case modulus.
    auto worst = [&](double s) { return std::max(rho(s * lambda_hi, tau), rho(s * lambda_lo, tau)); };
    return lo > 0.0 && worst(lo) <= worst(hi) ? lo : hi;
}

GainDesign uniform_optimal(const Topology& g, int tau) {
    require_design_input(g, tau);
    auto lap = nonzero_part(laplacian_spectrum(laplacian(g)));
    GainDesign d;
    d.strategy = Strategy::UniformOptimal;
    d.tau = tau;
    d.eigen_ratio = lap.back() / lap.front();
    d.scale = bisect_balance(lap.front(), lap.back(), tau);
    d.matrix = GainMatrix::uniform(g, d.scale);
    finish(d);
    return d;
}

namespace {

struct Extremes {
    double lambda2 = 0.0;
    double lambda_max = 0.0;
    Eigen::VectorXd v2;
    Eigen::VectorXd vmax;
};

// Extreme eigenpairs on the complement of the all-ones vector. The shift moves
// the structural zero above every other eigenvalue.
Extremes extreme_pairs(const GainMatrix& k) {
    const int n = k.size();
    Eigen::MatrixXd m = k.dense();
    const double shift = 1.0 + 2.0 * m.cwiseAbs().rowwise().sum().maxCoeff();
    m.array() += shift / n;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
    Extremes x;
    x.lambda2 = solver.eigenvalues()(0);
    x.lambda_max = solver.eigenvalues()(n - 2);
    x.v2 = solver.eigenvectors().col(0);
    x.vmax = solver.eigenvectors().col(n - 2);
    return x;
}

} // namespace

NormalizedGains minimize_eigen_ratio(const Topology& g, const StructuredOptions& opts) {
    if (g.n_nodes() < 2) throw InputError("structured design needs at least two nodes");
    if (!g.is_connected()) throw InputError("structured design needs a connected topology");

    const auto edges = g.edges();
    const std::size_t m = edges.size();
    const double norm_target = std::sqrt(static_cast<double>(m));

    std::vector<double> w(m, 1.0);
    std::vector<double> best_w = w;
    double best_ratio = std::numeric_limits<double>::infinity();
    int since_improvement = 0;
    int iterations = 0;
    std::vector<double> grad(m);

    for (int k = 1; k <= opts.max_iterations; ++k) {
        iterations = k;
        auto x = extreme_pairs(GainMatrix(g, w));
        if (x.lambda2 > 0.0) {
            const double ratio = x.lambda_max / x.lambda2;
            if (ratio < best_ratio) {
                best_ratio = ratio;
                best_w = w;
                since_improvement = 0;
            } else {
                ++since_improvement;
            }
        } else {
            // Left the connected cone; restart from the best iterate.
            w = best_w;
            ++since_improvement;
            continue;
        }
        if (best_ratio - 1.0 <= 1e-12 || since_improvement >= opts.stall_iterations) break;

        // d(lambda_N / lambda_2)/dw_e from the edge components of both eigenvectors.
        double gnorm = 0.0;
        for (std::size_t e = 0; e < m; ++e) {
            const auto [u, v] = edges[e];
            const double dmax = x.vmax(u) - x.vmax(v);
            const double d2 = x.v2(u) - x.v2(v);
            grad[e] = (dmax * dmax * x.lambda2 - x.lambda_max * d2 * d2) / (x.lambda2 * x.lambda2);
            gnorm += grad[e] * grad[e];
        }
        gnorm = std::sqrt(gnorm);
        if (gnorm == 0.0) break;

        const double step = opts.initial_step / k * norm_target / gnorm;
        double wnorm = 0.0;
        for (std::size_t e = 0; e < m; ++e) {
            w[e] -= step * grad[e];
            wnorm += w[e] * w[e];
        }
        wnorm = std::sqrt(wnorm);
        for (double& we : w) we *= norm_target / wnorm;
    }

    auto certify = [&](const std::vector<double>& weights) {
        return extreme_pairs(GainMatrix(g, weights));
    };
    auto x = certify(best_w);
    if (!(x.lambda2 > 0.0)) {
        std::ostringstream msg;
        msg << "structured optimizer found no connected iterate (lambda2=" << x.lambda2
            << ", lambdaN=" << x.lambda_max << ")";
        throw OptimizerError(msg.str(), best_w, x.lambda2, x.lambda_max);
    }
    for (double& we : best_w) we /= x.lambda2;
    auto cert = certify(best_w);
    if (cert.lambda2 < 1.0 - 1e-6 || std::abs(cert.lambda2 - 1.0) > 1e-6) {
        std::ostringstream msg;
        msg << "normalization failed: lambda2=" << cert.lambda2 << ", lambdaN=" << cert.lambda_max;
        throw OptimizerError(msg.str(), best_w, cert.lambda2, cert.lambda_max);
    }
    return {GainMatrix(g, std::move(best_w)), cert.lambda2, cert.lambda_max, iterations};
}

GainDesign optimize_structured(const Topology& g, int tau, const StructuredOptions& opts) {
    require_design_input(g, tau);
    auto normalized = minimize_eigen_ratio(g, opts);
    GainDesign d;
    d.strategy = Strategy::MultiOptimal;
    d.tau = tau;
    d.iterations = normalized.iterations;
    d.eigen_ratio = normalized.lambda_max / normalized.lambda2;
    d.scale = bisect_balance(normalized.lambda2, normalized.lambda_max, tau);
    d.matrix = normalized.matrix.scaled(d.scale);
    finish(d);
    return d;
}

GainDesign design_gains(const Topology& g, int tau, Strategy strategy) {
    switch (strategy) {
        case Strategy::UniformStandard: return uniform_standard(g, tau);
        case Strategy::UniformOptimal: return uniform_optimal(g, tau);
        case Strategy::MultiOptimal: return optimize_structured(g, tau);
    }
    throw InputError("unknown strategy");
}

} // namespace delaycons
