#pragma once

#include <Eigen/Core>

#include <complex>
#include <span>
#include <vector>

namespace delaycons {

// Fixed numerical tolerances.
inline constexpr double kRootResidualTol = 1e-12;
inline constexpr double kEigenResidualTol = 1e-9;
inline constexpr double kLambdaSearchTol = 1e-10;
/// Modes whose modulus is within this distance of 1 count as unstable.
inline constexpr double kMarginalTol = 1e-9;

/// Eigenvalues sorted non-decreasingly.
struct Spectrum {
    std::vector<double> eigenvalues;

    [[nodiscard]] std::size_t size() const noexcept { return eigenvalues.size(); }
    [[nodiscard]] double front() const { return eigenvalues.front(); }
    [[nodiscard]] double back() const { return eigenvalues.back(); }
    /// Second-smallest eigenvalue; requires at least two entries.
    [[nodiscard]] double lambda2() const { return eigenvalues.at(1); }
    [[nodiscard]] double lambda_max() const { return eigenvalues.back(); }
};

/// Roots of h(z) = z^(tau+1) - z^tau + lambda, counted with multiplicity and
/// ordered by decreasing modulus (ties by increasing argument).
struct RootSet {
    std::vector<std::complex<double>> roots;
    double lambda = 0.0;
    int tau = 0;

    [[nodiscard]] double max_modulus() const;
};

/// Largest admissible gain eigenvalue for delay tau: 2 sin(pi / (2 (2 tau + 1))).
double stability_bound(int tau);

/// Merge point of the two positive real roots: tau^tau / (tau+1)^(tau+1).
double real_root_merge_lambda(int tau);

/// |h(z)| relative to the coefficient scale; what char_roots certifies.
double root_residual(std::complex<double> z, double lambda, int tau);

/// Companion-matrix eigenvalues polished by Newton's method in extended precision.
/// Throws NumericalError if a root misses the residual tolerance.
RootSet char_roots(double lambda, int tau);

/// Largest root modulus of h(.; lambda). rho(0, tau) = 1.
double rho(double lambda, int tau);

/// The structural zero is the entry of smallest magnitude; returns the others in order.
std::vector<double> nonzero_part(const Spectrum& spec);

/// max{rho(lambda_2), rho(lambda_N)} over the nonzero part. Valid because rho
/// is decreasing then increasing in lambda.
double conv_rate(const Spectrum& spec, int tau);

/// Same quantity by scanning every nonzero eigenvalue.
double conv_rate_full_scan(const Spectrum& spec, int tau);

/// Minimizer of rho(., tau) on (0, stability_bound(tau)) by golden-section search.
double lambda_th(int tau);

/// Block-companion state matrix of the delayed dynamics for the stacked state
/// [x(k - tau); ...; x(k)]. Desk-scale only: side length capped at 5000.
Eigen::MatrixXd augmented_matrix(const Eigen::MatrixXd& gains, int tau);

/// All eigenvalues of a symmetric matrix, sorted. Rejects asymmetric input.
Spectrum laplacian_spectrum(const Eigen::MatrixXd& m);

/// rho evaluated on each lambda. Parallel over the grid; the result is
/// independent of the thread count.
std::vector<double> rho_grid(std::span<const double> lambdas, int tau);

/// Serial reference for rho_grid.
std::vector<double> rho_grid_serial(std::span<const double> lambdas, int tau);

} // namespace delaycons
