#include "delaycons/spectral.hpp"

#include "delaycons/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <numbers>
#include <sstream>
#include <string>

namespace delaycons {

namespace {

using ComplexL = std::complex<long double>;

ComplexL power(ComplexL z, int k) {
    ComplexL result{1.0L, 0.0L};
    while (k > 0) {
        if (k & 1) result *= z;
        z *= z;
        k >>= 1;
    }
    return result;
}

// One Newton step for h(z) = z^tau (z - 1) + lambda; returns the new iterate.
ComplexL newton_step(ComplexL z, long double lambda, int tau) {
    ComplexL z_tm1 = power(z, tau - 1);
    ComplexL z_t = z_tm1 * z;
    ComplexL value = z_t * (z - 1.0L) + lambda;
    ComplexL slope = static_cast<long double>(tau + 1) * z_t - static_cast<long double>(tau) * z_tm1;
    if (std::abs(slope) == 0.0L) return z;
    return z - value / slope;
}

long double residual_l(ComplexL z, long double lambda, int tau) {
    ComplexL value = power(z, tau) * (z - 1.0L) + lambda;
    long double scale = std::max(1.0L, std::abs(lambda)) *
                        std::pow(std::max(1.0L, std::abs(z)), static_cast<long double>(tau + 1));
    return std::abs(value) / scale;
}

void check_tau(int tau) {
    if (tau < 0) throw InputError("delay must be >= 0, got " + std::to_string(tau));
}

} // namespace

double RootSet::max_modulus() const {
    double m = 0.0;
    for (const auto& z : roots) m = std::max(m, std::abs(z));
    return m;
}

double stability_bound(int tau) {
    check_tau(tau);
    // Extended precision so that the rounded result is exact where the closed
    // form is exact (tau = 1 gives 1).
    const long double angle = std::numbers::pi_v<long double> / 2.0L / (2.0L * tau + 1.0L);
    return static_cast<double>(2.0L * std::sin(angle));
}

double real_root_merge_lambda(int tau) {
    check_tau(tau);
    if (tau == 0) return 0.0;
    const double t = tau;
    return std::pow(t, t) / std::pow(t + 1.0, t + 1.0);
}

double root_residual(std::complex<double> z, double lambda, int tau) {
    return static_cast<double>(residual_l(ComplexL(z.real(), z.imag()), lambda, tau));
}

RootSet char_roots(double lambda, int tau) {
    check_tau(tau);
    if (!std::isfinite(lambda)) throw InputError("lambda must be finite");

    RootSet out;
    out.lambda = lambda;
    out.tau = tau;
    const int degree = tau + 1;

    if (tau == 0) {
        out.roots.assign(1, {1.0 - lambda, 0.0});
        return out;
    }
    if (lambda == 0.0) {
        out.roots.assign(static_cast<std::size_t>(degree), {0.0, 0.0});
        out.roots.front() = {1.0, 0.0};
        return out;
    }

    // Companion matrix of the monic polynomial: ones on the subdiagonal,
    // negated low-to-high coefficients in the last column.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    companion(0, degree - 1) = -lambda;
    companion(degree - 1, degree - 1) = 1.0;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("companion eigensolver failed for lambda=" + std::to_string(lambda) +
                             " tau=" + std::to_string(tau));
    }

    const long double lam = lambda;
    double worst = 0.0;
    out.roots.reserve(static_cast<std::size_t>(degree));
    std::vector<std::complex<double>> seeds(solver.eigenvalues().data(), solver.eigenvalues().data() + degree);

    // The only possible multiple root is z* = tau/(tau+1) at lambda = lambda_b,
    // where the eigensolver loses half the digits. Seed that pair from
    // h(z* + d) ~ h(z*) + h''(z*) d^2 / 2 instead.
    const double merge = real_root_merge_lambda(tau);
    if (std::abs(lambda - merge) <= 1e-6 * merge) {
        const long double zs = static_cast<long double>(tau) / (tau + 1);
        const long double h_at = std::pow(zs, static_cast<long double>(tau)) * (zs - 1.0L) + lam;
        const long double curvature = tau * std::pow(zs, static_cast<long double>(tau - 2));
        const ComplexL d = std::sqrt(ComplexL(-2.0L * h_at / curvature, 0.0L));
        std::vector<std::size_t> order(seeds.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::partial_sort(order.begin(), order.begin() + 2, order.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(seeds[a] - static_cast<double>(zs)) < std::abs(seeds[b] - static_cast<double>(zs));
        });
        seeds[order[0]] = {static_cast<double>(zs + d.real()), static_cast<double>(d.imag())};
        seeds[order[1]] = {static_cast<double>(zs - d.real()), static_cast<double>(-d.imag())};
    }

    for (Eigen::Index k = 0; k < degree; ++k) {
        // Polish may not wander towards a neighbouring root.
        double separation = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < degree; ++j) {
            if (j != k) separation = std::min(separation, std::abs(seeds[j] - seeds[k]));
        }
        const ComplexL start(seeds[k].real(), seeds[k].imag());
        const long double reach = 0.25L * separation;
        ComplexL z = start;
        long double best_res = residual_l(z, lam, tau);
        ComplexL best = z;
        for (int it = 0; it < 30; ++it) {
            ComplexL next = newton_step(z, lam, tau);
            if (std::abs(next - start) > reach) break;
            long double res = residual_l(next, lam, tau);
            if (res < best_res) {
                best_res = res;
                best = next;
            }
            if (std::abs(next - z) <= 4.0L * std::numeric_limits<long double>::epsilon() * std::abs(next)) break;
            z = next;
        }
        worst = std::max(worst, static_cast<double>(best_res));
        out.roots.emplace_back(static_cast<double>(best.real()), static_cast<double>(best.imag()));
    }
    if (worst > kRootResidualTol) {
        std::ostringstream msg;
        msg << "root polish did not converge for lambda=" << lambda << " tau=" << tau
            << ": worst relative residual " << worst;
        throw NumericalError(msg.str());
    }

    std::sort(out.roots.begin(), out.roots.end(), [](const auto& a, const auto& b) {
        double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma > mb;
        return std::arg(a) < std::arg(b);
    });
    return out;
}

double rho(double lambda, int tau) {
    if (lambda == 0.0) return 1.0;
    return char_roots(lambda, tau).max_modulus();
}

std::vector<double> nonzero_part(const Spectrum& spec) {
    if (spec.size() < 2) throw InputError("spectrum needs at least two eigenvalues");
    const auto& ev = spec.eigenvalues;
    auto zero = std::min_element(ev.begin(), ev.end(),
                                 [](double a, double b) { return std::abs(a) < std::abs(b); });
    std::vector<double> rest;
    rest.reserve(ev.size() - 1);
    rest.insert(rest.end(), ev.begin(), zero);
    rest.insert(rest.end(), std::next(zero), ev.end());
    return rest;
}

namespace {

void reject_all_zero(const std::vector<double>& rest, const Spectrum& spec) {
    double scale = 0.0;
    for (double v : spec.eigenvalues) scale = std::max(scale, std::abs(v));
    if (scale == 0.0 || std::all_of(rest.begin(), rest.end(), [&](double v) { return std::abs(v) <= 1e-14 * scale; })) {
        throw InputError("spectrum has no nonzero eigenvalue");
    }
}

} // namespace

double conv_rate(const Spectrum& spec, int tau) {
    auto rest = nonzero_part(spec);
    reject_all_zero(rest, spec);
    double lo = rest.front(), hi = rest.back();
    return lo == hi ? rho(lo, tau) : std::max(rho(lo, tau), rho(hi, tau));
}

double conv_rate_full_scan(const Spectrum& spec, int tau) {
    auto rest = nonzero_part(spec);
    reject_all_zero(rest, spec);
    double r = 0.0;
    for (double v : rest) r = std::max(r, rho(v, tau));
    return r;
}

double lambda_th(int tau) {
    check_tau(tau);
    if (tau == 0) return 1.0; // rho(lambda, 0) = |1 - lambda|
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = stability_bound(tau);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = rho(c, tau), fd = rho(d, tau);
    while (b - a > kLambdaSearchTol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = rho(c, tau);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = rho(d, tau);
        }
    }
    return 0.5 * (a + b);
}

Eigen::MatrixXd augmented_matrix(const Eigen::MatrixXd& gains, int tau) {
    check_tau(tau);
    if (gains.rows() != gains.cols()) throw InputError("gain matrix must be square");
    const Eigen::Index n = gains.rows();
    const Eigen::Index side = n * (tau + 1);
    if (side > 5000) {
        throw InputError("augmented matrix of side " + std::to_string(side) + " exceeds the 5000 limit");
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(side, side);
    const auto identity = Eigen::MatrixXd::Identity(n, n);
    for (int block = 0; block < tau; ++block) {
        a.block(block * n, (block + 1) * n, n, n) = identity;
    }
    a.block(tau * n, tau * n, n, n) += identity;
    a.block(tau * n, 0, n, n) -= gains;
    return a;
}

Spectrum laplacian_spectrum(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw InputError("matrix must be square");
    if (m.size() == 0) return {};
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw InputError("matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
    Spectrum spec;
    spec.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + m.rows());
    std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end());
    return spec;
}

std::vector<double> rho_grid(std::span<const double> lambdas, int tau) {
    std::vector<double> out(lambdas.size());
    const auto count = static_cast<long long>(lambdas.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = rho(lambdas[static_cast<std::size_t>(i)], tau);
        } catch (...) {
#pragma omp critical(delaycons_rho_grid)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<double> rho_grid_serial(std::span<const double> lambdas, int tau) {
    std::vector<double> out;
    out.reserve(lambdas.size());
    for (double lam : lambdas) out.push_back(rho(lam, tau));
    return out;
}

} // namespace delaycons
