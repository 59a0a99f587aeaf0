#include <catch_amalgamated.hpp>

#include "delaycons/errors.hpp"
#include "delaycons/graph.hpp"
#include "delaycons/spectral.hpp"
#include "oracles.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace delaycons;
using Catch::Approx;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> eigenvalues_of(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    std::vector<cplx> out;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) out.push_back(solver.eigenvalues()(i));
    return out;
}

bool is_real(cplx z) { return std::abs(z.imag()) <= 1e-7; }

double max_real_modulus(const RootSet& r, bool& any) {
    double best = 0.0;
    any = false;
    for (auto z : r.roots)
        if (is_real(z)) {
            any = true;
            best = std::max(best, std::abs(z));
        }
    return best;
}

std::vector<double> linspace_open(double lo, double hi, int count) {
    std::vector<double> xs;
    for (int i = 1; i <= count; ++i) xs.push_back(lo + (hi - lo) * i / (count + 1.0));
    return xs;
}

} // namespace

TEST_CASE("stability bound", "[spectral]") {
    CHECK(stability_bound(1) == 1.0);
    CHECK(stability_bound(5) == Approx(0.284630).margin(1e-6));
    // tau = 0 means an undelayed update, where the bound is 2 sin(pi/2).
    CHECK(stability_bound(0) == 2.0);
    for (int tau = 1; tau < 20; ++tau) CHECK(stability_bound(tau + 1) < stability_bound(tau));
    CHECK_THROWS_AS(stability_bound(-1), InputError);
}

TEST_CASE("char_roots examples", "[spectral]") {
    SECTION("lambda zero factors as z^tau (z - 1)") {
        auto r = char_roots(0.0, 3);
        REQUIRE(r.roots.size() == 4);
        CHECK(r.roots[0] == cplx(1.0, 0.0));
        for (int i = 1; i < 4; ++i) CHECK(r.roots[i] == cplx(0.0, 0.0));
    }
    SECTION("double root at one half") {
        auto r = char_roots(0.25, 1);
        REQUIRE(r.roots.size() == 2);
        for (auto z : r.roots) CHECK(std::abs(z - 0.5) < 1e-10);
    }
    SECTION("tau 2 against Durand-Kerner") {
        auto r = char_roots(0.1, 2);
        auto dk = oracle::durand_kerner({0.1, 0.0, -1.0});
        CHECK(oracle::multiset_distance(r.roots, dk) < 1e-10);
    }
    SECTION("ordering and residuals") {
        auto r = char_roots(0.3, 6);
        REQUIRE(r.roots.size() == 7);
        for (std::size_t i = 1; i < r.roots.size(); ++i)
            CHECK(std::abs(r.roots[i - 1]) >= std::abs(r.roots[i]) - 1e-15);
        for (auto z : r.roots) CHECK(root_residual(z, 0.3, 6) <= kRootResidualTol);
    }
    SECTION("bad arguments") {
        CHECK_THROWS_AS(char_roots(0.1, -1), InputError);
        CHECK_THROWS_AS(char_roots(std::nan(""), 2), InputError);
    }
}

TEST_CASE("char_roots agrees with Durand-Kerner across delays", "[spectral][property]") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> lam(0.0, 1.2);
    for (int tau = 1; tau <= 10; ++tau)
        for (int trial = 0; trial < 5; ++trial) {
            const double l = lam(rng);
            std::vector<double> low(static_cast<std::size_t>(tau) + 1, 0.0);
            low[0] = l;
            low[static_cast<std::size_t>(tau)] = -1.0;
            auto dk = oracle::durand_kerner(low);
            INFO("tau=" << tau << " lambda=" << l);
            CHECK(oracle::multiset_distance(char_roots(l, tau).roots, dk) < 1e-9);
        }
}

TEST_CASE("double root at the real-root merge point", "[spectral]") {
    for (int tau = 1; tau <= 8; ++tau) {
        const double lb = real_root_merge_lambda(tau);
        const double z_star = tau / (tau + 1.0);
        auto r = char_roots(lb, tau);
        int near = 0;
        for (auto z : r.roots) near += std::abs(z - z_star) < 1e-8;
        INFO("tau=" << tau);
        CHECK(near == 2);
        CHECK(r.max_modulus() == Approx(z_star).margin(1e-8));
    }
}

TEST_CASE("rho examples", "[spectral]") {
    CHECK(rho(1e-9, 3) == Approx(1.0).margin(1e-8));
    CHECK(rho(0.16, 1) == Approx(0.8).margin(1e-12));
    CHECK(rho(0.49, 1) == Approx(0.7).margin(1e-12));
    CHECK(rho(0.0, 4) == 1.0);
}

TEST_CASE("rho matches the delay-1 closed form", "[spectral][property]") {
    for (double l : linspace_open(0.0, 1.0, 500)) {
        INFO("lambda=" << l);
        CHECK(std::abs(rho(l, 1) - oracle::rho_tau1(l)) < 1e-10);
    }
}

TEST_CASE("conv_rate examples", "[spectral]") {
    CHECK(conv_rate(Spectrum{{0.0, 0.25}}, 1) == Approx(0.5).margin(1e-10));
    CHECK(conv_rate(Spectrum{{0.0, 0.16, 0.49}}, 1) == Approx(0.8).margin(1e-12));
    for (int tau = 1; tau <= 8; ++tau) {
        INFO("tau=" << tau);
        CHECK(conv_rate(Spectrum{{0.0, stability_bound(tau)}}, tau) == Approx(1.0).margin(1e-9));
    }
    CHECK_THROWS_AS(conv_rate(Spectrum{{0.0}}, 1), InputError);
    CHECK_THROWS_AS(conv_rate(Spectrum{{}}, 1), InputError);
    CHECK_THROWS_AS(conv_rate(Spectrum{{0.0, 0.0}}, 1), InputError);
}

TEST_CASE("conv_rate shortcut equals the full scan", "[spectral][property]") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const int tau = 1 + trial % 6;
        std::uniform_real_distribution<double> lam(1e-3, stability_bound(tau) * 1.2);
        std::vector<double> eig{0.0};
        for (int i = 0; i < 2 + trial % 7; ++i) eig.push_back(lam(rng));
        std::sort(eig.begin(), eig.end());
        Spectrum s{eig};
        CHECK(conv_rate(s, tau) == conv_rate_full_scan(s, tau));
    }
}

TEST_CASE("lambda_th", "[spectral]") {
    CHECK(lambda_th(1) == Approx(0.25).margin(1e-9));
    // Dense grid oracle for tau = 2.
    const double ub = stability_bound(2);
    const int count = 20000;
    double best_l = 0.0, best_r = 2.0;
    for (double l : linspace_open(0.0, ub, count)) {
        double r = rho(l, 2);
        if (r < best_r) best_r = r, best_l = l;
    }
    const double th = lambda_th(2);
    CHECK(th > 0.0);
    CHECK(th < ub);
    CHECK(std::abs(th - best_l) < 2.0 * ub / count);
    CHECK(rho(th, 2) <= best_r + 1e-12);
}

TEST_CASE("augmented matrix examples", "[spectral]") {
    SECTION("scalar zero gain") {
        Eigen::MatrixXd k = Eigen::MatrixXd::Zero(1, 1);
        auto a = augmented_matrix(k, 2);
        REQUIRE(a.rows() == 3);
        auto mu = eigenvalues_of(a);
        CHECK(oracle::multiset_distance(mu, {1.0, 0.0, 0.0}) < 1e-12);
    }
    SECTION("two-node edge") {
        Eigen::MatrixXd k = 0.125 * laplacian(path_graph(2));
        auto a = augmented_matrix(k, 1);
        REQUIRE(a.rows() == 4);
        // The double root at 0.5 is defective, so the eigensolver only
        // resolves it to about the square root of machine precision.
        CHECK(oracle::multiset_distance(eigenvalues_of(a), {1.0, 0.0, 0.5, 0.5}) < 1e-7);
    }
    SECTION("size guard") {
        CHECK_THROWS_AS(augmented_matrix(Eigen::MatrixXd::Zero(1000, 1000), 5), InputError);
    }
}

TEST_CASE("augmented matrix spectrum for simple roots", "[spectral][property]") {
    // Gains without a zero eigenvalue keep every root simple, so the
    // eigensolver result can be compared directly.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.05, 0.6);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 3;
        const int tau = 1 + trial % 4;
        Eigen::MatrixXd q = Eigen::MatrixXd::Random(n, n);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
        Eigen::MatrixXd basis = qr.householderQ();
        Eigen::VectorXd diag(n);
        for (int i = 0; i < n; ++i) diag(i) = unit(rng);
        Eigen::MatrixXd k = basis * diag.asDiagonal() * basis.transpose();
        k = 0.5 * (k + k.transpose());
        std::vector<cplx> expect;
        for (int i = 0; i < n; ++i) {
            auto r = char_roots(diag(i), tau);
            expect.insert(expect.end(), r.roots.begin(), r.roots.end());
        }
        INFO("trial " << trial);
        CHECK(oracle::multiset_distance(eigenvalues_of(augmented_matrix(k, tau)), expect) < 1e-8);
    }
}

TEST_CASE("laplacian_spectrum", "[spectral]") {
    auto two = laplacian_spectrum(laplacian(path_graph(2)));
    CHECK(two.eigenvalues[0] == Approx(0.0).margin(1e-14));
    CHECK(two.eigenvalues[1] == Approx(2.0).margin(1e-14));
    auto k3 = laplacian_spectrum(laplacian(complete_graph(3)));
    CHECK(k3.eigenvalues[0] == Approx(0.0).margin(1e-14));
    CHECK(k3.eigenvalues[1] == Approx(3.0).margin(1e-14));
    CHECK(k3.eigenvalues[2] == Approx(3.0).margin(1e-14));

    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, -1.0, -0.5, 1.0;
    CHECK_THROWS_AS(laplacian_spectrum(bad), InputError);
}

TEST_CASE("stability boundary is sharp", "[spectral][property]") {
    for (int tau = 1; tau <= 8; ++tau) {
        const double ub = stability_bound(tau);
        INFO("tau=" << tau);
        CHECK(rho(ub * (1 - 1e-4), tau) < 1.0);
        CHECK(rho(ub * (1 + 1e-4), tau) > 1.0);
    }
}

TEST_CASE("root structure on a coarse grid", "[spectral][property]") {
    for (int tau = 1; tau <= 6; ++tau) {
        const double ub = stability_bound(tau);
        const double lb = real_root_merge_lambda(tau);
        double prev_complex = 0.0;
        bool had_complex = false;
        double prev_negative = 0.0;
        for (double l : linspace_open(0.0, ub, 400)) {
            auto r = char_roots(l, tau);
            INFO("tau=" << tau << " lambda=" << l);
            int negatives = 0, positives = 0;
            double neg_mod = 0.0, complex_max = 0.0;
            bool any_complex = false;
            for (auto z : r.roots) {
                if (is_real(z)) {
                    if (z.real() < 0) ++negatives, neg_mod = std::abs(z);
                    else ++positives;
                    if (z.real() > 0) CHECK(z.real() <= 1.0);
                } else {
                    any_complex = true;
                    complex_max = std::max(complex_max, std::abs(z));
                    const double theta = std::arg(z);
                    const double denom = std::sin((tau + 1) * theta);
                    if (std::abs(denom) >= 1e-3)
                        CHECK(std::abs(std::abs(z) - std::sin(tau * theta) / denom) < 1e-8);
                }
            }
            // Descartes on h(-z) bounds the negative real roots.
            CHECK(negatives == oracle::sign_changes(oracle::reflected_char_poly(l, tau)));
            if (l < lb * (1 - 1e-6)) CHECK(positives == 2);
            if (l > lb * (1 + 1e-6)) CHECK(positives == 0);
            if (negatives > 0) {
                CHECK(neg_mod >= prev_negative - 1e-12);
                prev_negative = neg_mod;
            }
            if (any_complex) {
                if (had_complex) CHECK(complex_max >= prev_complex - 1e-9);
                prev_complex = complex_max;
                had_complex = true;
            }
            bool any_real = false;
            max_real_modulus(r, any_real);
            CHECK(any_real == (l <= lb || tau % 2 == 0));
        }
    }
}

TEST_CASE("rho grid is unimodal and thread independent", "[spectral][property]") {
    for (int tau = 1; tau <= 8; ++tau) {
        auto grid = linspace_open(0.0, stability_bound(tau), 1000);
        auto par = rho_grid(grid, tau);
        auto ser = rho_grid_serial(grid, tau);
        REQUIRE(par == ser);
        auto argmin = static_cast<std::size_t>(std::min_element(par.begin(), par.end()) - par.begin());
        INFO("tau=" << tau);
        for (std::size_t i = 1; i <= argmin; ++i) CHECK(par[i] <= par[i - 1] + 1e-9);
        for (std::size_t i = argmin + 1; i < par.size(); ++i) CHECK(par[i] >= par[i - 1] - 1e-9);
    }
}
