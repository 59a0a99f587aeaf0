#pragma once

#include "delaycons/errors.hpp"
#include "delaycons/graph.hpp"
#include "delaycons/spectral.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace delaycons {

/// Symmetric feedback matrix with zero row sums whose off-diagonal support is
/// confined to the pattern's edges. Stored as one weight per edge:
/// K(u,v) = K(v,u) = -w_e and K(i,i) = sum of incident weights, so the
/// structural invariants hold for any weight vector.
class GainMatrix {
public:
    GainMatrix() = default;
    GainMatrix(Topology pattern, std::vector<double> edge_weights);

    /// g times the pattern's Laplacian.
    static GainMatrix uniform(Topology pattern, double g);

    [[nodiscard]] int size() const noexcept { return pattern_.n_nodes(); }
    [[nodiscard]] const Topology& pattern() const noexcept { return pattern_; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    [[nodiscard]] std::vector<double> diagonal() const;
    [[nodiscard]] Eigen::MatrixXd dense() const;
    [[nodiscard]] GainMatrix scaled(double factor) const;

    /// out = K x, accumulated edge by edge.
    void apply(std::span<const double> x, std::span<double> out) const;

private:
    Topology pattern_;
    std::vector<double> weights_;
};

Spectrum gain_spectrum(const GainMatrix& k);

/// Every nonzero eigenvalue strictly inside (0, stability_bound(tau)), the zero
/// eigenvalue simple, and no mode within kMarginalTol of the unit circle.
bool is_stable(const Spectrum& spec, int tau);
bool is_stable(const GainMatrix& k, int tau);

enum class Strategy { UniformStandard, UniformOptimal, MultiOptimal };

inline constexpr Strategy kAllStrategies[] = {Strategy::UniformStandard, Strategy::UniformOptimal,
                                              Strategy::MultiOptimal};

std::string_view to_string(Strategy s) noexcept;
/// Accepts the canonical names and the short forms uniform-std / uniform-opt / multi-opt.
std::optional<Strategy> parse_strategy(std::string_view name) noexcept;

struct GainDesign {
    Strategy strategy = Strategy::UniformStandard;
    int tau = 1;
    /// Uniform gain g, or the scaling beta applied to the normalized matrix.
    double scale = 0.0;
    GainMatrix matrix;
    double lambda2 = 0.0;
    double lambda_max = 0.0;
    double ubar = 0.0;
    double rate = 0.0;
    bool stable = false;
    /// lambda_N / lambda_2 of the unscaled matrix.
    double eigen_ratio = 0.0;
    /// Stage-(a) iterations; zero for the uniform strategies.
    int iterations = 0;
};

/// g = ubar / (2 d_max + 1) on the Laplacian.
GainDesign uniform_standard(const Topology& g, int tau);

/// Uniform gain balancing rho at the extreme Laplacian eigenvalues.
GainDesign uniform_optimal(const Topology& g, int tau);

/// Scaling s in (0, ubar / lambda_hi) with rho(s lambda_lo) = rho(s lambda_hi).
/// Equal eigenvalues place the common value at lambda_th; without a sign change
/// in the feasible interval the clamped endpoint ubar / lambda_hi (1 - 1e-9) is returned.
double bisect_balance(double lambda_lo, double lambda_hi, int tau);

struct StructuredOptions {
    int max_iterations = 5000;
    /// Step length for iteration k is initial_step / k, relative to the weight norm.
    double initial_step = 0.5;
    /// Stop early once the best ratio has not improved for this many iterations.
    int stall_iterations = 400;
};

/// Stage-(a) result: weights with lambda_2 = 1 minimizing lambda_N.
struct NormalizedGains {
    GainMatrix matrix;
    double lambda2 = 0.0;
    double lambda_max = 0.0;
    int iterations = 0;
};

/// Raised when the structured optimizer cannot certify its iterate.
class OptimizerError : public NumericalError {
public:
    OptimizerError(const std::string& what, std::vector<double> best_weights, double lambda2, double lambda_max)
        : NumericalError(what), best_weights(std::move(best_weights)), lambda2(lambda2), lambda_max(lambda_max) {}

    std::vector<double> best_weights;
    double lambda2;
    double lambda_max;
};

/// Minimizes lambda_N / lambda_2 over edge weights by projected subgradient,
/// starting from unit weights, then rescales so lambda_2 = 1.
NormalizedGains minimize_eigen_ratio(const Topology& g, const StructuredOptions& opts = {});

/// Per-edge weights from minimize_eigen_ratio, scaled by the balancing beta.
GainDesign optimize_structured(const Topology& g, int tau, const StructuredOptions& opts = {});

GainDesign design_gains(const Topology& g, int tau, Strategy strategy);

} // namespace delaycons
