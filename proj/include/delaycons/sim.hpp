#pragma once

#include "delaycons/gains.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace delaycons {

/// States x(0..horizon) of x(k+1) = x(k) - K x(k - tau) with x(k) = x(0) for k <= 0.
struct Trajectory {
    int tau = 0;
    std::vector<std::vector<double>> states;

    [[nodiscard]] int horizon() const noexcept { return static_cast<int>(states.size()) - 1; }
    [[nodiscard]] double initial_average() const;
    /// Euclidean norm of x(k) minus the initial average.
    [[nodiscard]] std::vector<double> disagreement() const;
};

/// Requires horizon >= tau + 2 and x0 sized to K.
Trajectory simulate(const GainMatrix& k, int tau, std::span<const double> x0, int horizon);

/// Raised when the disagreement is too small over the fit window to estimate a rate.
class InsufficientSignal : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Disagreement below this fraction of its initial value is treated as converged.
inline constexpr double kSignalFloor = 1e-13;

/// exp of the least-squares slope of log disagreement over [burn_in, horizon].
/// When the signal falls under kSignalFloor inside the window, the window is
/// shrunk to the second half of the usable prefix.
double empirical_rate(const Trajectory& traj, int burn_in);

/// Seeded standard-normal state whose centered part projects onto the
/// eigenvectors of K's extreme nonzero eigenvalues (resampled up to 10 times).
std::vector<double> generic_initial_state(const GainMatrix& k, std::uint64_t seed);

} // namespace delaycons
