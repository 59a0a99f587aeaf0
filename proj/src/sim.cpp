#include "delaycons/sim.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace delaycons {

double Trajectory::initial_average() const {
    if (states.empty() || states.front().empty()) return 0.0;
    const auto& x0 = states.front();
    return std::accumulate(x0.begin(), x0.end(), 0.0) / static_cast<double>(x0.size());
}

std::vector<double> Trajectory::disagreement() const {
    const double avg = initial_average();
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& x : states) {
        double sq = 0.0;
        for (double v : x) sq += (v - avg) * (v - avg);
        out.push_back(std::sqrt(sq));
    }
    return out;
}

Trajectory simulate(const GainMatrix& k, int tau, std::span<const double> x0, int horizon) {
    if (tau < 0) throw InputError("delay must be >= 0");
    if (horizon < tau + 2) {
        throw InputError("horizon " + std::to_string(horizon) + " shorter than tau + 2 = " + std::to_string(tau + 2));
    }
    if (x0.size() != static_cast<std::size_t>(k.size())) {
        throw InputError("initial state has " + std::to_string(x0.size()) + " entries, gain matrix is " +
                         std::to_string(k.size()) + "x" + std::to_string(k.size()));
    }

    Trajectory traj;
    traj.tau = tau;
    traj.states.reserve(static_cast<std::size_t>(horizon) + 1);
    traj.states.emplace_back(x0.begin(), x0.end());

    // ring[j % (tau + 1)] holds x(j); pre-history is x0.
    const auto slots = static_cast<std::size_t>(tau) + 1;
    std::vector<std::vector<double>> ring(slots, traj.states.front());
    std::vector<double> feedback(x0.size());
    for (int step = 0; step < horizon; ++step) {
        const auto& delayed = ring[static_cast<std::size_t>(step + 1) % slots]; // x(step - tau)
        k.apply(delayed, feedback);
        std::vector<double> next = traj.states.back();
        for (std::size_t i = 0; i < next.size(); ++i) next[i] -= feedback[i];
        ring[static_cast<std::size_t>(step + 1) % slots] = next;
        traj.states.push_back(std::move(next));
    }
    return traj;
}

double empirical_rate(const Trajectory& traj, int burn_in) {
    const int horizon = traj.horizon();
    if (burn_in < 0 || 2 * burn_in >= horizon) throw InputError("burn_in must lie in [0, horizon / 2)");
    const auto dis = traj.disagreement();
    const double floor = kSignalFloor * std::max(1.0, dis.front());

    int last = -1;
    for (int k = horizon; k >= 0; --k) {
        if (dis[static_cast<std::size_t>(k)] > floor) {
            last = k;
            break;
        }
    }
    int first = burn_in;
    constexpr int kMinPoints = 8;
    if (last < first + kMinPoints) {
        first = last / 2;
    }
    if (last < 0 || last - first + 1 < kMinPoints) {
        throw InsufficientSignal("disagreement below " + std::to_string(floor) + " before a usable fit window");
    }

    // Least-squares fit of log d(k) = a + b k over points above the floor.
    double sk = 0.0, sy = 0.0, skk = 0.0, sky = 0.0;
    int count = 0;
    for (int k = first; k <= last; ++k) {
        const double d = dis[static_cast<std::size_t>(k)];
        if (d <= floor) continue;
        const double y = std::log(d);
        sk += k;
        sy += y;
        skk += static_cast<double>(k) * k;
        sky += k * y;
        ++count;
    }
    if (count < kMinPoints) throw InsufficientSignal("too few points above the signal floor");
    bool frozen = true;
    for (int k = first + 1; k <= last && frozen; ++k) frozen = traj.states[k] == traj.states[first];
    if (frozen) throw InsufficientSignal("trajectory is constant over the fit window");
    const double denom = count * skk - sk * sk;
    const double slope = (count * sky - sk * sy) / denom;
    return std::exp(slope);
}

std::vector<double> generic_initial_state(const GainMatrix& k, std::uint64_t seed) {
    const int n = k.size();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k.dense());
    // Skip the structural zero: it is the eigenvalue of smallest magnitude.
    Eigen::Index zero = 0;
    solver.eigenvalues().cwiseAbs().minCoeff(&zero);
    const Eigen::Index lo = zero == 0 ? 1 : 0;
    const Eigen::Index hi = zero == n - 1 ? n - 2 : n - 1;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd x(n);
    for (int attempt = 0; attempt < 10; ++attempt) {
        for (int i = 0; i < n; ++i) x(i) = normal(rng);
        Eigen::VectorXd centered = x.array() - x.mean();
        const double scale = centered.norm();
        const double p_lo = std::abs(solver.eigenvectors().col(lo).dot(centered));
        const double p_hi = std::abs(solver.eigenvectors().col(hi).dot(centered));
        if (scale > 0.0 && p_lo > 1e-3 * scale && p_hi > 1e-3 * scale) break;
    }
    return {x.data(), x.data() + n};
}

} // namespace delaycons
