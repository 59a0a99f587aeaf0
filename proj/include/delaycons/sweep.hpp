#pragma once

#include "delaycons/gains.hpp"
#include "delaycons/graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace delaycons {

/// Hop count to feedback delay, tau_n = f(n).
class DelayModel {
public:
    enum class Kind { Linear, Quadratic, Table, Constant };

    static DelayModel linear() { return DelayModel(Kind::Linear, {}); }
    static DelayModel quadratic() { return DelayModel(Kind::Quadratic, {}); }
    /// tau_1, tau_2, ... ; entries must be >= 1 and strictly increasing.
    static DelayModel table(std::vector<int> taus);
    /// Same delay for every n. Violates the increasing requirement on purpose;
    /// only meant for baseline comparisons in tests.
    static DelayModel constant(int tau);

    /// Parses "linear", "quadratic" or "table:<path>".
    static DelayModel parse(const std::string& text);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] int tau(int hops) const;
    [[nodiscard]] std::string describe() const;

private:
    DelayModel(Kind kind, std::vector<int> values) : kind_(kind), values_(std::move(values)) {}

    Kind kind_;
    std::vector<int> values_;
};

struct RateReport {
    int hops = 0;
    int tau = 0;
    Strategy strategy = Strategy::UniformStandard;
    double scale = 0.0;
    double lambda2 = 0.0;
    double lambda_max = 0.0;
    double ubar = 0.0;
    bool stable = false;
    double rate = 0.0;

    friend bool operator==(const RateReport&, const RateReport&) = default;
};

struct SweepResult {
    std::vector<Strategy> strategies;
    /// Ordered by hop count, then by position in `strategies`.
    std::vector<RateReport> reports;
    /// Per strategy (same order): minimizing hop count among stable cells, ties
    /// to the smaller n; empty when every cell is unstable.
    std::vector<std::optional<int>> best_hops;
    std::string base_descriptor;
    std::uint64_t seed = 0;

    [[nodiscard]] const RateReport* best_report(std::size_t strategy_index) const;
};

RateReport make_report(int hops, const GainDesign& design);

/// One sweep cell. Rejects hops outside [1, max_hop(base)].
RateReport rate_point(const Topology& base, int hops, const DelayModel& delays, Strategy strategy);

struct SweepOptions {
    bool include_complete = true;
    /// Zero keeps the OpenMP default.
    int threads = 0;
};

/// Cells evaluated in parallel; output is independent of the thread count.
SweepResult sweep(const Topology& base, const DelayModel& delays, const std::vector<Strategy>& strategies,
                  const SweepOptions& opts = {});

/// Serial reference for sweep.
SweepResult sweep_serial(const Topology& base, const DelayModel& delays, const std::vector<Strategy>& strategies,
                         bool include_complete = true);

} // namespace delaycons
