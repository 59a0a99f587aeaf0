#include "delaycons/sweep.hpp"

#include "delaycons/errors.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <fstream>
#include <sstream>

namespace delaycons {

DelayModel DelayModel::table(std::vector<int> taus) {
    if (taus.empty()) throw InputError("delay table is empty");
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (taus[i] < 1) throw InputError("delay table entries must be >= 1");
        if (i > 0 && taus[i] <= taus[i - 1]) {
            throw InputError("delay table must be strictly increasing (entry " + std::to_string(i + 1) + ")");
        }
    }
    return DelayModel(Kind::Table, std::move(taus));
}

DelayModel DelayModel::constant(int tau) {
    if (tau < 1) throw InputError("constant delay must be >= 1");
    return DelayModel(Kind::Constant, {tau});
}

DelayModel DelayModel::parse(const std::string& text) {
    if (text == "linear") return linear();
    if (text == "quadratic") return quadratic();
    const std::string prefix = "table:";
    if (text.rfind(prefix, 0) == 0) {
        const std::string path = text.substr(prefix.size());
        std::ifstream in(path);
        if (!in) throw InputError("cannot open delay table " + path);
        std::vector<int> taus;
        std::string line;
        while (std::getline(in, line)) {
            if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
            std::istringstream fields(line);
            std::string token;
            while (fields >> token) {
                std::size_t used = 0;
                int value = 0;
                try {
                    value = std::stoi(token, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != token.size()) throw InputError("bad delay table entry '" + token + "'");
                taus.push_back(value);
            }
        }
        return table(std::move(taus));
    }
    throw InputError("unknown delay model '" + text + "' (expected linear, quadratic or table:<path>)");
}

int DelayModel::tau(int hops) const {
    if (hops < 1) throw InputError("hop count must be >= 1");
    switch (kind_) {
        case Kind::Linear: return hops;
        case Kind::Quadratic: return hops * hops;
        case Kind::Constant: return values_.front();
        case Kind::Table:
            if (static_cast<std::size_t>(hops) > values_.size()) {
                throw InputError("delay table has no entry for n=" + std::to_string(hops));
            }
            return values_[static_cast<std::size_t>(hops - 1)];
    }
    return 0;
}

std::string DelayModel::describe() const {
    switch (kind_) {
        case Kind::Linear: return "linear";
        case Kind::Quadratic: return "quadratic";
        case Kind::Constant: return "constant:" + std::to_string(values_.front());
        case Kind::Table: {
            std::string s = "table:";
            for (std::size_t i = 0; i < values_.size(); ++i) s += (i ? "," : "") + std::to_string(values_[i]);
            return s;
        }
    }
    return {};
}

const RateReport* SweepResult::best_report(std::size_t strategy_index) const {
    const auto& best = best_hops.at(strategy_index);
    if (!best) return nullptr;
    for (const auto& r : reports) {
        if (r.hops == *best && r.strategy == strategies[strategy_index]) return &r;
    }
    return nullptr;
}

RateReport make_report(int hops, const GainDesign& design) {
    RateReport r;
    r.hops = hops;
    r.tau = design.tau;
    r.strategy = design.strategy;
    r.scale = design.scale;
    r.lambda2 = design.lambda2;
    r.lambda_max = design.lambda_max;
    r.ubar = design.ubar;
    r.stable = design.stable;
    r.rate = design.rate;
    return r;
}

namespace {

int hop_limit(int diameter, bool include_complete) {
    return include_complete ? diameter : std::max(1, diameter - 1);
}

RateReport evaluate_cell(const Topology& closure, int hops, const DelayModel& delays, Strategy strategy) {
    return make_report(hops, design_gains(closure, delays.tau(hops), strategy));
}

void check_sweep_input(const Topology& base, const std::vector<Strategy>& strategies) {
    if (strategies.empty()) throw InputError("at least one strategy is required");
    if (!base.is_connected()) throw InputError("sweep requires a connected base graph");
    if (base.n_nodes() < 2) throw InputError("sweep requires at least two nodes");
}

void select_best(SweepResult& result) {
    result.best_hops.assign(result.strategies.size(), std::nullopt);
    for (std::size_t s = 0; s < result.strategies.size(); ++s) {
        double best_rate = 0.0;
        for (const auto& r : result.reports) {
            if (r.strategy != result.strategies[s] || !r.stable) continue;
            if (!result.best_hops[s] || r.rate < best_rate) {
                result.best_hops[s] = r.hops;
                best_rate = r.rate;
            }
        }
    }
}

} // namespace

RateReport rate_point(const Topology& base, int hops, const DelayModel& delays, Strategy strategy) {
    const int diameter = max_hop(base);
    if (hops < 1 || hops > diameter) {
        throw InputError("hop count " + std::to_string(hops) + " outside [1, " + std::to_string(diameter) + "]");
    }
    return evaluate_cell(hop_closure(base, hops), hops, delays, strategy);
}

SweepResult sweep_serial(const Topology& base, const DelayModel& delays, const std::vector<Strategy>& strategies,
                         bool include_complete) {
    check_sweep_input(base, strategies);
    SweepResult result;
    result.strategies = strategies;
    const int limit = hop_limit(max_hop(base), include_complete);
    for (int n = 1; n <= limit; ++n) {
        const Topology closure = hop_closure(base, n);
        for (Strategy s : strategies) result.reports.push_back(evaluate_cell(closure, n, delays, s));
    }
    select_best(result);
    return result;
}

SweepResult sweep(const Topology& base, const DelayModel& delays, const std::vector<Strategy>& strategies,
                  const SweepOptions& opts) {
    check_sweep_input(base, strategies);
    SweepResult result;
    result.strategies = strategies;
    const int limit = hop_limit(max_hop(base), opts.include_complete);

    std::vector<Topology> closures;
    closures.reserve(static_cast<std::size_t>(limit));
    for (int n = 1; n <= limit; ++n) closures.push_back(hop_closure(base, n));

    const auto per_hop = static_cast<long long>(strategies.size());
    const long long cells = per_hop * limit;
    result.reports.resize(static_cast<std::size_t>(cells));
    std::exception_ptr failure;
    const int threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();

    // Each cell writes only its own slot, so the output ordering is fixed.
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (threads != 1)
    for (long long c = 0; c < cells; ++c) {
        const int n = static_cast<int>(c / per_hop) + 1;
        const Strategy s = strategies[static_cast<std::size_t>(c % per_hop)];
        try {
            result.reports[static_cast<std::size_t>(c)] = evaluate_cell(closures[n - 1], n, delays, s);
        } catch (...) {
#pragma omp critical(delaycons_sweep)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    select_best(result);
    return result;
}

} // namespace delaycons
