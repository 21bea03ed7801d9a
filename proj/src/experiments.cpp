#include "coinpi/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace coinpi {

namespace {

RepRecord run_rep(std::uint64_t run_id, std::uint64_t seed,
                  std::uint64_t budget_flips) {
    ExperimentConfig config;
    config.seed = seed;
    config.method = Method::Walk;
    config.budget = BudgetSpec{BudgetKind::Flips, budget_flips};
    config.stream_base = (run_id + 1) << 32;
    const EstimateSummary summary = estimate_pi(config);

    RepRecord record;
    record.run_id = run_id;
    record.method = config.method;
    record.seed = seed;
    record.budget_flips = budget_flips;
    record.trials = summary.trials();
    record.censored = summary.censored_trials();
    record.has_estimate = summary.has_estimate();
    if (record.has_estimate) {
        record.pi_hat = summary.pi_hat();
        record.abs_error = std::abs(record.pi_hat - std::numbers::pi);
    }
    return record;
}

std::vector<double> sorted_abs_errors(const std::vector<RepRecord>& records,
                                      std::uint64_t budget_flips) {
    std::vector<double> errors;
    for (const RepRecord& r : records) {
        if (r.budget_flips == budget_flips && r.has_estimate) {
            errors.push_back(r.abs_error);
        }
    }
    std::sort(errors.begin(), errors.end());
    return errors;
}

} // namespace

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("quantile level must lie in [0, 1]");
    }
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

ConvergenceResult convergence_experiment(
    const std::vector<std::uint64_t>& budgets, std::uint64_t reps,
    std::uint64_t seed) {
    if (budgets.empty()) throw std::invalid_argument("budgets must be nonempty");
    if (!std::is_sorted(budgets.begin(), budgets.end()) ||
        std::adjacent_find(budgets.begin(), budgets.end()) != budgets.end()) {
        throw std::invalid_argument("budgets must be strictly increasing");
    }
    if (budgets.front() == 0) {
        throw std::invalid_argument("budgets must be positive");
    }
    if (reps == 0) throw std::invalid_argument("reps must be positive");

    ConvergenceResult result;
    for (std::size_t b = 0; b < budgets.size(); ++b) {
        for (std::uint64_t r = 0; r < reps; ++r) {
            const std::uint64_t run_id = b * reps + r;
            result.records.push_back(run_rep(run_id, seed, budgets[b]));
        }
    }

    for (const std::uint64_t budget : budgets) {
        const std::vector<double> errors =
            sorted_abs_errors(result.records, budget);
        BudgetRow row;
        row.budget_flips = budget;
        row.usable_reps = errors.size();
        if (!errors.empty()) row.median_abs_error = quantile_sorted(errors, 0.5);
        result.rows.push_back(row);
    }

    // Least squares on (log N, log median error); rows with no usable
    // reps or an exactly-zero median carry no information for the fit.
    std::vector<double> xs;
    std::vector<double> ys;
    for (const BudgetRow& row : result.rows) {
        if (row.usable_reps == 0 || row.median_abs_error <= 0.0) continue;
        xs.push_back(std::log(static_cast<double>(row.budget_flips)));
        ys.push_back(std::log(row.median_abs_error));
    }
    result.fit_ok = xs.size() >= 2;
    if (result.fit_ok) {
        const auto n = static_cast<double>(xs.size());
        double mx = 0.0;
        double my = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= n;
        my /= n;
        double sxx = 0.0;
        double sxy = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        result.slope = sxy / sxx;
        result.intercept = my - result.slope * mx;
    }
    return result;
}

ParkerResult parker_replication(std::uint64_t reps, std::uint64_t seed) {
    if (reps < 100) {
        throw std::invalid_argument("replication needs at least 100 reps");
    }
    constexpr std::uint64_t kBudget = 10000;

    ParkerResult result;
    for (std::uint64_t r = 0; r < reps; ++r) {
        result.records.push_back(run_rep(r, seed, kBudget));
    }
    const std::vector<double> errors =
        sorted_abs_errors(result.records, kBudget);
    result.usable_reps = errors.size();
    if (errors.empty()) return result;

    result.median_abs_error = quantile_sorted(errors, 0.5);
    result.q25_abs_error = quantile_sorted(errors, 0.25);
    result.q75_abs_error = quantile_sorted(errors, 0.75);

    const double target = std::abs(kTenThousandFlipEstimate - std::numbers::pi);
    const auto at_most = static_cast<double>(std::count_if(
        errors.begin(), errors.end(),
        [target](double e) { return e <= target; }));
    result.target_quantile = at_most / static_cast<double>(errors.size());
    return result;
}

BoundsResult bounds_demonstration(std::uint64_t trials, std::uint64_t seed,
                                  Method method) {
    if (trials < 100000) {
        throw std::invalid_argument("bounds demonstration needs >= 10^5 trials");
    }
    ExperimentConfig config;
    config.seed = seed;
    config.method = method;
    config.budget = BudgetSpec{BudgetKind::Trials, trials};

    BoundsResult result;
    result.summary = estimate_pi(config);
    const auto n = static_cast<double>(result.summary.trials());
    const double p = static_cast<double>(result.summary.ones_count()) / n;
    result.ones_frequency = p;
    result.ones_stderr = std::sqrt(p * (1.0 - p) / n);
    const double center = result.summary.pi_hat();
    const double half_width = 4.0 * result.summary.stderr_pi();
    result.band_low = center - half_width;
    result.band_high = center + half_width;
    result.band_inside_3_4 = result.band_low > 3.0 && result.band_high < 4.0;
    return result;
}

} // namespace coinpi
