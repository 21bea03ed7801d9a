#pragma once

#include <cstdint>
#include <vector>

#include "coinpi/estimator.hpp"

namespace coinpi {

// The historical 10,000-flip estimate the replication experiment is
// checked against; its absolute error is about 0.085.
inline constexpr double kTenThousandFlipEstimate = 3.2266;

// One estimate inside a meta-experiment; carries exactly what a CSV row
// needs. pi_hat and abs_error are meaningful only when has_estimate (a
// flip budget can die before any trial completes).
struct RepRecord {
    std::uint64_t run_id = 0;
    Method method = Method::Walk;
    std::uint64_t seed = 0;
    std::uint64_t budget_flips = 0;
    std::uint64_t trials = 0;
    std::uint64_t censored = 0;
    bool has_estimate = false;
    double pi_hat = 0.0;
    double abs_error = 0.0;
};

struct BudgetRow {
    std::uint64_t budget_flips = 0;
    std::uint64_t usable_reps = 0; // reps that produced an estimate
    double median_abs_error = 0.0;
};

struct ConvergenceResult {
    std::vector<RepRecord> records;
    std::vector<BudgetRow> rows;
    bool fit_ok = false; // at least 2 budgets with a positive median error
    double slope = 0.0;
    double intercept = 0.0;
};

// For each flip budget, `reps` independent walk-method estimates; per
// budget the median absolute error, then a least-squares fit of
// log(median error) against log(budget). Run r of budget b uses
// stream_base (b*reps + r + 1) << 32 off the one master seed, so records
// are a pure function of (budgets, reps, seed).
ConvergenceResult convergence_experiment(
    const std::vector<std::uint64_t>& budgets, std::uint64_t reps,
    std::uint64_t seed);

struct ParkerResult {
    std::vector<RepRecord> records;
    std::uint64_t usable_reps = 0;
    double median_abs_error = 0.0;
    double q25_abs_error = 0.0;
    double q75_abs_error = 0.0;
    // Fraction of replications whose error is at most the historical
    // estimate's; strictly between 0 and 1 means that error was typical.
    double target_quantile = 0.0;
};

// `reps` independent 10,000-flip walk-method estimates. Requires
// reps >= 100 for the quantile summary to mean anything.
ParkerResult parker_replication(std::uint64_t reps, std::uint64_t seed);

struct BoundsResult {
    EstimateSummary summary;
    double ones_frequency = 0.0; // trials with fraction exactly 1
    double ones_stderr = 0.0;
    double band_low = 0.0;  // 4*mean - 4*stderr_pi
    double band_high = 0.0; // 4*mean + 4*stderr_pi
    bool band_inside_3_4 = false;
};

// Demonstrates the hard range of the estimator at scale: every fraction
// in (1/2, 1], fraction 1 about half the time, and the 4-sigma band of
// 4*mean inside the open interval (3, 4). Requires trials >= 10^5.
BoundsResult bounds_demonstration(std::uint64_t trials, std::uint64_t seed,
                                  Method method = Method::Direct);

// Linear-interpolation quantile of an ascending-sorted sample; q in
// [0, 1]. Exposed for the experiment summaries and their tests.
double quantile_sorted(const std::vector<double>& sorted, double q);

} // namespace coinpi
