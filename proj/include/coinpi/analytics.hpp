#pragma once

#include <cstdint>

#include "coinpi/summation.hpp"
#include "coinpi/tau_table.hpp"

// Closed-form side of the estimator: the stopping-time pmf, the truncated
// series for E[H_tau/tau] (limit pi/4) and E[1/tau] (limit pi/2 - 1), the
// arcsine power series they both reduce to, and rigorous truncation bounds.
namespace coinpi::analytics {

enum class SeriesTarget {
    FractionMean, // sum_k (1/2) 4^{-k} C(2k,k) / (2k+1)      -> pi/4
    InvTauMean,   // sum_k pmf(k) / (2k+1)                    -> pi/2 - 1
    Arcsine,      // sum_n 4^{-n} C(2n,n) x^{2n+1} / (2n+1)   -> arcsin(x)
};

struct SeriesState {
    std::uint64_t k = 0;
    double term = 0.0;
    double partial_sum = 0.0;
};

// Emits successive partial sums of one of the three series, advancing the
// term by a multiplicative ratio (O(1) work per term, no binomials).
// FractionMean and Arcsine(x=1) share the same ratio expression, so their
// partial sums satisfy arcsin(1)-series = 2 * fraction-series bitwise.
class SeriesIterator {
public:
    explicit SeriesIterator(SeriesTarget target, double x = 1.0);

    // State for the next k (first call returns k = 0).
    SeriesState next();

private:
    SeriesTarget target_;
    double x2_;
    std::uint64_t next_k_ = 0;
    double term_;
    NeumaierSum sum_;
};

// P(tau = 2k+1) by the ratio recurrence. O(k); use TauTable for bulk work.
double tau_pmf(std::uint64_t k);

// Partial sum of the arcsine power series through n = K. |x| <= 1.
double arcsin_series(double x, std::uint64_t terms);

// Partial sum whose limit is pi/4.
double fraction_mean_truncated(std::uint64_t terms);

// Partial sum whose limit is pi/2 - 1.
double inv_tau_mean_truncated(std::uint64_t terms);

// Proven bound on the fraction-series remainder: pi/4 minus the partial
// sum through K is at most 1/(2 sqrt(pi K)). Requires K >= 1.
double fraction_tail_bound(std::uint64_t terms);

// Remainder bound for the 1/tau series: tail(K) / (2K+3).
double inv_tau_tail_bound(std::uint64_t terms, const TauTable& table);

// Remainder bound for the arcsine series at |x| < 1 (geometric); at x = 1
// falls back to the fraction-series bound doubled.
double arcsin_tail_bound(double x, std::uint64_t terms);

// P(tau > 2k+1) = 1 - cdf(k), from the table where covered, else from the
// closed-form tail identity P(tau > 2k+1) = (2k+1) pmf(k) evaluated via
// the central-binomial asymptotic (exact to double precision for k beyond
// any table this code keeps).
double tau_tail(std::uint64_t k, const TauTable& table);

// Closed-form far tail; intended for k >= TauTable::kMaxEntries.
double tau_tail_far(std::uint64_t k);

// One-sided bound used for censoring accounting: excluding trials with
// tau > cap biases the mean fraction by at most P(tau > cap) / 2.
double censor_bias_bound(std::uint64_t cap);

} // namespace coinpi::analytics
