#include "coinpi/analytics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace coinpi::analytics {

namespace {

// t_{k+1} / t_k for the arcsine-family series; both pi/4 targets use the
// same expression so the x = 1 identity holds exactly in floating point.
inline double arcsine_ratio(std::uint64_t k, double x2) {
    const double odd = static_cast<double>(2 * k + 1);
    return x2 * ((odd * odd) / ((odd + 1.0) * (odd + 2.0)));
}

// s_{k+1} / s_k for the series sum_k pmf(k)/(2k+1).
inline double inv_tau_ratio(std::uint64_t k) {
    const double odd = static_cast<double>(2 * k + 1);
    return (odd * odd) / ((odd + 2.0) * (odd + 3.0));
}

// C(2k,k) / 4^k for large k: 1/sqrt(pi k) times a 1/k correction series.
// Terms through k^-3 leave a relative error ~k^-4, below double epsilon
// for every k this is used at (k >= 2^17).
inline double central_binomial_ratio_asymptotic(double k) {
    const double inv = 1.0 / k;
    const double correction =
        1.0 + inv * (-0.125 + inv * (0.0078125 + inv * (5.0 / 1024.0)));
    return correction / std::sqrt(std::numbers::pi * k);
}

} // namespace

SeriesIterator::SeriesIterator(SeriesTarget target, double x)
    : target_(target) {
    switch (target_) {
    case SeriesTarget::FractionMean:
        x2_ = 1.0;
        term_ = 0.5;
        break;
    case SeriesTarget::InvTauMean:
        x2_ = 1.0;
        term_ = 0.5;
        break;
    case SeriesTarget::Arcsine:
        if (!(x >= -1.0 && x <= 1.0)) {
            throw std::invalid_argument("arcsine series requires |x| <= 1");
        }
        x2_ = x * x;
        term_ = x;
        break;
    }
}

SeriesState SeriesIterator::next() {
    if (next_k_ > 0) {
        const std::uint64_t k = next_k_ - 1;
        term_ *= (target_ == SeriesTarget::InvTauMean) ? inv_tau_ratio(k)
                                                       : arcsine_ratio(k, x2_);
    }
    sum_.add(term_);
    SeriesState state{next_k_, term_, sum_.value()};
    ++next_k_;
    return state;
}

double tau_pmf(std::uint64_t k) {
    double p = 0.5;
    for (std::uint64_t j = 0; j < k; ++j) {
        const double odd = static_cast<double>(2 * j + 1);
        p *= odd / (odd + 3.0);
    }
    return p;
}

double arcsin_series(double x, std::uint64_t terms) {
    SeriesIterator it(SeriesTarget::Arcsine, x);
    SeriesState state;
    for (std::uint64_t k = 0; k <= terms; ++k) state = it.next();
    return state.partial_sum;
}

double fraction_mean_truncated(std::uint64_t terms) {
    SeriesIterator it(SeriesTarget::FractionMean);
    SeriesState state;
    for (std::uint64_t k = 0; k <= terms; ++k) state = it.next();
    return state.partial_sum;
}

double inv_tau_mean_truncated(std::uint64_t terms) {
    SeriesIterator it(SeriesTarget::InvTauMean);
    SeriesState state;
    for (std::uint64_t k = 0; k <= terms; ++k) state = it.next();
    return state.partial_sum;
}

double fraction_tail_bound(std::uint64_t terms) {
    if (terms == 0) {
        throw std::invalid_argument("fraction_tail_bound requires K >= 1");
    }
    return 0.5 / std::sqrt(std::numbers::pi * static_cast<double>(terms));
}

double inv_tau_tail_bound(std::uint64_t terms, const TauTable& table) {
    return tau_tail(terms, table) / static_cast<double>(2 * terms + 3);
}

double arcsin_tail_bound(double x, std::uint64_t terms) {
    if (!(x >= -1.0 && x <= 1.0)) {
        throw std::invalid_argument("arcsine series requires |x| <= 1");
    }
    const double ax = std::abs(x);
    if (ax == 1.0) return 2.0 * fraction_tail_bound(terms);
    // Term ratios are bounded by x^2, so the remainder is dominated by a
    // geometric series from the first omitted term.
    SeriesIterator it(SeriesTarget::Arcsine, ax);
    SeriesState state;
    for (std::uint64_t k = 0; k <= terms + 1; ++k) state = it.next();
    return state.term / (1.0 - ax * ax);
}

double tau_tail(std::uint64_t k, const TauTable& table) {
    if (table.covers(k)) return 1.0 - table.cdf(k);
    return tau_tail_far(k);
}

double tau_tail_far(std::uint64_t k) {
    // P(tau > 2k+1) = (2k+1) pmf(k); pmf(k) = C(2k,k) / (2 * 4^k * (k+1)).
    const double kd = static_cast<double>(k);
    const double cb = central_binomial_ratio_asymptotic(kd);
    return (2.0 * kd + 1.0) / (2.0 * (kd + 1.0)) * cb;
}

double censor_bias_bound(std::uint64_t cap) {
    if (cap == 0) throw std::invalid_argument("cap must be positive");
    // tau > cap implies tau > 2k+1 with k = floor((cap-1)/2).
    const std::uint64_t k = (cap - 1) / 2;
    if (k >= TauTable::kMaxEntries) return 0.5 * tau_tail_far(k);
    TauTable table;
    table.extend_to(k);
    return 0.5 * (1.0 - table.cdf(k));
}

} // namespace coinpi::analytics
