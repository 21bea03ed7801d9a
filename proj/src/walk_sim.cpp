#include "coinpi/walk_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coinpi/analytics.hpp"

namespace coinpi {

namespace {

// Clamp for the far-tail inverse; P(tau > 2k+1) here is ~8e-10.
constexpr std::uint64_t kFarClampK = std::uint64_t{1} << 62;

// Smallest k with P(tau > 2k+1) < target, searched over the closed-form
// tail, starting just past the table. Gallop then bisect; the tail falls
// like k^{-1/2}, so the gallop doubles at most ~45 times before the
// clamp.
std::uint64_t solve_far_tail(double target, std::uint64_t table_size) {
    std::uint64_t lo = table_size - 1; // tail(lo) >= target by construction
    std::uint64_t hi = table_size;
    while (analytics::tau_tail_far(hi) >= target) {
        if (hi == kFarClampK) return hi;
        lo = hi;
        hi = hi > kFarClampK / 2 ? kFarClampK : 2 * hi;
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (analytics::tau_tail_far(mid) < target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

} // namespace

std::uint64_t sample_tau_direct(double u, const TauTable& table) {
    if (!(u >= 0.0 && u < 1.0)) {
        throw std::invalid_argument("uniform draw must lie in [0, 1)");
    }
    const auto& cdf = table.cdf_values();
    if (u < cdf.back()) {
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto k = static_cast<std::uint64_t>(it - cdf.begin());
        return 2 * k + 1;
    }
    const std::uint64_t k = solve_far_tail(1.0 - u, table.size());
    return 2 * k + 1;
}

Trial trial_from_tau(std::uint64_t tau) {
    if (tau % 2 == 0) {
        throw std::invalid_argument("stopping time must be odd");
    }
    const std::uint64_t heads = (tau + 1) / 2;
    double fraction = static_cast<double>(heads) / static_cast<double>(tau);
    // Past tau ~ 2e16 the quotient rounds down to exactly 1/2; the true
    // value is strictly above it, and the hard range (1/2, 1] is part of
    // the estimator's contract, so give up one ulp of accuracy instead.
    if (fraction == 0.5) fraction = std::nextafter(0.5, 1.0);
    return Trial{tau, heads, fraction, false, tau};
}

Trial run_trial_direct(BitStream& stream, const TauTable& table) {
    const double u = stream.next_uniform();
    return trial_from_tau(sample_tau_direct(u, table));
}

NeedleDrop buffon_trial(BitStream& stream, double needle_len,
                        double spacing) {
    if (!(needle_len > 0.0) || !(spacing > 0.0)) {
        throw std::invalid_argument("needle length and spacing must be positive");
    }
    if (needle_len > spacing) {
        throw std::invalid_argument("short-needle case requires len <= spacing");
    }
    const double offset = 0.5 * spacing * stream.next_uniform();
    const double angle = 0.5 * std::numbers::pi * stream.next_uniform();
    const bool crossed = offset <= 0.5 * needle_len * std::sin(angle);
    return NeedleDrop{offset, angle, crossed};
}

} // namespace coinpi
