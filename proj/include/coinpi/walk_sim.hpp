#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>

#include "coinpi/bit_source.hpp"
#include "coinpi/tau_table.hpp"

namespace coinpi {

// Outcome of one stopping-rule attempt. tau, heads and fraction are
// meaningful only when censored is false; flips_consumed is always the
// number of coin flips the attempt cost (tau on completion, the limit
// otherwise).
struct Trial {
    std::uint64_t tau = 0;
    std::uint64_t heads = 0;
    double fraction = 0.0;
    bool censored = false;
    std::uint64_t flips_consumed = 0;
};

// One needle throw for the crossing-probability estimator: offset of the
// needle center from the nearest line in [0, spacing/2], acute angle to
// the lines in [0, pi/2]. Offset is drawn before angle.
struct NeedleDrop {
    double center_offset = 0.0;
    double angle = 0.0;
    bool crossed = false;
};

// Toss until heads lead tails, or until `limit` flips are spent. The walk
// position is heads minus tails; the rule stops at the first flip where
// it is positive, which can only happen at an odd flip count.
//
// Works on any stream with next_bit(); the BitStream overload below is
// the one production code uses.
template <class Stream>
Trial run_trial_walk(Stream& stream, std::uint64_t limit) {
    if (limit == 0) throw std::invalid_argument("walk limit must be positive");
    std::int64_t position = 0;
    std::uint64_t heads = 0;
    std::uint64_t flips = 0;
    while (flips < limit) {
        if (stream.next_bit()) {
            ++heads;
            ++position;
        } else {
            --position;
        }
        ++flips;
        if (position > 0) {
            const double fraction =
                static_cast<double>(heads) / static_cast<double>(flips);
            return Trial{flips, heads, fraction, false, flips};
        }
    }
    return Trial{0, heads, 0.0, true, limit};
}

// Same walk, same bit sequence, with a bulk step: once the position is 63
// or more below zero, no prefix of the next 63 flips can reach +1, so a
// whole word of bits can be consumed at once and scored by popcount.
// Deep excursions dominate long trials, so this is where the time goes.
inline Trial run_trial_walk(BitStream& stream, std::uint64_t limit) {
    if (limit == 0) throw std::invalid_argument("walk limit must be positive");
    std::int64_t position = 0;
    std::uint64_t heads = 0;
    std::uint64_t flips = 0;
    while (flips < limit) {
        if (position <= -63 && limit - flips >= 63) {
            const std::uint64_t word = stream.next_bits(63);
            const int up = std::popcount(word);
            heads += static_cast<std::uint64_t>(up);
            position += 2 * up - 63;
            flips += 63;
            continue;
        }
        if (stream.next_bit()) {
            ++heads;
            ++position;
        } else {
            --position;
        }
        ++flips;
        if (position > 0) {
            const double fraction =
                static_cast<double>(heads) / static_cast<double>(flips);
            return Trial{flips, heads, fraction, false, flips};
        }
    }
    return Trial{0, heads, 0.0, true, limit};
}

// Inverse-CDF draw of the stopping time: the smallest k with u < cdf(k),
// reported as tau = 2k+1. Inside the table this is a binary search; past
// its end the closed-form tail takes over, so arbitrarily deep quantiles
// resolve in O(log k) with no table growth. Draws beyond k = 2^62 are
// clamped there (probability under 1e-9 per draw). The table should be
// extended to its full size for the far branch to line up with the cdf.
std::uint64_t sample_tau_direct(double u, const TauTable& table);

// The completed trial a stop at `tau` determines: heads = (tau+1)/2 and
// fraction = heads/tau, kept strictly inside (1/2, 1] even where the
// quotient would round down to 1/2 (tau past ~2e16). Requires odd tau.
Trial trial_from_tau(std::uint64_t tau);

// One attempt by direct draw: consumes one uniform, never censors, and
// accounts tau flips. Heads at passage is determined by tau alone.
Trial run_trial_direct(BitStream& stream, const TauTable& table);

// One needle throw. Requires 0 < needle_len <= spacing (the short-needle
// case, where P(cross) = 2 len / (pi spacing)).
NeedleDrop buffon_trial(BitStream& stream, double needle_len,
                        double spacing);

} // namespace coinpi
