#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

// Ground truth by exhaustion: classify every coin sequence of bounded
// length by its first-passage time and report exact-rational statistics.
// Nothing here shares arithmetic with the analytics module, so agreement
// between the two is evidence, not tautology.
namespace coinpi::oracle {

enum class EnumerationMode {
    PrunedParallel, // prefix-tree walk, subtrees split across threads
    PrunedSerial,   // same tree, one thread
    BruteForce,     // all 2^L sequences; feasible to L = 15, checks the tree
};

struct OracleReport {
    std::uint64_t max_len = 0;        // L, odd
    std::vector<mpz_class> counts;    // counts[k] = first-passage paths of
                                      // length 2k+1, k <= (L-1)/2
    mpq_class truncated_fraction_mean;
    mpq_class truncated_inv_tau_mean;
    mpq_class mass_accounted;         // sum of counts[k] / 2^(2k+1)

    // Counts as decimal strings, rationals as "p/q" strings.
    std::string to_json() const;
};

// Every first-passage path of length <= L, counted once: the prefix tree
// is pruned the moment the walk goes positive, so each path is a leaf.
// L must be odd and at most 25 (BruteForce: at most 15).
OracleReport enumerate_first_passage(
    std::uint64_t max_len,
    EnumerationMode mode = EnumerationMode::PrunedParallel);

struct AnalyticsComparison {
    bool exact_match = false;      // all exact-rational equalities hold
    double fraction_residual = 0.0;
    double inv_tau_residual = 0.0;
    std::vector<double> pmf_residuals; // per-k |float pmf - exact pmf|
};

// Exact-rational equality of the oracle report against the exact module
// (Catalan counts, truncated means, accounted mass and its complement),
// plus float residuals against the double-precision analytics.
AnalyticsComparison oracle_vs_analytics(std::uint64_t max_len);

// Throws unless max_len is odd, positive, and within the enumeration cap.
void validate_length(std::uint64_t max_len);

namespace detail {

template <class Fn>
void visit_paths(std::uint64_t bits, std::uint64_t depth, std::int64_t position,
                 std::uint64_t max_len, Fn& fn) {
    if (depth == max_len) return;
    const std::uint64_t with_head = bits | (std::uint64_t{1} << depth);
    if (position + 1 > 0) {
        fn(with_head, depth + 1);
    } else {
        visit_paths(with_head, depth + 1, position + 1, max_len, fn);
    }
    visit_paths(bits, depth + 1, position - 1, max_len, fn);
}

} // namespace detail

// Replays every first-passage path of length <= L through fn(bits, len):
// bit i of `bits` is flip i+1, set for heads. Enumeration order is fixed
// (heads branch before tails at every node).
template <class Fn>
void for_each_first_passage_path(std::uint64_t max_len, Fn&& fn) {
    validate_length(max_len);
    Fn& ref = fn;
    detail::visit_paths(0, 0, 0, max_len, ref);
}

} // namespace coinpi::oracle
