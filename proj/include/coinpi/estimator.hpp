#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "coinpi/walk_sim.hpp"

namespace coinpi {

enum class Method { Walk, Direct };

std::string method_name(Method method);

enum class BudgetKind { Trials, Flips };

struct BudgetSpec {
    BudgetKind kind = BudgetKind::Trials;
    std::uint64_t amount = 0;
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    Method method = Method::Walk;
    std::uint64_t cap = (std::uint64_t{1} << 24) - 1; // walk step limit
    BudgetSpec budget;
    // Attempt i draws from substream stream_base + i. Callers running
    // several estimates off one seed give each a base at least 2^32
    // apart; a single run never uses 2^32 attempts.
    std::uint64_t stream_base = 0;
};

// Single-pass moments plus flip accounting. Updates are streamed in
// attempt order; merge() combines two summaries by the pairwise moment
// rule. Censored and discarded attempts never touch the moments, only
// the accounting, so the estimate is a mean over completed trials.
//
// Exact invariant: flips_used() = flips_completed + censored_flips +
// discarded_flips, all integers.
class EstimateSummary {
public:
    // Completed trial. Rejects censored trials; route those through
    // note_censored so they cannot bias the mean.
    void stream_update(const Trial& trial);

    void note_censored(std::uint64_t flips);
    void note_discarded(std::uint64_t flips);

    // Pairwise combination: mean and m2 merged by Chan's update, counts
    // added. Safe against self-merge.
    void merge(const EstimateSummary& other);

    std::uint64_t trials() const noexcept { return trials_; }
    std::uint64_t censored_trials() const noexcept { return censored_trials_; }
    std::uint64_t attempts() const noexcept { return trials_ + censored_trials_; }
    std::uint64_t flips_completed() const noexcept { return flips_completed_; }
    std::uint64_t censored_flips() const noexcept { return censored_flips_; }
    std::uint64_t discarded_flips() const noexcept { return discarded_flips_; }
    std::uint64_t flips_used() const noexcept {
        return flips_completed_ + censored_flips_ + discarded_flips_;
    }
    std::uint64_t ones_count() const noexcept { return ones_count_; }

    bool has_estimate() const noexcept { return trials_ >= 1; }

    double mean_fraction() const;
    double m2() const noexcept { return m2_; }
    double min_fraction() const;
    double max_fraction() const;

    // Completed-trial counts for tau = 2k+1, k < 9; deeper stopping
    // times are only tracked in aggregate.
    const std::array<std::uint64_t, 9>& tau_small_counts() const noexcept {
        return tau_small_;
    }

    double pi_hat() const;            // 4 * mean_fraction
    double variance_fraction() const; // m2 / (trials - 1), needs trials >= 2
    double stderr_pi() const;         // 4 * sqrt(variance / trials)

    std::string to_json() const;

private:
    std::uint64_t trials_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    std::uint64_t flips_completed_ = 0;
    std::uint64_t censored_trials_ = 0;
    std::uint64_t censored_flips_ = 0;
    std::uint64_t discarded_flips_ = 0;
    std::uint64_t ones_count_ = 0;
    double min_fraction_ = 0.0;
    double max_fraction_ = 0.0;
    std::array<std::uint64_t, 9> tau_small_{};
};

// Parallel estimator. Attempts are numbered 0, 1, 2, ... and attempt i
// always reads substream stream_base + i; workers fill a fixed block of
// attempts in parallel and the block is folded serially in index order.
// The result is therefore a pure function of the config, bit-identical
// across thread counts, and equal to estimate_pi_serial.
//
// Budget semantics: a trials budget counts attempts, censored included.
// A flips budget charges every flip consumed; an attempt still running
// when the budget runs out is discarded (flips counted, estimate
// untouched). Censoring happens only when the full cap was available to
// the attempt; under a flips budget a shortfall is a discard instead.
EstimateSummary estimate_pi(const ExperimentConfig& config);

// Reference implementation: one attempt at a time, no speculation, no
// blocks. Kept as the semantic definition the parallel engine must
// reproduce exactly.
EstimateSummary estimate_pi_serial(const ExperimentConfig& config);

// Needle-drop counterpart of the estimator, for the 2/pi baseline.
class BuffonSummary {
public:
    BuffonSummary(std::uint64_t drops, std::uint64_t crossings,
                  double needle_len, double spacing);

    std::uint64_t drops() const noexcept { return drops_; }
    std::uint64_t crossings() const noexcept { return crossings_; }
    double needle_len() const noexcept { return needle_len_; }
    double spacing() const noexcept { return spacing_; }

    bool has_estimate() const noexcept { return crossings_ >= 1; }
    double frequency() const;        // crossings / drops
    double stderr_frequency() const; // sqrt(p(1-p)/n)
    double pi_hat() const;           // 2 len / (frequency * spacing)

    std::string to_json() const;

private:
    std::uint64_t drops_ = 0;
    std::uint64_t crossings_ = 0;
    double needle_len_ = 1.0;
    double spacing_ = 1.0;
};

// Drop i reads substream stream_base + i; the crossing count is an
// integer sum, so any parallel order gives the same summary.
BuffonSummary run_buffon(std::uint64_t drops, std::uint64_t seed,
                         double needle_len = 1.0, double spacing = 1.0,
                         std::uint64_t stream_base = 0);

} // namespace coinpi
