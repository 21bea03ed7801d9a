#include "coinpi/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace coinpi {

namespace {

constexpr std::uint64_t kTrialsChunk = 4096;

// Speculative block sizes for flips budgets: 64, 128, ..., 8192, then
// flat. Part of the deterministic chunking contract, so never derived
// from the thread count.
std::uint64_t block_size(std::uint64_t block_index) {
    const std::uint64_t shift = block_index < 7 ? block_index : 7;
    return std::uint64_t{64} << shift;
}

void validate(const ExperimentConfig& config) {
    if (config.budget.amount == 0) {
        throw std::invalid_argument("budget must be positive");
    }
    if (config.cap == 0) {
        throw std::invalid_argument("cap must be positive");
    }
}

const TauTable& full_tau_table() {
    static const TauTable table = [] {
        TauTable t;
        t.extend_to(TauTable::kMaxEntries - 1);
        return t;
    }();
    return table;
}

Trial run_attempt(const BitSource& source, const ExperimentConfig& config,
                  std::uint64_t attempt, std::uint64_t limit) {
    BitStream stream = source.stream(config.stream_base + attempt);
    return config.method == Method::Walk
               ? run_trial_walk(stream, limit)
               : run_trial_direct(stream, full_tau_table());
}

// Attempts [first, first + count) computed into indexed slots; the only
// parallel region of the estimator. The fold stays serial and ordered.
void fill_block(const BitSource& source, const ExperimentConfig& config,
                std::uint64_t limit, std::uint64_t first, std::uint64_t count,
                std::vector<Trial>& out) {
    out.resize(count);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(count); ++j) {
        const auto attempt = first + static_cast<std::uint64_t>(j);
        out[static_cast<std::size_t>(j)] =
            run_attempt(source, config, attempt, limit);
    }
}

// Sequential flip-budget semantics applied to one attempt that was run
// with the full speculative limit min(cap, budget). Whether the real,
// possibly smaller, limit would have completed the attempt is decidable
// from the speculative outcome alone, so nothing is re-run. Returns true
// when the budget died mid-attempt.
bool consume(EstimateSummary& summary, const Trial& trial,
             std::uint64_t budget, std::uint64_t cap, std::uint64_t& used) {
    const std::uint64_t remaining = budget - used;
    if (!trial.censored && trial.flips_consumed <= remaining) {
        summary.stream_update(trial);
        used += trial.flips_consumed;
        return false;
    }
    if (trial.censored && remaining >= cap) {
        summary.note_censored(trial.flips_consumed);
        used += trial.flips_consumed;
        return false;
    }
    summary.note_discarded(remaining);
    used = budget;
    return true;
}

EstimateSummary run_trials_budget(const BitSource& source,
                                  const ExperimentConfig& config) {
    const std::uint64_t total = config.budget.amount;
    EstimateSummary summary;
    std::vector<Trial> block;
    for (std::uint64_t first = 0; first < total; first += kTrialsChunk) {
        const std::uint64_t count = std::min(kTrialsChunk, total - first);
        fill_block(source, config, config.cap, first, count, block);
        for (std::uint64_t j = 0; j < count; ++j) {
            const Trial& trial = block[j];
            if (trial.censored) {
                summary.note_censored(trial.flips_consumed);
            } else {
                summary.stream_update(trial);
            }
        }
    }
    return summary;
}

EstimateSummary run_flips_budget(const BitSource& source,
                                 const ExperimentConfig& config) {
    const std::uint64_t budget = config.budget.amount;
    const std::uint64_t speculative_limit = std::min(config.cap, budget);
    EstimateSummary summary;
    std::uint64_t used = 0;
    std::uint64_t attempt = 0;
    std::uint64_t block_index = 0;
    std::vector<Trial> block;
    while (used < budget) {
        const std::uint64_t count = block_size(block_index++);
        fill_block(source, config, speculative_limit, attempt, count, block);
        for (std::uint64_t j = 0; j < count && used < budget; ++j) {
            consume(summary, block[j], budget, config.cap, used);
            ++attempt;
        }
    }
    return summary;
}

} // namespace

std::string method_name(Method method) {
    return method == Method::Walk ? "walk" : "direct";
}

void EstimateSummary::stream_update(const Trial& trial) {
    if (trial.censored) {
        throw std::invalid_argument("censored trial cannot enter the estimate");
    }
    ++trials_;
    const double delta = trial.fraction - mean_;
    mean_ += delta / static_cast<double>(trials_);
    m2_ += delta * (trial.fraction - mean_);
    flips_completed_ += trial.flips_consumed;
    if (trial.fraction == 1.0) ++ones_count_;
    if (trials_ == 1) {
        min_fraction_ = trial.fraction;
        max_fraction_ = trial.fraction;
    } else {
        min_fraction_ = std::min(min_fraction_, trial.fraction);
        max_fraction_ = std::max(max_fraction_, trial.fraction);
    }
    const std::uint64_t k = (trial.tau - 1) / 2;
    if (k < tau_small_.size()) ++tau_small_[k];
}

void EstimateSummary::note_censored(std::uint64_t flips) {
    ++censored_trials_;
    censored_flips_ += flips;
}

void EstimateSummary::note_discarded(std::uint64_t flips) {
    discarded_flips_ += flips;
}

void EstimateSummary::merge(const EstimateSummary& other) {
    const EstimateSummary o = other; // self-merge safety
    const std::uint64_t na = trials_;
    const std::uint64_t nb = o.trials_;
    if (nb > 0) {
        if (na == 0) {
            mean_ = o.mean_;
            m2_ = o.m2_;
            min_fraction_ = o.min_fraction_;
            max_fraction_ = o.max_fraction_;
        } else {
            const std::uint64_t n = na + nb;
            const double delta = o.mean_ - mean_;
            mean_ += delta * (static_cast<double>(nb) / static_cast<double>(n));
            m2_ += o.m2_ + delta * delta *
                               (static_cast<double>(na) *
                                static_cast<double>(nb) /
                                static_cast<double>(n));
            min_fraction_ = std::min(min_fraction_, o.min_fraction_);
            max_fraction_ = std::max(max_fraction_, o.max_fraction_);
        }
    }
    trials_ = na + nb;
    flips_completed_ += o.flips_completed_;
    censored_trials_ += o.censored_trials_;
    censored_flips_ += o.censored_flips_;
    discarded_flips_ += o.discarded_flips_;
    ones_count_ += o.ones_count_;
    for (std::size_t k = 0; k < tau_small_.size(); ++k) {
        tau_small_[k] += o.tau_small_[k];
    }
}

double EstimateSummary::mean_fraction() const {
    if (!has_estimate()) throw std::logic_error("no completed trials");
    return mean_;
}

double EstimateSummary::min_fraction() const {
    if (!has_estimate()) throw std::logic_error("no completed trials");
    return min_fraction_;
}

double EstimateSummary::max_fraction() const {
    if (!has_estimate()) throw std::logic_error("no completed trials");
    return max_fraction_;
}

double EstimateSummary::pi_hat() const { return 4.0 * mean_fraction(); }

double EstimateSummary::variance_fraction() const {
    if (trials_ < 2) throw std::logic_error("variance needs at least 2 trials");
    return m2_ / static_cast<double>(trials_ - 1);
}

double EstimateSummary::stderr_pi() const {
    return 4.0 * std::sqrt(variance_fraction() / static_cast<double>(trials_));
}

std::string EstimateSummary::to_json() const {
    nlohmann::ordered_json j;
    j["trials"] = trials_;
    j["attempts"] = attempts();
    if (has_estimate()) {
        j["mean_fraction"] = mean_;
        j["pi_hat"] = pi_hat();
        j["abs_error"] = std::abs(pi_hat() - std::numbers::pi);
        j["min_fraction"] = min_fraction_;
        j["max_fraction"] = max_fraction_;
    } else {
        j["mean_fraction"] = nullptr;
        j["pi_hat"] = nullptr;
        j["abs_error"] = nullptr;
        j["min_fraction"] = nullptr;
        j["max_fraction"] = nullptr;
    }
    j["stderr_pi"] = trials_ >= 2 ? nlohmann::ordered_json(stderr_pi())
                                  : nlohmann::ordered_json(nullptr);
    j["flips_used"] = flips_used();
    j["flips_completed"] = flips_completed_;
    j["censored_trials"] = censored_trials_;
    j["censored_flips"] = censored_flips_;
    j["discarded_flips"] = discarded_flips_;
    j["ones_count"] = ones_count_;
    j["tau_small_counts"] = tau_small_;
    return j.dump(2);
}

EstimateSummary estimate_pi(const ExperimentConfig& config) {
    validate(config);
    const BitSource source(config.seed);
    return config.budget.kind == BudgetKind::Trials
               ? run_trials_budget(source, config)
               : run_flips_budget(source, config);
}

EstimateSummary estimate_pi_serial(const ExperimentConfig& config) {
    validate(config);
    const BitSource source(config.seed);
    EstimateSummary summary;
    if (config.budget.kind == BudgetKind::Trials) {
        for (std::uint64_t i = 0; i < config.budget.amount; ++i) {
            const Trial trial = run_attempt(source, config, i, config.cap);
            if (trial.censored) {
                summary.note_censored(trial.flips_consumed);
            } else {
                summary.stream_update(trial);
            }
        }
        return summary;
    }
    const std::uint64_t budget = config.budget.amount;
    std::uint64_t used = 0;
    std::uint64_t attempt = 0;
    while (used < budget) {
        const std::uint64_t remaining = budget - used;
        const std::uint64_t limit = std::min(config.cap, remaining);
        const Trial trial = run_attempt(source, config, attempt, limit);
        ++attempt;
        if (!trial.censored && trial.flips_consumed <= remaining) {
            summary.stream_update(trial);
            used += trial.flips_consumed;
        } else if (trial.censored && limit == config.cap) {
            summary.note_censored(trial.flips_consumed);
            used += trial.flips_consumed;
        } else {
            summary.note_discarded(remaining);
            used = budget;
        }
    }
    return summary;
}

BuffonSummary::BuffonSummary(std::uint64_t drops, std::uint64_t crossings,
                             double needle_len, double spacing)
    : drops_(drops), crossings_(crossings), needle_len_(needle_len),
      spacing_(spacing) {}

double BuffonSummary::frequency() const {
    if (drops_ == 0) throw std::logic_error("no drops");
    return static_cast<double>(crossings_) / static_cast<double>(drops_);
}

double BuffonSummary::stderr_frequency() const {
    const double p = frequency();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(drops_));
}

double BuffonSummary::pi_hat() const {
    if (!has_estimate()) throw std::logic_error("no crossings observed");
    return 2.0 * needle_len_ / (frequency() * spacing_);
}

std::string BuffonSummary::to_json() const {
    nlohmann::ordered_json j;
    j["drops"] = drops_;
    j["crossings"] = crossings_;
    j["needle_len"] = needle_len_;
    j["spacing"] = spacing_;
    j["frequency"] = drops_ > 0 ? nlohmann::ordered_json(frequency())
                                : nlohmann::ordered_json(nullptr);
    j["stderr_frequency"] = drops_ > 0
                                ? nlohmann::ordered_json(stderr_frequency())
                                : nlohmann::ordered_json(nullptr);
    if (has_estimate()) {
        j["pi_hat"] = pi_hat();
        j["abs_error"] = std::abs(pi_hat() - std::numbers::pi);
    } else {
        j["pi_hat"] = nullptr;
        j["abs_error"] = nullptr;
    }
    return j.dump(2);
}

BuffonSummary run_buffon(std::uint64_t drops, std::uint64_t seed,
                         double needle_len, double spacing,
                         std::uint64_t stream_base) {
    if (drops == 0) throw std::invalid_argument("drops must be positive");
    if (!(needle_len > 0.0) || !(spacing > 0.0) || needle_len > spacing) {
        throw std::invalid_argument("short-needle case requires 0 < len <= spacing");
    }
    const BitSource source(seed);
    std::uint64_t crossings = 0;
#pragma omp parallel for schedule(static) reduction(+ : crossings)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(drops); ++i) {
        BitStream stream = source.stream(stream_base + static_cast<std::uint64_t>(i));
        if (buffon_trial(stream, needle_len, spacing).crossed) ++crossings;
    }
    return BuffonSummary(drops, crossings, needle_len, spacing);
}

} // namespace coinpi
