#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "coinpi/bit_source.hpp"
#include "coinpi/estimator.hpp"

using namespace coinpi;

namespace {

Trial completed(std::uint64_t tau) {
    const std::uint64_t heads = (tau + 1) / 2;
    return Trial{tau, heads,
                 static_cast<double>(heads) / static_cast<double>(tau), false,
                 tau};
}

std::vector<Trial> random_trials(std::size_t n, unsigned rng_seed) {
    std::mt19937_64 rng(rng_seed);
    std::uniform_int_distribution<std::uint64_t> pick_k(0, 40);
    std::vector<Trial> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(completed(2 * pick_k(rng) + 1));
    return out;
}

} // namespace

TEST_CASE("streaming two worked trials gives the hand-computed summary") {
    EstimateSummary s;
    CHECK_FALSE(s.has_estimate());
    CHECK_THROWS_AS(s.mean_fraction(), std::logic_error);
    CHECK_THROWS_AS(s.min_fraction(), std::logic_error);

    s.stream_update(Trial{1, 1, 1.0, false, 1});
    CHECK(s.trials() == 1);
    CHECK(s.mean_fraction() == 1.0);
    CHECK(s.pi_hat() == 4.0);
    CHECK(s.ones_count() == 1);
    CHECK_THROWS_AS(s.variance_fraction(), std::logic_error);

    s.stream_update(Trial{5, 3, 0.6, false, 5});
    CHECK(s.trials() == 2);
    CHECK(s.mean_fraction() == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(s.pi_hat() == doctest::Approx(3.2).epsilon(1e-15));
    // m2 = (1 - 0.8)^2 + (0.6 - 0.8)^2 = 0.08, so var = 0.08 and
    // stderr_pi = 4 sqrt(0.08 / 2) = 0.8.
    CHECK(s.variance_fraction() == doctest::Approx(0.08).epsilon(1e-12));
    CHECK(s.stderr_pi() == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(s.min_fraction() == 0.6);
    CHECK(s.max_fraction() == 1.0);
    CHECK(s.flips_completed() == 6);
    CHECK(s.flips_used() == 6);
    CHECK(s.tau_small_counts()[0] == 1); // tau = 1
    CHECK(s.tau_small_counts()[2] == 1); // tau = 5
}

TEST_CASE("censored trials are rejected by the moment stream") {
    EstimateSummary s;
    CHECK_THROWS_AS(s.stream_update(Trial{0, 31, 0.0, true, 64}),
                    std::invalid_argument);
    s.note_censored(64);
    s.note_discarded(10);
    CHECK(s.trials() == 0);
    CHECK(s.censored_trials() == 1);
    CHECK(s.censored_flips() == 64);
    CHECK(s.discarded_flips() == 10);
    CHECK(s.flips_used() == 74);
    CHECK_FALSE(s.has_estimate());
}

TEST_CASE("merge: identity, self, split, and permutation") {
    const std::vector<Trial> trials = random_trials(600, 101);

    EstimateSummary whole;
    for (const Trial& t : trials) whole.stream_update(t);
    whole.note_censored(50);

    SUBCASE("merging an empty summary changes nothing") {
        EstimateSummary a = whole;
        a.merge(EstimateSummary{});
        CHECK(a.mean_fraction() == whole.mean_fraction());
        CHECK(a.m2() == whole.m2());
        CHECK(a.trials() == whole.trials());

        EstimateSummary empty;
        empty.merge(whole);
        CHECK(empty.mean_fraction() == whole.mean_fraction());
        CHECK(empty.m2() == whole.m2());
        CHECK(empty.min_fraction() == whole.min_fraction());
        CHECK(empty.max_fraction() == whole.max_fraction());
        CHECK(empty.censored_flips() == 50);
    }

    SUBCASE("self-merge doubles counts and keeps the mean") {
        EstimateSummary a = whole;
        a.merge(a);
        CHECK(a.trials() == 2 * whole.trials());
        CHECK(a.mean_fraction() ==
              doctest::Approx(whole.mean_fraction()).epsilon(1e-15));
        CHECK(a.m2() == doctest::Approx(2.0 * whole.m2()).epsilon(1e-12));
        CHECK(a.censored_flips() == 100);
    }

    SUBCASE("split-and-merge tracks the single stream") {
        EstimateSummary left;
        EstimateSummary right;
        for (std::size_t i = 0; i < trials.size(); ++i) {
            (i < 251 ? left : right).stream_update(trials[i]);
        }
        left.merge(right);
        CHECK(left.trials() == whole.trials());
        CHECK(left.mean_fraction() ==
              doctest::Approx(whole.mean_fraction()).epsilon(1e-13));
        CHECK(left.m2() == doctest::Approx(whole.m2()).epsilon(1e-11));
        CHECK(left.min_fraction() == whole.min_fraction());
        CHECK(left.max_fraction() == whole.max_fraction());
        CHECK(left.flips_completed() == whole.flips_completed());
        for (std::size_t k = 0; k < 9; ++k) {
            CHECK(left.tau_small_counts()[k] == whole.tau_small_counts()[k]);
        }
    }

    SUBCASE("permuting the stream only moves the mean by rounding") {
        std::vector<Trial> shuffled = trials;
        std::mt19937_64 rng(7);
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        EstimateSummary other;
        for (const Trial& t : shuffled) other.stream_update(t);
        CHECK(other.mean_fraction() ==
              doctest::Approx(whole.mean_fraction()).epsilon(1e-13));
        CHECK(other.m2() == doctest::Approx(whole.m2()).epsilon(1e-11));
    }
}

TEST_CASE("parallel engine reproduces the serial reference bit for bit") {
    std::vector<ExperimentConfig> configs;
    configs.push_back({11, Method::Walk, 100000, {BudgetKind::Trials, 2000}, 0});
    configs.push_back({12, Method::Walk, 100000, {BudgetKind::Flips, 30000}, 0});
    configs.push_back(
        {13, Method::Walk, (std::uint64_t{1} << 24) - 1, {BudgetKind::Flips, 5000}, 0});
    configs.push_back({14, Method::Direct, 100, {BudgetKind::Trials, 3000}, 0});
    configs.push_back({15, Method::Direct, 100, {BudgetKind::Flips, 20000}, 7777});

    for (const ExperimentConfig& config : configs) {
        CAPTURE(config.seed);
        const EstimateSummary serial = estimate_pi_serial(config);
        const EstimateSummary parallel = estimate_pi(config);
        CHECK(parallel.to_json() == serial.to_json());
        CHECK(parallel.trials() == serial.trials());
        CHECK(parallel.censored_trials() == serial.censored_trials());
        CHECK(parallel.flips_completed() == serial.flips_completed());
        CHECK(parallel.censored_flips() == serial.censored_flips());
        CHECK(parallel.discarded_flips() == serial.discarded_flips());
        if (serial.has_estimate()) {
            CHECK(parallel.mean_fraction() == serial.mean_fraction());
            CHECK(parallel.m2() == serial.m2());
            CHECK(parallel.min_fraction() == serial.min_fraction());
            CHECK(parallel.max_fraction() == serial.max_fraction());
        }
    }
}

TEST_CASE("results do not depend on the OpenMP thread count") {
    const ExperimentConfig config{21, Method::Walk, 200000,
                                  {BudgetKind::Flips, 250000}, 0};
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const std::string one = estimate_pi(config).to_json();
    omp_set_num_threads(4);
    const std::string four = estimate_pi(config).to_json();
    const std::string again = estimate_pi(config).to_json();
    omp_set_num_threads(saved);
    CHECK(one == four);
    CHECK(four == again);
}

TEST_CASE("trials budget counts attempts, and censored attempts pay the cap") {
    ExperimentConfig config{31, Method::Walk, 3, {BudgetKind::Trials, 5000}, 0};
    const EstimateSummary s = estimate_pi(config);
    CHECK(s.attempts() == 5000);
    CHECK(s.censored_trials() > 0); // P(tau > 3) = 3/8 of attempts
    CHECK(s.censored_flips() == 3 * s.censored_trials());
    CHECK(s.discarded_flips() == 0);
    CHECK(s.flips_used() ==
          s.flips_completed() + s.censored_flips() + s.discarded_flips());
    // With cap 3 only tau in {1, 3} completes, so fractions are 1 or 2/3.
    CHECK(s.min_fraction() >= 2.0 / 3.0 - 1e-15);
    CHECK(s.max_fraction() == 1.0);
}

TEST_CASE("flips budget is spent exactly") {
    for (const Method method : {Method::Walk, Method::Direct}) {
        ExperimentConfig config{41, method, 100000,
                                {BudgetKind::Flips, 20000}, 0};
        const EstimateSummary s = estimate_pi(config);
        CHECK(s.flips_used() == 20000);
        CHECK(s.trials() > 0);
    }
}

TEST_CASE("a one-flip budget that censors immediately leaves no estimate") {
    // Find a seed whose attempt-0 stream opens with tails.
    std::uint64_t seed = 0;
    for (;; ++seed) {
        BitStream probe = BitSource(seed).stream(0);
        if (!probe.next_bit()) break;
    }
    ExperimentConfig config{seed, Method::Walk, (std::uint64_t{1} << 24) - 1,
                            {BudgetKind::Flips, 1}, 0};
    const EstimateSummary s = estimate_pi(config);
    CHECK_FALSE(s.has_estimate());
    CHECK(s.trials() == 0);
    CHECK(s.flips_used() == 1);
    CHECK(s.discarded_flips() == 1);
    CHECK(s.censored_trials() == 0); // shortfall, not a full-cap censor
    CHECK(s.to_json().find("\"pi_hat\": null") != std::string::npos);
    CHECK(estimate_pi_serial(config).to_json() == s.to_json());
}

TEST_CASE("config validation") {
    ExperimentConfig config;
    config.budget = {BudgetKind::Trials, 0};
    CHECK_THROWS_AS(estimate_pi(config), std::invalid_argument);
    config.budget = {BudgetKind::Trials, 10};
    config.cap = 0;
    CHECK_THROWS_AS(estimate_pi(config), std::invalid_argument);
    CHECK_THROWS_AS(estimate_pi_serial(config), std::invalid_argument);
}

TEST_CASE("walk and direct estimators agree statistically") {
    const EstimateSummary walk =
        estimate_pi({51, Method::Walk, 1000000, {BudgetKind::Trials, 20000}, 0});
    const EstimateSummary direct =
        estimate_pi({52, Method::Direct, 1, {BudgetKind::Trials, 20000}, 0});
    CHECK(std::abs(walk.pi_hat() - std::numbers::pi) < 5.0 * walk.stderr_pi());
    CHECK(std::abs(direct.pi_hat() - std::numbers::pi) <
          5.0 * direct.stderr_pi());
    const double gap = std::abs(walk.pi_hat() - direct.pi_hat());
    const double sigma = std::hypot(walk.stderr_pi(), direct.stderr_pi());
    CHECK(gap < 5.0 * sigma);
}

TEST_CASE("needle-drop summary arithmetic") {
    const BuffonSummary s(100, 64, 1.0, 1.0);
    CHECK(s.frequency() == 0.64);
    CHECK(s.pi_hat() == doctest::Approx(3.125).epsilon(1e-15));
    CHECK(s.stderr_frequency() ==
          doctest::Approx(std::sqrt(0.64 * 0.36 / 100.0)).epsilon(1e-15));

    const BuffonSummary none(10, 0, 1.0, 1.0);
    CHECK_FALSE(none.has_estimate());
    CHECK(none.frequency() == 0.0);
    CHECK_THROWS_AS(none.pi_hat(), std::logic_error);
    CHECK(none.to_json().find("\"pi_hat\": null") != std::string::npos);

    const BuffonSummary empty(0, 0, 1.0, 1.0);
    CHECK_THROWS_AS(empty.frequency(), std::logic_error);
}

TEST_CASE("needle-drop runner: determinism, thread invariance, accuracy") {
    CHECK_THROWS_AS(run_buffon(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_buffon(10, 1, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(run_buffon(10, 1, -1.0, 1.0), std::invalid_argument);

    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const BuffonSummary one = run_buffon(200000, 61);
    omp_set_num_threads(4);
    const BuffonSummary four = run_buffon(200000, 61);
    omp_set_num_threads(saved);
    CHECK(one.crossings() == four.crossings());
    CHECK(one.to_json() == four.to_json());

    // 2/pi = 0.63662; five sigma at 2e5 drops is about 0.0054.
    const double expect = 2.0 / std::numbers::pi;
    CHECK(std::abs(one.frequency() - expect) <
          5.0 * std::sqrt(expect * (1.0 - expect) / 200000.0));
}
