#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "coinpi/analytics.hpp"
#include "coinpi/exact.hpp"
#include "coinpi/oracle.hpp"
#include "coinpi/walk_sim.hpp"

using namespace coinpi;

namespace {

// Binary-coded coin sequence (bit i = flip i+1, set means heads) driving
// the generic walk, so enumerated paths can replay through the simulator.
struct BitScript {
    std::uint64_t bits = 0;
    std::uint64_t next = 0;
    bool next_bit() { return (bits >> next++) & 1ull; }
};

} // namespace

TEST_CASE("catalan numbers: closed form against the product recurrence") {
    const std::vector<long> known{1,    1,    2,     5,     14,   42,   132,
                                  429,  1430, 4862,  16796, 58786, 208012};
    for (std::size_t k = 0; k < known.size(); ++k) {
        CHECK(exact::catalan(k) == known[k]);
    }
    // C_{k+1} = C_k * 2(2k+1) / (k+2), an independent derivation path.
    mpz_class c = 1;
    for (std::uint64_t k = 0; k < 300; ++k) {
        CHECK(exact::catalan(k) == c);
        c = c * 2 * (2 * k + 1);
        mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), k + 2);
    }
}

TEST_CASE("exact pmf, cdf and the tail identity as rationals") {
    CHECK(exact::tau_pmf(0) == mpq_class(1, 2));
    CHECK(exact::tau_pmf(1) == mpq_class(1, 8));
    CHECK(exact::tau_pmf(5) == mpq_class(21, 1024));
    CHECK(exact::tau_cdf(10) == mpq_class(436109, 524288));
    for (std::uint64_t k = 0; k <= 60; ++k) {
        CHECK(exact::tau_tail(k) ==
              mpq_class(2 * k + 1, 1) * exact::tau_pmf(k));
    }
}

TEST_CASE("exact truncated means") {
    CHECK(exact::fraction_mean(0) == mpq_class(1, 2));
    CHECK(exact::fraction_mean(1) == mpq_class(7, 12));
    CHECK(exact::fraction_mean(2) == mpq_class(149, 240));
    CHECK(exact::fraction_mean(10) ==
          mpq_class("762860964413/1089735229440"));
    CHECK(exact::inv_tau_mean(0) == mpq_class(1, 2));
    CHECK(exact::inv_tau_mean(1) == mpq_class(13, 24));
    CHECK(exact::inv_tau_mean(10) ==
          mpq_class("619267191781/1089735229440"));
}

TEST_CASE("floating analytics sit on the exact rationals") {
    for (const std::uint64_t k : {0ull, 5ull, 10ull, 50ull}) {
        CHECK(std::abs(analytics::fraction_mean_truncated(k) -
                       exact::fraction_mean(k).get_d()) <= 1e-15);
        CHECK(std::abs(analytics::inv_tau_mean_truncated(k) -
                       exact::inv_tau_mean(k).get_d()) <= 1e-15);
        CHECK(std::abs(analytics::tau_pmf(k) - exact::tau_pmf(k).get_d()) <=
              1e-16);
    }
}

TEST_CASE("enumeration at L = 1 and L = 5") {
    const oracle::OracleReport one = oracle::enumerate_first_passage(1);
    REQUIRE(one.counts.size() == 1);
    CHECK(one.counts[0] == 1);
    CHECK(one.truncated_fraction_mean == mpq_class(1, 2));
    CHECK(one.mass_accounted == mpq_class(1, 2));

    const oracle::OracleReport five = oracle::enumerate_first_passage(5);
    REQUIRE(five.counts.size() == 3);
    CHECK(five.counts[0] == 1);
    CHECK(five.counts[1] == 1);
    CHECK(five.counts[2] == 2);
    // 1/2 + 1/12 + 3/80
    CHECK(five.truncated_fraction_mean == mpq_class(149, 240));
    // 1/2 + 1/24 + 1/80
    CHECK(five.truncated_inv_tau_mean == mpq_class(133, 240));
    CHECK(five.mass_accounted == mpq_class(11, 16));
}

TEST_CASE("all three enumeration modes agree where they overlap") {
    for (const std::uint64_t len : {1ull, 5ull, 9ull, 15ull}) {
        const auto parallel = oracle::enumerate_first_passage(
            len, oracle::EnumerationMode::PrunedParallel);
        const auto serial = oracle::enumerate_first_passage(
            len, oracle::EnumerationMode::PrunedSerial);
        const auto brute = oracle::enumerate_first_passage(
            len, oracle::EnumerationMode::BruteForce);
        REQUIRE(parallel.counts.size() == serial.counts.size());
        REQUIRE(parallel.counts.size() == brute.counts.size());
        for (std::size_t k = 0; k < parallel.counts.size(); ++k) {
            CHECK(parallel.counts[k] == serial.counts[k]);
            CHECK(parallel.counts[k] == brute.counts[k]);
        }
        CHECK(parallel.truncated_fraction_mean ==
              brute.truncated_fraction_mean);
        CHECK(parallel.truncated_inv_tau_mean == brute.truncated_inv_tau_mean);
        CHECK(parallel.mass_accounted == brute.mass_accounted);
    }
}

TEST_CASE("oracle against analytics at the acceptance length") {
    const oracle::AnalyticsComparison cmp = oracle::oracle_vs_analytics(21);
    CHECK(cmp.exact_match);
    CHECK(cmp.fraction_residual <= 1e-13);
    CHECK(cmp.inv_tau_residual <= 1e-13);
    for (const double r : cmp.pmf_residuals) CHECK(r <= 1e-13);
}

TEST_CASE("enumerated paths replay through the walk simulator") {
    const std::uint64_t len = 13;
    std::vector<std::uint64_t> counts((len + 1) / 2, 0);
    std::uint64_t total = 0;
    oracle::for_each_first_passage_path(
        len, [&](std::uint64_t bits, std::uint64_t path_len) {
            BitScript script{bits, 0};
            const Trial trial = run_trial_walk(script, path_len);
            CHECK_FALSE(trial.censored);
            CHECK(trial.tau == path_len);
            CHECK(trial.heads == (path_len + 1) / 2);
            ++counts[(path_len - 1) / 2];
            ++total;
        });
    std::uint64_t expected_total = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        CHECK(counts[k] == exact::catalan(k));
        expected_total += exact::catalan(k).get_ui();
    }
    CHECK(total == expected_total);
}

TEST_CASE("length validation") {
    CHECK_THROWS_AS(oracle::enumerate_first_passage(0), std::invalid_argument);
    CHECK_THROWS_AS(oracle::enumerate_first_passage(2), std::invalid_argument);
    CHECK_THROWS_AS(oracle::enumerate_first_passage(27), std::invalid_argument);
    CHECK_THROWS_AS(oracle::enumerate_first_passage(
                        17, oracle::EnumerationMode::BruteForce),
                    std::invalid_argument);
}

TEST_CASE("report serialization") {
    const oracle::OracleReport five = oracle::enumerate_first_passage(5);
    const auto j = nlohmann::json::parse(five.to_json());
    CHECK(j["max_len"] == 5);
    CHECK(j["counts"]["0"] == "1");
    CHECK(j["counts"]["1"] == "1");
    CHECK(j["counts"]["2"] == "2");
    CHECK(j["truncated_fraction_mean"] == "149/240");
    CHECK(j["mass_accounted"] == "11/16");
}
