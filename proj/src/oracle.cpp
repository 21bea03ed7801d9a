#include "coinpi/oracle.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "coinpi/analytics.hpp"
#include "coinpi/exact.hpp"

namespace coinpi::oracle {

namespace {

constexpr std::uint64_t kMaxLen = 25;
constexpr std::uint64_t kMaxBruteLen = 15;

// Pruned prefix-tree walk: descend both branches while the walk stays
// nonpositive, record a leaf the moment it goes positive. Counts fit in
// 64 bits with room to spare at L = 25 (largest entry is catalan(12)).
void dfs_count(std::uint64_t depth, std::int64_t position,
               std::uint64_t max_len, std::vector<std::uint64_t>& counts) {
    if (depth == max_len) return;
    if (position + 1 > 0) {
        counts[depth / 2] += 1; // passage at flip depth+1 = 2(depth/2)+1
    } else {
        dfs_count(depth + 1, position + 1, max_len, counts);
    }
    dfs_count(depth + 1, position - 1, max_len, counts);
}

std::vector<std::uint64_t> count_pruned_serial(std::uint64_t max_len) {
    std::vector<std::uint64_t> counts((max_len + 1) / 2, 0);
    dfs_count(0, 0, max_len, counts);
    return counts;
}

// Parallel variant: enumerate all prefixes of b flips, then walk the
// surviving subtrees independently. A path that passes inside its prefix
// is shared by every prefix extending it, so it is credited only to the
// canonical all-tails extension.
std::vector<std::uint64_t> count_pruned_parallel(std::uint64_t max_len) {
    const std::uint64_t b = max_len - 1 < 12 ? max_len - 1 : 12;
    const std::uint64_t prefixes = std::uint64_t{1} << b;
    std::vector<std::uint64_t> counts((max_len + 1) / 2, 0);

#pragma omp parallel
    {
        std::vector<std::uint64_t> local(counts.size(), 0);
#pragma omp for schedule(dynamic, 64) nowait
        for (std::int64_t p = 0; p < static_cast<std::int64_t>(prefixes);
             ++p) {
            const auto prefix = static_cast<std::uint64_t>(p);
            std::int64_t position = 0;
            std::uint64_t passage = 0; // first passage flip, 0 = none
            for (std::uint64_t i = 0; i < b; ++i) {
                position += (prefix >> i) & 1ull ? 1 : -1;
                if (position > 0) {
                    passage = i + 1;
                    break;
                }
            }
            if (passage != 0) {
                if ((prefix >> passage) == 0) local[(passage - 1) / 2] += 1;
            } else {
                dfs_count(b, position, max_len, local);
            }
        }
#pragma omp critical
        {
            for (std::size_t k = 0; k < counts.size(); ++k) {
                counts[k] += local[k];
            }
        }
    }
    return counts;
}

// The tree's own check: scan every one of the 2^L sequences, classify by
// first passage, and divide out the 2^(L - (2k+1)) completions that share
// each passage path.
std::vector<std::uint64_t> count_brute_force(std::uint64_t max_len) {
    if (max_len > kMaxBruteLen) {
        throw std::invalid_argument("brute-force enumeration capped at L = 15");
    }
    std::vector<std::uint64_t> by_passage(max_len + 1, 0);
    const std::uint64_t total = std::uint64_t{1} << max_len;
    for (std::uint64_t seq = 0; seq < total; ++seq) {
        std::int64_t position = 0;
        for (std::uint64_t i = 0; i < max_len; ++i) {
            position += (seq >> i) & 1ull ? 1 : -1;
            if (position > 0) {
                by_passage[i + 1] += 1;
                break;
            }
        }
    }
    std::vector<std::uint64_t> counts((max_len + 1) / 2, 0);
    for (std::uint64_t t = 1; t <= max_len; t += 2) {
        const std::uint64_t completions = std::uint64_t{1} << (max_len - t);
        if (by_passage[t] % completions != 0) {
            throw std::logic_error("passage count not a multiple of its completions");
        }
        counts[(t - 1) / 2] = by_passage[t] / completions;
    }
    for (std::uint64_t t = 2; t <= max_len; t += 2) {
        if (by_passage[t] != 0) {
            throw std::logic_error("first passage observed at an even flip");
        }
    }
    return counts;
}

mpq_class path_probability(const mpz_class& count, std::uint64_t k) {
    mpz_class denom = 1;
    mpz_mul_2exp(denom.get_mpz_t(), denom.get_mpz_t(), 2 * k + 1);
    mpq_class q(count, denom);
    q.canonicalize();
    return q;
}

} // namespace

void validate_length(std::uint64_t max_len) {
    if (max_len == 0 || max_len % 2 == 0) {
        throw std::invalid_argument("enumeration length must be odd");
    }
    if (max_len > kMaxLen) {
        throw std::invalid_argument("enumeration length capped at L = 25");
    }
}

OracleReport enumerate_first_passage(std::uint64_t max_len,
                                     EnumerationMode mode) {
    validate_length(max_len);
    std::vector<std::uint64_t> raw;
    switch (mode) {
    case EnumerationMode::PrunedParallel:
        raw = count_pruned_parallel(max_len);
        break;
    case EnumerationMode::PrunedSerial:
        raw = count_pruned_serial(max_len);
        break;
    case EnumerationMode::BruteForce:
        raw = count_brute_force(max_len);
        break;
    }

    OracleReport report;
    report.max_len = max_len;
    report.counts.reserve(raw.size());
    for (const std::uint64_t c : raw) report.counts.emplace_back(c);
    for (std::size_t k = 0; k < report.counts.size(); ++k) {
        const mpq_class p = path_probability(report.counts[k], k);
        mpq_class fraction_weight(k + 1, 2 * k + 1);
        fraction_weight.canonicalize();
        report.truncated_fraction_mean += p * fraction_weight;
        report.truncated_inv_tau_mean += p / mpq_class(2 * k + 1);
        report.mass_accounted += p;
    }
    return report;
}

std::string OracleReport::to_json() const {
    nlohmann::ordered_json counts_obj = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < counts.size(); ++k) {
        counts_obj[std::to_string(k)] = counts[k].get_str();
    }
    const auto rational = [](const mpq_class& q) {
        return q.get_num().get_str() + "/" + q.get_den().get_str();
    };
    nlohmann::ordered_json j;
    j["max_len"] = max_len;
    j["counts"] = counts_obj;
    j["truncated_fraction_mean"] = rational(truncated_fraction_mean);
    j["truncated_inv_tau_mean"] = rational(truncated_inv_tau_mean);
    j["mass_accounted"] = rational(mass_accounted);
    return j.dump(2);
}

AnalyticsComparison oracle_vs_analytics(std::uint64_t max_len) {
    const OracleReport report = enumerate_first_passage(max_len);
    const std::uint64_t terms = (max_len - 1) / 2;

    AnalyticsComparison cmp;
    cmp.exact_match = true;
    for (std::size_t k = 0; k < report.counts.size(); ++k) {
        if (report.counts[k] != exact::catalan(k)) cmp.exact_match = false;
        const mpq_class exact_pmf = exact::tau_pmf(k);
        if (path_probability(report.counts[k], k) != exact_pmf) {
            cmp.exact_match = false;
        }
        cmp.pmf_residuals.push_back(
            std::abs(analytics::tau_pmf(k) - exact_pmf.get_d()));
    }
    if (report.truncated_fraction_mean != exact::fraction_mean(terms)) {
        cmp.exact_match = false;
    }
    if (report.truncated_inv_tau_mean != exact::inv_tau_mean(terms)) {
        cmp.exact_match = false;
    }
    if (report.mass_accounted != exact::tau_cdf(terms)) {
        cmp.exact_match = false;
    }
    if (!(report.mass_accounted < 1) ||
        mpq_class(1) - report.mass_accounted != exact::tau_tail(terms)) {
        cmp.exact_match = false;
    }

    cmp.fraction_residual =
        std::abs(analytics::fraction_mean_truncated(terms) -
                 report.truncated_fraction_mean.get_d());
    cmp.inv_tau_residual =
        std::abs(analytics::inv_tau_mean_truncated(terms) -
                 report.truncated_inv_tau_mean.get_d());
    return cmp;
}

} // namespace coinpi::oracle
