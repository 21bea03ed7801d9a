#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "coinpi/summation.hpp"

namespace coinpi {

// Cached distribution of the stopping time tau over its odd support:
// pmf(k) = P(tau = 2k+1), cdf(k) = P(tau <= 2k+1).
//
// Entries are built by the exact ratio recurrence of the closed form,
//   pmf(0) = 1/2,  pmf(k+1) = pmf(k) * (2k+1) / (2k+4),
// so no binomial coefficients are ever evaluated. The cdf is accumulated
// with compensated summation.
//
// The table is growable up to kMaxEntries; the far tail (P(tau > 2k+1)
// falls like k^{-1/2}, so draws can land many orders of magnitude beyond
// any storable table) is served by the closed-form tail in analytics.
// Growth is single-writer; concurrent readers must hold a fully built
// table.
class TauTable {
public:
    static constexpr std::size_t kMaxEntries = std::size_t{1} << 17;

    TauTable() { append_first(); }

    // Ensure entries 0..k exist (clamped to kMaxEntries - 1).
    void extend_to(std::size_t k) {
        const std::size_t want = (k >= kMaxEntries ? kMaxEntries : k + 1);
        while (pmf_.size() < want) append_next();
    }

    std::size_t size() const noexcept { return pmf_.size(); }
    bool covers(std::size_t k) const noexcept { return k < pmf_.size(); }

    double pmf(std::size_t k) const { return pmf_.at(k); }
    double cdf(std::size_t k) const { return cdf_.at(k); }

    double cdf_back() const noexcept { return cdf_.back(); }
    const std::vector<double>& cdf_values() const noexcept { return cdf_; }

private:
    void append_first() {
        pmf_.push_back(0.5);
        csum_.add(0.5);
        cdf_.push_back(csum_.value());
    }

    void append_next() {
        const std::size_t k = pmf_.size() - 1;
        const double odd = static_cast<double>(2 * k + 1);
        const double next = pmf_.back() * (odd / (odd + 3.0));
        pmf_.push_back(next);
        csum_.add(next);
        cdf_.push_back(csum_.value());
    }

    std::vector<double> pmf_;
    std::vector<double> cdf_;
    NeumaierSum csum_;
};

} // namespace coinpi
