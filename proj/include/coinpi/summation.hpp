#pragma once

#include <cmath>

namespace coinpi {

// Neumaier-compensated accumulator. Terms here are positive and decreasing,
// so plain summation would already be decent; the compensation keeps the
// 1e-14-level series identities intact out to millions of terms.
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) noexcept {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    double value() const noexcept { return sum + comp; }
};

} // namespace coinpi
