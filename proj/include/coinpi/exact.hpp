#pragma once

#include <cstdint>

#include <gmpxx.h>

// Exact rational counterparts of the floating-point analytics. These are
// the reference values the double-precision code is tested against, so
// they deliberately share no arithmetic with it: binomials here come from
// GMP's mpz_bin_uiui, not from the ratio recurrences.
namespace coinpi::exact {

// Catalan number C_k = C(2k,k) / (k+1).
mpz_class catalan(std::uint64_t k);

// P(tau = 2k+1) = C_k / 2^{2k+1}.
mpq_class tau_pmf(std::uint64_t k);

// P(tau <= 2K+1), the sum of tau_pmf(0..K).
mpq_class tau_cdf(std::uint64_t terms);

// P(tau > 2K+1).
mpq_class tau_tail(std::uint64_t terms);

// sum_{k=0}^{K} pmf(k) * (k+1)/(2k+1); limit pi/4.
mpq_class fraction_mean(std::uint64_t terms);

// sum_{k=0}^{K} pmf(k) / (2k+1); limit pi/2 - 1.
mpq_class inv_tau_mean(std::uint64_t terms);

} // namespace coinpi::exact
