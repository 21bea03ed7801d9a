#include "coinpi/exact.hpp"

namespace coinpi::exact {

mpz_class catalan(std::uint64_t k) {
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), 2 * k, k);
    mpz_class result;
    mpz_divexact_ui(result.get_mpz_t(), binom.get_mpz_t(), k + 1);
    return result;
}

mpq_class tau_pmf(std::uint64_t k) {
    mpz_class denom = 1;
    mpz_mul_2exp(denom.get_mpz_t(), denom.get_mpz_t(), 2 * k + 1);
    mpq_class q(catalan(k), denom);
    q.canonicalize();
    return q;
}

mpq_class tau_cdf(std::uint64_t terms) {
    mpq_class sum = 0;
    for (std::uint64_t k = 0; k <= terms; ++k) sum += tau_pmf(k);
    return sum;
}

mpq_class tau_tail(std::uint64_t terms) {
    return mpq_class(1) - tau_cdf(terms);
}

mpq_class fraction_mean(std::uint64_t terms) {
    mpq_class sum = 0;
    for (std::uint64_t k = 0; k <= terms; ++k) {
        mpq_class weight(k + 1, 2 * k + 1);
        weight.canonicalize();
        sum += tau_pmf(k) * weight;
    }
    return sum;
}

mpq_class inv_tau_mean(std::uint64_t terms) {
    mpq_class sum = 0;
    for (std::uint64_t k = 0; k <= terms; ++k) {
        mpq_class weight(1, 2 * k + 1);
        sum += tau_pmf(k) * weight;
    }
    return sum;
}

} // namespace coinpi::exact
