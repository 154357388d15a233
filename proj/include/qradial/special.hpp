#pragma once

#include <vector>

#include "qradial/hp.hpp"

namespace qradial {

/// B_0 .. B_{n_max} from sum_{k=0}^{n} binom(n+1, k) B_k = 0, which fixes B_1 = -1/2.
std::vector<Rational> bernoulli_numbers(int n_max);

/// Gamma(x) for x > 0, correctly rounded at `p` (MPFR).
HPReal gamma_hp(const HPReal& x, Precision p);
inline HPReal gamma_hp(const HPReal& x) { return gamma_hp(x, x.precision()); }

/// zeta(2m), m >= 1: partial sum of n^{-2m} plus an Euler-Maclaurin tail
/// correction carried until its terms drop below 2^{-P}.
HPReal zeta_even(int m, Precision p);

/// (2 + 2 zeta(2m)) / (2 pi)^{2m}: the constant in the asymptotic Euler-Maclaurin
/// remainder estimate.
HPReal remainder_prefactor(int m, Precision p);

std::vector<BigInt> binomial_row(int n);
BigInt factorial(int n);

}  // namespace qradial
