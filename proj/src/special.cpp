#include "qradial/special.hpp"

#include <algorithm>
#include <mutex>

#include "qradial/errors.hpp"

namespace qradial {

std::vector<BigInt> binomial_row(int n) {
  std::vector<BigInt> row(static_cast<std::size_t>(n) + 1);
  row[0] = 1;
  for (int k = 1; k <= n; ++k) {
    row[static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(k) - 1] * (n - k + 1) / k;
  }
  return row;
}

BigInt factorial(int n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

std::vector<Rational> bernoulli_numbers(int n_max) {
  if (n_max < 0) throw InvalidArgument("bernoulli_numbers: n_max must be nonnegative");
  std::vector<Rational> b;
  b.reserve(static_cast<std::size_t>(n_max) + 1);
  b.emplace_back(1);
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1 && n % 2 == 1) {
      b.emplace_back(0);
      continue;
    }
    auto binom = binomial_row(n + 1);
    Rational acc = 0;
    for (int k = 0; k < n; ++k) acc += Rational(binom[static_cast<std::size_t>(k)]) * b[static_cast<std::size_t>(k)];
    Rational bn = -acc / Rational(n + 1);
    bn.canonicalize();
    b.push_back(bn);
  }
  return b;
}

namespace {

// Bernoulli numbers are reused across zeta evaluations; grow a shared table on demand.
std::vector<Rational> cached_bernoulli(int n_max) {
  static std::mutex mutex;
  static std::vector<Rational> table;
  std::lock_guard lock(mutex);
  if (static_cast<int>(table.size()) <= n_max) table = bernoulli_numbers(n_max);
  return {table.begin(), table.begin() + n_max + 1};
}

}  // namespace

HPReal gamma_hp(const HPReal& x, Precision p) {
  if (!(x > 0.0)) throw InvalidArgument("gamma_hp: argument must be positive, got " + x.to_string(20));
  HPReal out(p);
  mpfr_gamma(out.raw(), x.raw(), MPFR_RNDN);
  return out;
}

HPReal zeta_even(int m, Precision p) {
  if (m < 1) throw InvalidArgument("zeta_even: m must be at least 1");
  const Precision wp = p.guarded(32);
  const long s = 2L * m;
  const long cutoff = std::max(16L, p.bits / 4);

  HPReal sum(wp);
  for (long n = 1; n < cutoff; ++n) {
    HPReal term = pow(HPReal(n, wp), -s);
    sum += term;
  }
  const HPReal big_n(cutoff, wp);
  HPReal tail = pow(big_n, 1 - s) / (s - 1);
  tail += pow(big_n, -s) / 2;
  sum += tail;

  // Euler-Maclaurin corrections B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}.
  const HPReal threshold = power_of_two(-(p.bits + 8), wp);
  const int max_j = static_cast<int>(cutoff) / 2 + 16;
  const auto bern = cached_bernoulli(2 * max_j);
  HPReal rising(s, wp);             // s(s+1)...(s+2j-2), starts at j = 1
  HPReal npow = pow(big_n, -s - 1);  // N^{-s-2j+1}
  const HPReal inv_n2 = 1L / (big_n * big_n);
  for (int j = 1; j <= max_j; ++j) {
    if (j > 1) {
      rising *= (s + 2L * j - 3);
      rising *= (s + 2L * j - 2);
      npow *= inv_n2;
    }
    HPReal term = HPReal(bern[static_cast<std::size_t>(2 * j)], wp) / HPReal(factorial(2 * j), wp);
    term *= rising;
    term *= npow;
    sum += term;
    if (abs(term) < threshold) break;
  }
  return sum.with_precision(p);
}

HPReal remainder_prefactor(int m, Precision p) {
  if (m < 1) throw InvalidArgument("remainder_prefactor: m must be at least 1");
  const Precision wp = p.guarded(16);
  HPReal numerator = 2L + 2L * zeta_even(m, wp);
  HPReal two_pi = pi(wp) * 2L;
  return (numerator / pow(two_pi, 2L * m)).with_precision(p);
}

}  // namespace qradial
