#include <doctest.h>

#include "probsched/analytics/bloom.hpp"

using namespace probsched;

namespace {

mpz_class choose(long n, long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

// Stirling numbers of the second kind.
mpz_class stirling2(long n, long k) {
  std::vector<std::vector<mpz_class>> t(static_cast<std::size_t>(n + 1), std::vector<mpz_class>(static_cast<std::size_t>(k + 1), 0));
  t[0][0] = 1;
  for (long i = 1; i <= n; ++i)
    for (long j = 1; j <= std::min(i, k); ++j) t[i][j] = j * t[i - 1][j] + t[i - 1][j - 1];
  return t[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

// Closed form from the occupancy distribution: after l draws starting with
// no bits set, exactly j bits are set with probability C(S,j) j! S2(l,j) / S^l.
Rational occupancy(long l, long S, long k) {
  Rational total = 0;
  mpz_class Sl;
  mpz_ui_pow_ui(Sl.get_mpz_t(), static_cast<unsigned long>(S), static_cast<unsigned long>(l));
  for (long j = 0; j <= std::min(l, S); ++j) {
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(j));
    Rational pj(choose(S, j) * fact * stirling2(l, j), Sl);
    pj.canonicalize();
    Rational hit(j, S);
    hit.canonicalize();
    Rational h = 1;
    for (long e = 0; e < k; ++e) h *= hit;
    total += pj * h;
  }
  return total;
}

}  // namespace

TEST_CASE("recurrence: small cases") {
  CHECK(efp(0, 0, 5, 3) == 0);
  CHECK(efp(0, 5, 5, 3) == 1);
  CHECK(efp(1, 0, 2, 1) == Rational(1, 2));
  CHECK(efp(1, 1, 2, 1) == Rational(3, 4));
  CHECK(efp(2, 0, 2, 1) == Rational(3, 4));
  CHECK(efp(0, 1, 4, 2) == Rational(1, 16));
  CHECK(efp_float(1, 0, 2, 1) == 0.5);
  CHECK(efp_float(0, 7, 7, 2) == 1.0);
}

TEST_CASE("recurrence matches the occupancy closed form") {
  for (long S : {1, 2, 3, 5, 8, 16})
    for (long k : {1, 2, 3, 4})
      for (long l : {0, 1, 2, 5, 9, 20}) {
        INFO("S=" << S << " k=" << k << " l=" << l);
        CHECK(efp(l, 0, S, k) == occupancy(l, S, k));
      }
}

TEST_CASE("recurrence: range and monotonicity over a grid") {
  for (long S : {1, 2, 7, 16, 64})
    for (long k : {1, 2, 4})
      for (long l : {0, 1, 3, 8, 64}) {
        Rational prev_b = -1;
        for (long b = 0; b <= S; b += std::max(1L, S / 8)) {
          Rational v = efp(l, b, S, k);
          CHECK(is_probability(v));
          CHECK(v >= prev_b);
          prev_b = v;
          if (l > 0) CHECK(v >= efp(l - 1, b, S, k));
          CHECK(efp_float(l, b, S, k) <= efp_float(l, std::min(S, b + 1), S, k));
        }
      }
}

TEST_CASE("recurrence rejects bad parameters") {
  CHECK_THROWS_AS(efp(1, 0, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(efp(1, 0, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(efp(1, 3, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(efp(-1, 0, 2, 1), std::invalid_argument);
}

TEST_CASE("enumeration oracle") {
  CHECK(bloom_bruteforce(2, 1, 1) == Rational(1, 2));
  CHECK(bloom_bruteforce(2, 1, 2) == Rational(3, 4));
  CHECK(bloom_bruteforce(5, 2, 0) == 0);
  CHECK(bloom_bruteforce(3, 2, 2, false) == bloom_bruteforce(3, 2, 2, true));
  CHECK(bruteforce_size(10, 2, 3) == 100'000'000);
  CHECK(bruteforce_size(1000, 10, 10) == UINT64_MAX);
  CHECK_THROWS_AS(bloom_bruteforce(10, 2, 3), EnumerationTooLarge);
}
