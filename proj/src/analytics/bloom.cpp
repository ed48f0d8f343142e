#include "probsched/analytics/bloom.hpp"

#include <vector>

namespace probsched {

namespace {

void check(std::int64_t l, std::int64_t b, std::int64_t S, std::int64_t k) {
  if (S < 1) throw std::invalid_argument("filter size must be at least 1");
  if (k < 1) throw std::invalid_argument("need at least one hash function");
  if (l < 0) throw std::invalid_argument("draw count must be non-negative");
  if (b < 0 || b > S) throw std::invalid_argument("set bits must lie in 0..S");
}

}  // namespace

Rational efp(std::int64_t l, std::int64_t b, std::int64_t S, std::int64_t k) {
  check(l, b, S, k);
  // row[j] = efp(m, j) for the current m; b only grows, so j <= min(S, b + l).
  const std::int64_t top = std::min(S, b + l);
  std::vector<Rational> row(static_cast<std::size_t>(top - b + 1));
  for (std::int64_t j = b; j <= top; ++j) {
    Rational base(j, S);
    base.canonicalize();
    Rational p = 1;
    for (std::int64_t e = 0; e < k; ++e) p *= base;
    row[static_cast<std::size_t>(j - b)] = p;
  }
  for (std::int64_t m = 1; m <= l; ++m) {
    // efp(m, j) needs j <= top - m
    for (std::int64_t j = b; j <= std::min(top, b + l - m); ++j) {
      auto at = static_cast<std::size_t>(j - b);
      Rational hit(j, S), miss(S - j, S);
      hit.canonicalize();
      miss.canonicalize();
      Rational v = hit * row[at];
      if (j < S) v += miss * row[at + 1];
      row[at] = v;
    }
  }
  return row[0];
}

double efp_float(std::int64_t l, std::int64_t b, std::int64_t S, std::int64_t k) { return to_double(efp(l, b, S, k)); }

std::uint64_t bruteforce_size(std::int64_t S, std::int64_t k, std::int64_t N) {
  std::uint64_t total = 1;
  for (std::int64_t e = 0; e < k * (N + 1); ++e) {
    if (total > UINT64_MAX / static_cast<std::uint64_t>(S)) return UINT64_MAX;
    total *= static_cast<std::uint64_t>(S);
  }
  return total;
}

Rational bloom_bruteforce(std::int64_t S, std::int64_t k, std::int64_t N, bool parallel) {
  check(0, 0, S, k);
  if (N < 0) throw std::invalid_argument("insertion count must be non-negative");
  const std::uint64_t total = bruteforce_size(S, k, N);
  if (total > kBruteforceLimit) {
    throw EnumerationTooLarge("S^(k(N+1)) = " + (total == UINT64_MAX ? std::string("overflow") : std::to_string(total)) +
                              " exceeds " + std::to_string(kBruteforceLimit));
  }
  const std::int64_t inserts = k * N;
  std::uint64_t insert_space = 1;
  for (std::int64_t e = 0; e < inserts; ++e) insert_space *= static_cast<std::uint64_t>(S);

  // Lookup vectors are counted, not listed: with c bits set, exactly c^k of
  // the S^k lookup vectors land on set bits.
  const std::int64_t most = std::min(S, inserts);
  std::vector<std::uint64_t> hits_with(static_cast<std::size_t>(most) + 1);
  for (std::int64_t c = 0; c <= most; ++c) {
    std::uint64_t h = 1;
    for (std::int64_t e = 0; e < k; ++e) h *= static_cast<std::uint64_t>(c);
    hits_with[static_cast<std::size_t>(c)] = h;
  }
  std::uint64_t hits = 0;
  const auto outer = static_cast<std::int64_t>(insert_space);
#pragma omp parallel reduction(+ : hits) if (parallel && outer > 1024)
  {
    std::vector<std::uint32_t> stamp(inserts > 0 ? static_cast<std::size_t>(S) : 0, 0);
    std::uint32_t round = 0;
#pragma omp for schedule(static)
    for (std::int64_t code = 0; code < outer; ++code) {
      ++round;
      std::int64_t set = 0;
      auto rest = static_cast<std::uint64_t>(code);
      for (std::int64_t e = 0; e < inserts; ++e) {
        auto bit = static_cast<std::size_t>(rest % static_cast<std::uint64_t>(S));
        rest /= static_cast<std::uint64_t>(S);
        if (stamp[bit] != round) {
          stamp[bit] = round;
          ++set;
        }
      }
      hits += hits_with[static_cast<std::size_t>(set)];
    }
  }
  Rational out(mpz_class(std::to_string(hits)), mpz_class(std::to_string(total)));
  out.canonicalize();
  return out;
}

}  // namespace probsched
