#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "probsched/rational.hpp"

namespace probsched {

// Largest S^{k(N+1)} bloom_bruteforce will enumerate.
inline constexpr std::uint64_t kBruteforceLimit = 10'000'000;

class EnumerationTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// False-positive probability with l index draws left and b bits set, for an
// S-bit filter queried with k hashes:
//   efp(0, b) = (b/S)^k
//   efp(l+1, b) = (b/S) efp(l, b) + ((S-b)/S) efp(l, b+1)
// Throws std::invalid_argument unless S >= 1, k >= 1, 0 <= b <= S.
Rational efp(std::int64_t l, std::int64_t b, std::int64_t S, std::int64_t k);

double efp_float(std::int64_t l, std::int64_t b, std::int64_t S, std::int64_t k);

// Exact probability, over k*N uniform insertion draws and k lookup draws on
// 0..S-1, that every lookup draw lands on a set bit. Enumerates every
// insertion vector; lookups are counted per vector. Throws
// EnumerationTooLarge past kBruteforceLimit.
Rational bloom_bruteforce(std::int64_t S, std::int64_t k, std::int64_t N, bool parallel = true);

// S^{k(N+1)}, saturating at UINT64_MAX.
std::uint64_t bruteforce_size(std::int64_t S, std::int64_t k, std::int64_t N);

}  // namespace probsched
