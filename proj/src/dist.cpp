#include "probsched/dist.hpp"

namespace probsched {

Dist<std::int64_t> uniform(std::int64_t bound) {
  if (bound < 0) throw std::invalid_argument("uniform bound must be non-negative");
  std::vector<std::pair<std::int64_t, Rational>> entries;
  entries.reserve(static_cast<std::size_t>(bound) + 1);
  const Rational p = ratio(1, mpz_class(static_cast<unsigned long>(bound) + 1));
  for (std::int64_t n = 0; n <= bound; ++n) entries.emplace_back(n, p);
  return Dist<std::int64_t>::from_entries(std::move(entries));
}

}  // namespace probsched
