#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "probsched/rational.hpp"

namespace probsched {

// Strict weak ordering used for distribution supports. Specialize for types
// whose natural operator< is not structural (e.g. shared-pointer trees).
template <typename A>
struct Order {
  bool operator()(const A& a, const A& b) const { return std::less<A>{}(a, b); }
};

template <typename A, typename B>
struct Order<std::pair<A, B>> {
  bool operator()(const std::pair<A, B>& x, const std::pair<A, B>& y) const {
    if (Order<A>{}(x.first, y.first)) return true;
    if (Order<A>{}(y.first, x.first)) return false;
    return Order<B>{}(x.second, y.second);
  }
};

template <typename A, typename B, typename C>
struct Order<std::tuple<A, B, C>> {
  bool operator()(const std::tuple<A, B, C>& x, const std::tuple<A, B, C>& y) const {
    if (Order<A>{}(std::get<0>(x), std::get<0>(y))) return true;
    if (Order<A>{}(std::get<0>(y), std::get<0>(x))) return false;
    if (Order<B>{}(std::get<1>(x), std::get<1>(y))) return true;
    if (Order<B>{}(std::get<1>(y), std::get<1>(x))) return false;
    return Order<C>{}(std::get<2>(x), std::get<2>(y));
  }
};

// Finite-support subdistribution with exact rational weights. The support is
// kept sorted by Order<A> and never contains zero entries, so two
// distributions are equal iff their supports are identical.
template <typename A>
class Dist {
 public:
  using Entry = std::pair<A, Rational>;

  Dist() = default;

  // Merges duplicate outcomes, drops zeros, validates total mass <= 1.
  static Dist from_entries(std::vector<Entry> entries) {
    std::map<A, Rational, Order<A>> acc;
    for (auto& [a, p] : entries) {
      if (p < 0) throw std::invalid_argument("negative probability");
      auto [it, inserted] = acc.try_emplace(std::move(a), p);
      if (!inserted) it->second += p;
    }
    Dist d;
    d.support_.reserve(acc.size());
    Rational total = 0;
    for (auto& [a, p] : acc) {
      if (p == 0) continue;
      total += p;
      d.support_.emplace_back(a, p);
    }
    if (total > 1) throw std::invalid_argument("distribution mass exceeds 1: " + to_string(total));
    return d;
  }

  static Dist point(A a) {
    Dist d;
    d.support_.emplace_back(std::move(a), Rational(1));
    return d;
  }

  const std::vector<Entry>& support() const { return support_; }
  bool empty() const { return support_.empty(); }
  std::size_t size() const { return support_.size(); }
  auto begin() const { return support_.begin(); }
  auto end() const { return support_.end(); }

  Rational operator()(const A& a) const {
    auto it = std::lower_bound(support_.begin(), support_.end(), a,
                               [](const Entry& e, const A& key) { return Order<A>{}(e.first, key); });
    if (it == support_.end() || Order<A>{}(a, it->first)) return 0;
    return it->second;
  }

  Rational mass() const {
    Rational total = 0;
    for (const auto& e : support_) total += e.second;
    return total;
  }

  template <typename F>
  auto bind(F&& f) const {
    using Result = std::invoke_result_t<F&, const A&>;
    using B = std::decay_t<decltype(std::declval<Result>().support().front().first)>;
    std::vector<std::pair<B, Rational>> out;
    for (const auto& [a, p] : support_) {
      Dist<B> inner = f(a);
      for (const auto& [b, q] : inner.support()) out.emplace_back(b, p * q);
    }
    return Dist<B>::from_entries(std::move(out));
  }

  template <typename F>
  auto map(F&& f) const {
    using B = std::decay_t<std::invoke_result_t<F&, const A&>>;
    std::vector<std::pair<B, Rational>> out;
    out.reserve(support_.size());
    for (const auto& [a, p] : support_) out.emplace_back(f(a), p);
    return Dist<B>::from_entries(std::move(out));
  }

  // E[X]; X must map every outcome of the support into [0,1].
  template <typename F>
  Rational expect(F&& x) const {
    Rational total = 0;
    for (const auto& [a, p] : support_) {
      Rational v = x(a);
      if (v < 0 || v > 1) throw std::invalid_argument("expectation argument outside [0,1]: " + to_string(v));
      total += p * v;
    }
    return total;
  }

  template <typename P>
  Rational prob(P&& pred) const {
    Rational total = 0;
    for (const auto& [a, p] : support_) {
      if (pred(a)) total += p;
    }
    return total;
  }

  // Rescales to mass 1. Throws on the null distribution.
  Dist normalized() const {
    Rational m = mass();
    if (m == 0) throw std::invalid_argument("cannot normalize the null distribution");
    Dist d = *this;
    for (auto& e : d.support_) e.second /= m;
    return d;
  }

  friend bool operator==(const Dist& x, const Dist& y) {
    if (x.support_.size() != y.support_.size()) return false;
    for (std::size_t i = 0; i < x.support_.size(); ++i) {
      const auto& a = x.support_[i];
      const auto& b = y.support_[i];
      if (Order<A>{}(a.first, b.first) || Order<A>{}(b.first, a.first) || a.second != b.second) return false;
    }
    return true;
  }

 private:
  std::vector<Entry> support_;
};

template <typename A>
Dist<A> dret(A a) {
  return Dist<A>::point(std::move(a));
}

template <typename A, typename F>
auto dbind(const Dist<A>& d, F&& f) {
  return d.bind(std::forward<F>(f));
}

// U(N): 1/(N+1) on each of 0..N.
Dist<std::int64_t> uniform(std::int64_t bound);

template <typename A>
Rational mass(const Dist<A>& d) {
  return d.mass();
}

// Canonical text "{a: p/q, b: p/q}" in support order.
template <typename A, typename Show>
std::string render(const Dist<A>& d, Show&& show) {
  std::string out = "{";
  bool first = true;
  for (const auto& [a, p] : d) {
    if (!first) out += ", ";
    first = false;
    out += show(a);
    out += ": ";
    out += to_string(p);
  }
  out += "}";
  return out;
}

}  // namespace probsched
