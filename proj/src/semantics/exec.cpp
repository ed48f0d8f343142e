#include "probsched/semantics/exec.hpp"

#include <stdexcept>
#include <unordered_map>

namespace probsched {

namespace {

struct Key {
  SchedState z;
  Config config;
  std::size_t n;

  bool operator==(const Key& o) const { return z == o.z && n == o.n && config == o.config; }
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    return hash_combine(hash_combine(k.config.hash(), static_cast<std::size_t>(k.z)), k.n);
  }
};

template <typename Out>
class Recursion {
 public:
  Recursion(const SchedulerPolicy& pi, bool memo) : pi_(pi), memo_(memo) {}

  template <typename Body>
  Out run(SchedState z, const Config& c, std::size_t n, Body&& body) {
    if (!memo_) return body(z, c, n);
    Key key{z, c, n};
    if (auto it = table_.find(key); it != table_.end()) return it->second;
    Out out = body(z, c, n);
    table_.emplace(std::move(key), out);
    return out;
  }

  const SchedulerPolicy& pi_;

 private:
  bool memo_;
  std::unordered_map<Key, Out, KeyHash> table_;
};

Dist<Value> exec_rec(Recursion<Dist<Value>>& r, SchedState z, const Config& c, std::size_t n) {
  if (c.final()) return Dist<Value>::point(c.result());
  if (n == 0) return {};
  return r.run(z, c, n, [&](SchedState z0, const Config& c0, std::size_t n0) {
    return sched_step(r.pi_, z0, c0).bind([&](const std::pair<SchedState, Config>& next) {
      return exec_rec(r, next.first, next.second, n0 - 1);
    });
  });
}

using Partial = Dist<std::pair<SchedState, Config>>;

Partial pexec_rec(Recursion<Partial>& r, SchedState z, const Config& c, std::size_t n) {
  if (c.final() || n == 0) return Partial::point({z, c});
  return r.run(z, c, n, [&](SchedState z0, const Config& c0, std::size_t n0) {
    return sched_step(r.pi_, z0, c0).bind([&](const std::pair<SchedState, Config>& next) {
      return pexec_rec(r, next.first, next.second, n0 - 1);
    });
  });
}

}  // namespace

Dist<Value> exec_n(const SchedulerPolicy& pi, SchedState z, const Config& c, std::size_t n, bool memo) {
  Recursion<Dist<Value>> r(pi, memo);
  return exec_rec(r, z, c, n);
}

Dist<std::pair<SchedState, Config>> pexec_n(const SchedulerPolicy& pi, SchedState z, const Config& c, std::size_t n,
                                            bool memo) {
  Recursion<Partial> r(pi, memo);
  return pexec_rec(r, z, c, n);
}

Dist<std::vector<Expr>> thread_pools(const Dist<std::pair<SchedState, Config>>& d) {
  return d.map([](const std::pair<SchedState, Config>& zc) { return zc.second.threads; });
}

ErasabilityVerdict erasability_check(const SchedulerPolicy& pi, SchedState z, const Config& c, std::int64_t label,
                                     std::size_t n) {
  if (label < 0 || label >= static_cast<std::int64_t>(c.state.tapes.size())) {
    throw std::invalid_argument("erasability_check: label #t" + std::to_string(label) + " is not allocated");
  }
  const std::int64_t bound = c.state.tapes[static_cast<std::size_t>(label)].bound;
  Rational w = ratio(1, mpz_class(bound + 1));

  std::vector<std::pair<std::vector<Expr>, Rational>> mixed;
  for (std::int64_t v = 0; v <= bound; ++v) {
    Config shifted{c.threads, presample(c.state, label, v)};
    for (const auto& [pool, p] : thread_pools(pexec_n(pi, z, shifted, n))) mixed.emplace_back(pool, p * w);
  }
  Dist<std::vector<Expr>> lhs = Dist<std::vector<Expr>>::from_entries(std::move(mixed));
  Dist<std::vector<Expr>> rhs = thread_pools(pexec_n(pi, z, c, n));

  ErasabilityVerdict out;
  out.with_presample = lhs.mass();
  out.without_presample = rhs.mass();
  out.pass = lhs == rhs;
  if (!out.pass) {
    // first differing pool in the merged support order
    auto a = lhs.begin();
    auto b = rhs.begin();
    Order<std::vector<Expr>> less;
    while (a != lhs.end() || b != rhs.end()) {
      if (b == rhs.end() || (a != lhs.end() && less(a->first, b->first))) {
        out.counterexample = a->first;
        break;
      }
      if (a == lhs.end() || less(b->first, a->first)) {
        out.counterexample = b->first;
        break;
      }
      if (a->second != b->second) {
        out.counterexample = a->first;
        break;
      }
      ++a;
      ++b;
    }
    out.with_presample = lhs(*out.counterexample);
    out.without_presample = rhs(*out.counterexample);
  }
  return out;
}

}  // namespace probsched
