#include "probsched/engine/analysis.hpp"

#include <bit>
#include <map>
#include <unordered_map>

#include "probsched/semantics/step.hpp"

namespace probsched {

namespace {

// acc = Σ num_e · values[to_e] / den over the move's edges
void expected(const ConfigGraph& g, const Move& m, const std::vector<Rational>& values, Rational& acc) {
  acc = 0;
  for (const Edge& e : g.edges(m)) {
    if (e.num == 1) {
      acc += values[e.to];
    } else {
      acc += values[e.to] * e.num;
    }
  }
  if (m.den != 1) acc /= m.den;
}

enum class Objective { Max, Min };

struct Layered {
  std::vector<Rational> history;
  // masks[n][i]: optimal threads of node i with n steps left
  std::vector<std::vector<std::uint32_t>> masks;
};

// Backward value iteration over the BFS prefix that can still matter:
// values with n steps left are needed only for nodes within depth H - n.
Layered iterate(const ConfigGraph& g, std::size_t horizon, Objective obj, const std::vector<Rational>& final_value,
                Rational initial_nonfinal, Rational stuck_value, bool keep_masks, bool parallel) {
  const std::size_t total = g.prefix(horizon);
  std::vector<Rational> prev(total), cur(total);
  for (std::size_t i = 0; i < total; ++i) prev[i] = g.final(static_cast<NodeId>(i)) ? final_value[i] : initial_nonfinal;

  Layered out;
  out.history.push_back(prev[0]);
  if (keep_masks) out.masks.resize(horizon + 1);

  for (std::size_t n = 1; n <= horizon; ++n) {
    const auto count = static_cast<std::int64_t>(g.prefix(horizon - n));
    std::vector<std::uint32_t>* mask = keep_masks ? &out.masks[n] : nullptr;
    if (mask) mask->assign(static_cast<std::size_t>(count), 0);

#pragma omp parallel if (parallel && count > 256)
    {
      Rational acc, best;
#pragma omp for schedule(dynamic, 64)
      for (std::int64_t k = 0; k < count; ++k) {
        const auto id = static_cast<NodeId>(k);
        if (g.final(id)) {
          cur[id] = final_value[id];
          if (mask) (*mask)[id] = ~0u;
          continue;
        }
        std::uint32_t bits = 0;
        bool have = false;
        auto moves = g.moves(id);
        for (std::size_t t = 0; t < moves.size(); ++t) {
          const Move& m = moves[t];
          switch (m.kind) {
            case ThreadMove::Step: expected(g, m, prev, acc); break;
            case ThreadMove::Stutter: acc = prev[id]; break;
            default: acc = stuck_value; break;
          }
          bool better = !have || (obj == Objective::Max ? acc > best : acc < best);
          if (better) {
            best = acc;
            have = true;
            bits = 0;
          }
          if (t < 32 && acc == best) bits |= 1u << t;
        }
        cur[id] = best;
        if (mask) (*mask)[id] = bits;
      }
    }
    std::swap(prev, cur);
    out.history.push_back(prev[0]);
  }
  return out;
}

std::vector<Rational> violation_indicator(const ConfigGraph& g, std::size_t total, const Predicate& phi) {
  std::vector<Rational> v(total);
  for (std::size_t i = 0; i < total; ++i) {
    const auto id = static_cast<NodeId>(i);
    v[i] = g.final(id) && !phi(g.config(id).result()) ? 1 : 0;
  }
  return v;
}

struct ReplayOutcome {
  Witness witness;
  Rational violation;
};

// Runs the lowest-index optimal strategy forward, recording a script while
// all live configurations agree on a thread.
ReplayOutcome replay(const ConfigGraph& g, const Layered& lay, std::size_t horizon, const std::vector<Rational>& bad) {
  ReplayOutcome out;
  std::map<NodeId, Rational> live{{g.root(), Rational(1)}};
  bool flat = true;
  for (std::size_t t = 0; t < horizon; ++t) {
    const std::size_t left = horizon - t;
    std::map<NodeId, Rational> next;
    std::uint32_t common = ~0u;
    bool any = false;
    NodeId heaviest = 0;
    Rational heaviest_mass = -1;
    for (const auto& [id, m] : live) {
      if (g.final(id)) {
        out.violation += m * bad[id];
        continue;
      }
      any = true;
      common &= lay.masks[left][id];
      if (m > heaviest_mass) {
        heaviest_mass = m;
        heaviest = id;
      }
    }
    if (!any) {
      live.clear();
      break;
    }
    if (flat && common == 0) {
      flat = false;
      out.witness.flat_prefix = t;
    }
    std::size_t scripted = flat ? static_cast<std::size_t>(std::countr_zero(common))
                                : static_cast<std::size_t>(std::countr_zero(lay.masks[left][heaviest]));
    out.witness.script.push_back(scripted);
    for (const auto& [id, m] : live) {
      if (g.final(id)) continue;
      std::size_t choice = flat ? scripted : static_cast<std::size_t>(std::countr_zero(lay.masks[left][id]));
      const Move& mv = g.moves(id)[choice];
      switch (mv.kind) {
        case ThreadMove::Step:
          for (const Edge& e : g.edges(mv)) next[e.to] += m * Rational(e.num) / mv.den;
          break;
        case ThreadMove::Stutter:
          next[id] += m;
          break;
        default:
          break;
      }
    }
    live = std::move(next);
  }
  for (const auto& [id, m] : live) {
    if (g.final(id)) out.violation += m * bad[id];
  }
  out.witness.flat = flat;
  if (flat) out.witness.flat_prefix = out.witness.script.size();
  return out;
}

}  // namespace

AdversaryResult sup_violation(const Config& c, std::size_t n, const Predicate& phi, const EngineOptions& opt) {
  ConfigGraph g(c, opt.node_limit, opt.parallel);
  g.expand_to(n);
  const std::size_t total = g.prefix(n);
  if (opt.witness) {
    for (std::size_t i = 0; i < total; ++i) {
      if (g.thread_count(static_cast<NodeId>(i)) > 32) throw std::length_error("witness supports at most 32 threads");
    }
  }
  std::vector<Rational> bad = violation_indicator(g, total, phi);
  Layered lay = iterate(g, n, Objective::Max, bad, Rational(0), Rational(0), opt.witness, opt.parallel);

  AdversaryResult out;
  out.value = lay.history.back();
  out.history = std::move(lay.history);
  out.horizon = n;
  out.nodes = g.size();
  if (opt.witness) {
    ReplayOutcome r = replay(g, lay, n, bad);
    out.witness = std::move(r.witness);
    out.replayed = std::move(r.violation);
  }
  return out;
}

SafetyResult min_mass(const Config& c, std::size_t n, const EngineOptions& opt) {
  ConfigGraph g(c, opt.node_limit, opt.parallel);
  g.expand_to(n);
  std::vector<Rational> ones(g.prefix(n), Rational(1));
  Layered lay = iterate(g, n, Objective::Min, ones, Rational(1), Rational(0), false, opt.parallel);
  SafetyResult out;
  out.value = lay.history.back();
  out.history = std::move(lay.history);
  out.horizon = n;
  out.nodes = g.size();
  return out;
}

namespace {

struct ProductKey {
  SchedState z;
  NodeId node;
  bool operator==(const ProductKey& o) const { return z == o.z && node == o.node; }
};

struct ProductHash {
  std::size_t operator()(const ProductKey& k) const { return hash_combine(static_cast<std::size_t>(k.z), k.node); }
};

}  // namespace

ValueDistResult value_dist(const Config& c, const SchedulerPolicy& pi, std::size_t n, const EngineOptions& opt) {
  ConfigGraph g(c, opt.node_limit, opt.parallel);
  return value_dist(g, pi, n);
}

ValueDistResult value_dist(ConfigGraph& g, const SchedulerPolicy& pi, std::size_t n) {
  g.expand_to(n);
  std::unordered_map<ProductKey, Rational, ProductHash> live{{{pi.initial_state(), g.root()}, Rational(1)}};
  std::map<Value, Rational, Order<Value>> result;
  std::size_t touched = 0;
  for (std::size_t t = 0;; ++t) {
    touched += live.size();
    std::unordered_map<ProductKey, Rational, ProductHash> next;
    for (const auto& [key, m] : live) {
      if (g.final(key.node)) {
        result[g.config(key.node).result()] += m;
        continue;
      }
      if (t == n) continue;
      for (const auto& ch : pi.choose(key.z, censor(g.config(key.node)))) {
        const Move& mv = g.moves(key.node)[ch.thread];
        switch (mv.kind) {
          case ThreadMove::Step: {
            Rational w = m * ch.p / mv.den;
            for (const Edge& e : g.edges(mv)) next[{ch.next, e.to}] += w * e.num;
            break;
          }
          case ThreadMove::Stutter:
            next[{ch.next, key.node}] += m * ch.p;
            break;
          default:
            break;
        }
      }
    }
    if (t == n || next.empty()) break;
    live = std::move(next);
  }
  std::vector<std::pair<Value, Rational>> entries(result.begin(), result.end());
  ValueDistResult out;
  out.dist = Dist<Value>::from_entries(std::move(entries));
  out.residual = 1 - out.dist.mass();
  out.horizon = n;
  out.nodes = g.size();
  out.product_states = touched;
  return out;
}

BoundVerdict check_bound(const Config& c, std::size_t n, const Predicate& phi, const Rational& epsilon,
                         EngineOptions opt) {
  opt.witness = true;
  BoundVerdict v;
  v.epsilon = epsilon;
  v.adversary = sup_violation(c, n, phi, opt);
  v.holds = v.adversary.value <= epsilon;
  return v;
}

namespace {

struct RefKey {
  Config config;
  std::size_t n;
  bool operator==(const RefKey& o) const { return n == o.n && config == o.config; }
};

struct RefHash {
  std::size_t operator()(const RefKey& k) const { return hash_combine(k.config.hash(), k.n); }
};

class ReferenceDP {
 public:
  ReferenceDP(Objective obj, bool memo, std::function<Rational(const Config&)> at_final, Rational at_zero)
      : obj_(obj), memo_(memo), at_final_(std::move(at_final)), at_zero_(std::move(at_zero)) {}

  Rational value(const Config& c, std::size_t n) {
    if (c.final()) return at_final_(c);
    if (n == 0) return at_zero_;
    if (memo_) {
      if (auto it = table_.find({c, n}); it != table_.end()) return it->second;
    }
    std::optional<Rational> best;
    for (std::size_t i = 0; i < c.threads.size(); ++i) {
      Dist<Config> d = tpstep(c, i);
      Rational v = 0;
      for (const auto& [next, p] : d) v += p * value(next, n - 1);
      if (!best || (obj_ == Objective::Max ? v > *best : v < *best)) best = v;
    }
    if (memo_) table_.emplace(RefKey{c, n}, *best);
    return *best;
  }

 private:
  Objective obj_;
  bool memo_;
  std::function<Rational(const Config&)> at_final_;
  Rational at_zero_;
  std::unordered_map<RefKey, Rational, RefHash> table_;
};

}  // namespace

Rational sup_violation_reference(const Config& c, std::size_t n, const Predicate& phi, bool memo) {
  ReferenceDP dp(
      Objective::Max, memo, [&](const Config& f) { return Rational(phi(f.result()) ? 0 : 1); }, Rational(0));
  return dp.value(c, n);
}

Rational min_mass_reference(const Config& c, std::size_t n, bool memo) {
  ReferenceDP dp(
      Objective::Min, memo, [](const Config&) { return Rational(1); }, Rational(1));
  return dp.value(c, n);
}

}  // namespace probsched
