// Acceptance run: one PASS/FAIL line per criterion with its time budget.
// Exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "probsched/analytics/bloom.hpp"
#include "probsched/engine/analysis.hpp"
#include "probsched/fixtures/fixtures.hpp"
#include "probsched/mc/mc.hpp"
#include "probsched/semantics/exec.hpp"
#include "probsched/syntax/erase.hpp"
#include "probsched/syntax/parser.hpp"
#include "probsched/testing/unredacted_view.hpp"

using namespace probsched;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures while letting a criterion keep checking.
class Notes {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      if (failures_++ < 5) fail_text_ += (fail_text_.empty() ? "" : "; ") + what;
    }
  }
  void info(const std::string& s) { info_ += (info_.empty() ? "" : ", ") + s; }
  Outcome done() const {
    if (pass_) return {true, info_};
    std::string d = fail_text_;
    if (failures_ > 5) d += " (+" + std::to_string(failures_ - 5) + " more)";
    return {false, d};
  }

 private:
  bool pass_ = true;
  int failures_ = 0;
  std::string info_, fail_text_;
};

Config config_of(const Fixture& f) { return initial_config(parse_core(f.source)); }
Config config_of(std::string_view name) { return config_of(fixture(name)); }

std::string r2s(const Rational& r) { return to_string(r); }

Rational violation_mass(const Dist<Value>& d, const Predicate& phi) {
  return d.prob([&](const Value& v) { return !phi(v); });
}

std::vector<std::vector<std::size_t>> all_scripts(std::size_t alphabet, std::size_t max_len) {
  std::vector<std::vector<std::size_t>> out{{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t a = 0; a < alphabet; ++a) {
        auto s = out[i];
        s.push_back(a);
        out.push_back(std::move(s));
      }
    }
    begin = end;
  }
  return out;
}

std::size_t max_threads(const ConfigGraph& g) {
  std::size_t m = 1;
  for (std::size_t i = 0; i < g.size(); ++i) m = std::max(m, g.thread_count(static_cast<NodeId>(i)));
  return m;
}

// Uniform law of thread 0's result over 0..top, built independently.
Dist<Value> uniform_values(std::int64_t top) {
  std::vector<std::pair<Value, Rational>> e;
  for (std::int64_t v = 0; v <= top; ++v) e.emplace_back(int_lit(v), ratio(1, top + 1));
  return Dist<Value>::from_entries(std::move(e));
}

// Occupancy oracle: Pr[c distinct bits after m uniform draws on S bits] is
// C(S,c) c! S2(m,c) / S^m; the false-positive rate is Σ_c that · (c/S)^k.
Rational occupancy_fp(std::int64_t S, std::int64_t k, std::int64_t m) {
  std::vector<std::vector<mpz_class>> s2(static_cast<std::size_t>(m) + 1,
                                          std::vector<mpz_class>(static_cast<std::size_t>(m) + 1, 0));
  s2[0][0] = 1;
  for (std::int64_t i = 1; i <= m; ++i) {
    for (std::int64_t c = 1; c <= i; ++c) s2[i][c] = c * s2[i - 1][c] + s2[i - 1][c - 1];
  }
  mpz_class sm;
  mpz_ui_pow_ui(sm.get_mpz_t(), static_cast<unsigned long>(S), static_cast<unsigned long>(m));
  Rational total = 0;
  for (std::int64_t c = 0; c <= std::min(S, m); ++c) {
    mpz_class falling = 1;
    for (std::int64_t j = 0; j < c; ++j) falling *= S - j;
    mpz_class ck, sk;
    mpz_ui_pow_ui(ck.get_mpz_t(), static_cast<unsigned long>(c), static_cast<unsigned long>(k));
    mpz_ui_pow_ui(sk.get_mpz_t(), static_cast<unsigned long>(S), static_cast<unsigned long>(k));
    total += ratio(falling * s2[m][c] * ck, sm * sk);
  }
  return total;
}

Outcome adversary_bound() {
  Notes n;
  const Fixture& f = fixture("conTwoAdd-I1");
  AdversaryResult r = sup_violation(config_of(f), 80, Predicate::parse("ret > 0"), {.witness = true});
  n.require(r.value == Rational(1, 16), "sup = " + r2s(r.value) + ", want 1/16");
  n.require(r.replayed && *r.replayed == r.value, "witness replay disagrees");
  n.info("sup = " + r2s(r.value));
  n.info(std::to_string(r.nodes) + " nodes");
  return n.done();
}

Outcome sequential_two_add() {
  Notes n;
  ValueDistResult r = value_dist(config_of("twoAdd"), SchedulerPolicy::round_robin(), 30);
  Rational zero = r.dist(int_lit(0));
  n.require(zero == Rational(1, 16), "Pr[ret=0] = " + r2s(zero));
  n.require(r.residual == 0, "residual " + r2s(r.residual));
  n.info("Pr[ret=0] = " + r2s(zero));
  n.info("residual " + r2s(r.residual));
  return n.done();
}

Outcome twoincr_uniform() {
  Notes n;
  for (const char* name : {"twoincr-I1", "twoincr-I2"}) {
    const Fixture& f = fixture(name);
    ValueDistResult r = value_dist(config_of(f), SchedulerPolicy::round_robin(), f.horizon);
    n.require(r.dist == uniform_values(15), std::string(name) + " not uniform on 0..15");
    n.require(r.residual == 0, std::string(name) + " residual " + r2s(r.residual));
  }
  const Fixture& f = fixture("twoincr-I3");
  Rational floor = 1;
  for (int i = 0; i < 6; ++i) floor *= f.decay;
  floor = 1 - floor;
  Config c = config_of(f);
  ConfigGraph g(c);
  // grow the horizon until the rejection residual is below (decay)^6
  std::size_t h = f.horizon;
  ValueDistResult r = value_dist(g, SchedulerPolicy::round_robin(), h);
  while (r.dist.mass() < floor && h < 2048) {
    h *= 2;
    r = value_dist(g, SchedulerPolicy::round_robin(), h);
  }
  n.require(r.dist.size() == 16, "I3 support size " + std::to_string(r.dist.size()));
  const Rational first = r.dist.size() ? r.dist.support().front().second : Rational(0);
  for (std::int64_t v = 0; v <= 15; ++v) n.require(r.dist(int_lit(v)) == first, "I3 mass of " + std::to_string(v) + " differs");
  n.require(r.dist.mass() >= floor, "I3 mass " + to_decimal(r.dist.mass()));
  std::ostringstream res;
  res << "I3 at H=" << h << " residual " << to_double(r.residual) << " <= " << to_double(1 - floor);
  n.info(res.str());
  return n.done();
}

Outcome interchangeable() {
  Notes n;
  const Predicate phi = Predicate::parse("ret > 0");
  const Rational i1 = sup_violation(config_of("conTwoAdd-I1"), 80, phi).value;
  const Rational i2 = sup_violation(config_of("conTwoAdd-I2"), 80, phi).value;
  n.require(i1 == i2, "I1 " + r2s(i1) + " vs I2 " + r2s(i2));

  // I3 can reject and retry, so each step bound leaves a residual. Compare
  // the shape: the violation share of terminating mass, and the outcome
  // masses up to a common scale.
  const Fixture& f3 = fixture("conTwoAdd-I3");
  Config c3 = config_of(f3);
  const std::size_t h = f3.horizon;
  const Rational viol = sup_violation(c3, h, phi).value;
  const Rational term = sup_violation(c3, h, Predicate::parse("false")).value;
  n.require(term > 0 && viol / term == i1, "I3 share " + (term > 0 ? r2s(viol / term) : std::string("undefined")));
  n.require(1 - term <= Rational(1, 1'000'000), "I3 residual " + to_decimal(1 - term));

  Dist<Value> base = value_dist(config_of("conTwoAdd-I1"), SchedulerPolicy::round_robin(), 80).dist;
  for (const auto& pi : {SchedulerPolicy::round_robin(), SchedulerPolicy::uniform_random()}) {
    ValueDistResult r3 = value_dist(c3, pi, h);
    n.require(r3.dist.mass() > 0 && r3.dist.normalized() == base, "I3 outcome shape under " + pi.name());
  }
  n.info("I1 = I2 = " + r2s(i1));
  n.info("I3 share " + r2s(term > 0 ? viol / term : Rational(0)) + " at H=" + std::to_string(h));
  return n.done();
}

Outcome lazy_sampler() {
  Notes n;
  const Fixture& f = fixture("lazyrace");
  Rational v = sup_violation(config_of(f), f.horizon, Predicate::parse(f.predicate)).value;
  n.require(v == Rational(1, 2), "sup = " + r2s(v));
  n.info("sup = " + r2s(v));
  return n.done();
}

Outcome hash_determinism() {
  Notes n;
  const Fixture& f = fixture("hashrace");
  Rational v = sup_violation(config_of(f), f.horizon, Predicate::parse("exists n in 0..1. ret == (n, n)")).value;
  n.require(v == 0, "sup = " + r2s(v));
  n.info("sup = " + r2s(v));
  return n.done();
}

Outcome safety() {
  Notes n;
  Config c = config_of("stuck_half");
  for (std::size_t h = 3; h <= 10; ++h) {
    Rational m = min_mass(c, h).value;
    n.require(m == Rational(1, 2), "H=" + std::to_string(h) + ": " + r2s(m));
  }
  n.info("min_mass = 1/2 for H = 3..10");
  return n.done();
}

// Scripts up to max_len over an alphabet, grouped into classes that drive
// both graphs identically. An entry is read modulo the thread count, so it
// cannot matter at a step where every live configuration of both graphs
// has a single thread; once all are final no later entry is read. visit()
// gets one representative and the size of its class.
class ScriptSweep {
 public:
  using Visit = std::function<void(const std::vector<std::size_t>&, std::uint64_t)>;

  ScriptSweep(const ConfigGraph& a, const ConfigGraph& b, std::size_t alphabet, std::size_t max_len)
      : a_(a), b_(b), alphabet_(alphabet), max_len_(max_len) {}

  // Returns the number of scripts covered.
  std::uint64_t run(const Visit& visit) {
    covered_ = 0;
    std::vector<std::size_t> prefix;
    dfs(prefix, {a_.root()}, {b_.root()}, 1, visit);
    return covered_;
  }

  std::uint64_t total() const { return subtree(0); }

 private:
  using Live = std::vector<NodeId>;

  std::uint64_t subtree(std::size_t depth) const {
    std::uint64_t n = 0, p = 1;
    for (std::size_t j = depth; j <= max_len_; ++j, p *= alphabet_) n += p;
    return n;
  }

  static Live advance(const ConfigGraph& g, const Live& live, std::size_t entry) {
    Live next;
    for (NodeId id : live) {
      if (g.final(id)) {
        next.push_back(id);
        continue;
      }
      const Move& m = g.moves(id)[entry % g.thread_count(id)];
      if (m.kind == ThreadMove::Step) {
        for (const Edge& e : g.edges(m)) next.push_back(e.to);
      } else if (m.kind == ThreadMove::Stutter) {
        next.push_back(id);
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    return next;
  }

  static bool all(const ConfigGraph& g, const Live& live, bool need_final) {
    for (NodeId id : live) {
      if (g.final(id)) continue;
      if (need_final || g.thread_count(id) > 1) return false;
    }
    return true;
  }

  void dfs(std::vector<std::size_t>& prefix, const Live& la, const Live& lb, std::uint64_t mult, const Visit& visit) {
    visit(prefix, mult);
    covered_ += mult;
    const std::size_t d = prefix.size();
    if (d == max_len_) return;
    if (all(a_, la, true) && all(b_, lb, true)) {
      covered_ += mult * (subtree(d) - 1);
      return;
    }
    const bool single = all(a_, la, false) && all(b_, lb, false);
    for (std::size_t e = 0; e < (single ? 1 : alphabet_); ++e) {
      prefix.push_back(e);
      dfs(prefix, advance(a_, la, e), advance(b_, lb, e), single ? mult * alphabet_ : mult, visit);
      prefix.pop_back();
    }
  }

  const ConfigGraph& a_;
  const ConfigGraph& b_;
  std::size_t alphabet_, max_len_;
  std::uint64_t covered_ = 0;
};

Outcome erasure() {
  Notes n;
  std::size_t fixtures = 0, runs = 0;
  std::uint64_t scripts = 0;
  for (const Fixture& f : catalogue()) {
    if (!f.uses_tapes || !f.exact) continue;
    ++fixtures;
    Expr e = parse_core(f.source);
    Expr erased = erase(e);
    n.require(tape_free(erased), f.name + ": erasure left tapes");
    ConfigGraph go(initial_config(e)), ge(initial_config(erased));
    go.expand_to(f.horizon);
    const bool retries = f.decay != 0;
    // erasure adds steps, so leave the erased run some slack
    const std::size_t h = f.horizon, he = 2 * f.horizon;
    auto agree = [&](const SchedulerPolicy& pi) {
      ValueDistResult a = value_dist(go, pi, h);
      ValueDistResult b = value_dist(ge, pi, he);
      ++runs;
      if (retries) return a.dist.mass() > 0 && b.dist.mass() > 0 && a.dist.normalized() == b.dist.normalized();
      return a.residual == 0 && b.residual == 0 && a.dist == b.dist;
    };
    n.require(agree(SchedulerPolicy::round_robin()), f.name + " under round_robin");
    ge.expand_to(he);
    ScriptSweep sweep(go, ge, std::max(max_threads(go), max_threads(ge)), 14);
    std::uint64_t bad = 0;
    const std::uint64_t covered = sweep.run([&](const std::vector<std::size_t>& s, std::uint64_t mult) {
      if (!agree(SchedulerPolicy::scripted(s))) bad += mult;
    });
    scripts += covered;
    n.require(covered == sweep.total(), f.name + ": sweep covered " + std::to_string(covered) + " of " +
                                            std::to_string(sweep.total()) + " scripts");
    n.require(bad == 0, f.name + ": " + std::to_string(bad) + " scripts differ");
  }
  n.info(std::to_string(fixtures) + " fixtures");
  n.info(std::to_string(scripts) + " scripts in " + std::to_string(runs) + " distinct schedules");
  return n.done();
}

// Evenly spaced non-final configurations that own a tape.
std::vector<Config> taped_configs(const Fixture& f, std::size_t want) {
  ConfigGraph g(config_of(f));
  g.expand_to(std::min<std::size_t>(f.horizon, 40));
  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto id = static_cast<NodeId>(i);
    if (!g.final(id) && !g.config(id).state.tapes.empty()) ids.push_back(id);
  }
  std::vector<Config> out;
  if (ids.empty()) return out;
  const std::size_t stride = std::max<std::size_t>(1, ids.size() / want);
  for (std::size_t k = 0; k < ids.size() && out.size() < want; k += stride) out.push_back(g.config(ids[k]));
  return out;
}

SchedulerPolicy tape_peeking() {
  return SchedulerPolicy::external(
      [](SchedState z, const SchedView& v) {
        const auto& tapes = testing::unredacted_tapes(v);
        bool loaded = !tapes.empty() && !tapes[0].queue.empty();
        std::size_t t = loaded && v.thread_count() > 1 ? 1 : 0;
        return std::vector<SchedChoice>{{z, t, Rational(1)}};
      },
      "tape-peeking");
}

Outcome scheduler_erasability() {
  Notes n;
  const std::vector<SchedulerPolicy> legal{SchedulerPolicy::round_robin(), SchedulerPolicy::scripted({1, 0, 1, 1, 0}),
                                           SchedulerPolicy::scripted({0, 0, 1}), SchedulerPolicy::uniform_random()};
  std::size_t checks = 0, peek_failures = 0;
  for (const Fixture& f : catalogue()) {
    if (!f.uses_tapes || !f.exact) continue;
    for (const Config& c : taped_configs(f, 10)) {
      for (std::size_t label = 0; label < c.state.tapes.size(); ++label) {
        for (const auto& pi : legal) {
          for (std::size_t h = 0; h <= 10; ++h) {
            ++checks;
            n.require(erasability_check(pi, 0, c, static_cast<std::int64_t>(label), h).pass,
                      f.name + " label " + std::to_string(label) + " n=" + std::to_string(h) + " under " + pi.name());
          }
        }
      }
      if (c.threads.size() > 1) peek_failures += !erasability_check(tape_peeking(), 0, c, 0, 1).pass;
    }
  }
  State s;
  s.tapes.push_back(Tape{1, {}});
  Config probe{{rand_l(label_lit(0), int_lit(1)), parse_core("1 + 1")}, s};
  peek_failures += !erasability_check(tape_peeking(), 0, probe, 0, 1).pass;
  n.require(peek_failures >= 2, "tape-peeking scheduler was not caught on fixtures");
  n.info(std::to_string(checks) + " legal checks");
  n.info("tape-peeking caught " + std::to_string(peek_failures) + " times");
  return n.done();
}

Outcome bloom_recurrence() {
  Notes n;
  std::size_t cases = 0;
  auto check = [&](std::int64_t S, std::int64_t k, std::int64_t N) {
    ++cases;
    Rational want = efp(k * N, 0, S, k);
    Rational got = bloom_bruteforce(S, k, N, true);
    n.require(got == want, "(S,k,N)=(" + std::to_string(S) + "," + std::to_string(k) + "," + std::to_string(N) +
                               "): " + r2s(got) + " vs " + r2s(want));
  };
  for (std::int64_t S = 2; S * S <= static_cast<std::int64_t>(kBruteforceLimit) || S <= 2; ++S) {
    for (std::int64_t k = 1;; ++k) {
      if (bruteforce_size(S, k, 0) > kBruteforceLimit) break;
      for (std::int64_t N = 0; bruteforce_size(S, k, N) <= kBruteforceLimit; ++N) check(S, k, N);
    }
  }
  // past that only (S, 1, 0) fits: no insertions, a single lookup draw
  for (std::int64_t S = 3163; S <= static_cast<std::int64_t>(kBruteforceLimit); ++S) {
    if (bruteforce_size(S, 1, 1) <= kBruteforceLimit) continue;
    check(S, 1, 0);
  }
  // S = 1 satisfies the size bound for every k and N; a finite slice
  for (std::int64_t k = 1; k <= 6; ++k) {
    for (std::int64_t N = 0; N <= 6; ++N) check(1, k, N);
  }
  n.info(std::to_string(cases) + " parameter triples");
  return n.done();
}

Outcome bloom_end_to_end() {
  Notes n;
  const Fixture& tiny = fixture("bloom-2-1");
  const Predicate phi = Predicate::parse("ret == false");
  Rational v = sup_violation(config_of(tiny), tiny.horizon, phi).value;
  n.require(v == Rational(3, 4), "sup = " + r2s(v));
  n.require(efp(2, 0, 2, 1) == Rational(3, 4), "efp(2,0,2,1) = " + r2s(efp(2, 0, 2, 1)));
  n.require(occupancy_fp(2, 1, 2) == Rational(3, 4), "occupancy oracle disagrees on the tiny filter");

  const Fixture& big = fixture("bloom-8-2");
  const Rational target = efp(4, 0, 8, 2);
  n.require(target == occupancy_fp(8, 2, 4), "efp(4,0,8,2) disagrees with the occupancy oracle");
  McOptions opt;
  opt.trials = 100'000;
  opt.seed = 20240601;
  opt.confidence = 0.99;
  const auto t0 = std::chrono::steady_clock::now();
  Estimate e = estimate(config_of(big), SchedulerPolicy::uniform_random(), phi, opt);
  const double mc_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  n.require(mc_s <= 120, "mc took " + std::to_string(mc_s) + " s, budget 120 s");
  const double t = to_double(target);
  n.require(e.ci_low <= t && t <= e.ci_high, "99% CI [" + std::to_string(e.ci_low) + ", " + std::to_string(e.ci_high) +
                                                 "] misses " + std::to_string(t));
  n.require(e.timeouts == 0 && e.stuck == 0, "mc had timeouts or stuck runs");
  n.info("tiny sup = " + r2s(v));
  std::ostringstream ci;
  ci << "mc " << e.point << " in [" << e.ci_low << ", " << e.ci_high << "] ∋ " << t;
  n.info(ci.str());
  return n.done();
}

// Random small distribution over 0..4 with mass at most 1.
Dist<std::int64_t> random_dist(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> w(0, 6);
  std::vector<int> weights(5);
  int total = 0;
  for (int& x : weights) total += x = w(rng);
  const int den = total + static_cast<int>(rng() % 3);
  std::vector<std::pair<std::int64_t, Rational>> e;
  for (std::int64_t i = 0; i < 5; ++i) {
    if (weights[i] && den) e.emplace_back(i, ratio(weights[i], den));
  }
  return Dist<std::int64_t>::from_entries(std::move(e));
}

Outcome property_suites() {
  Notes n;
  std::mt19937_64 rng(7);

  // monad laws
  for (int rep = 0; rep < 200; ++rep) {
    auto m = random_dist(rng);
    std::vector<Dist<std::int64_t>> ft(5), gt(5);
    for (auto& d : ft) d = random_dist(rng);
    for (auto& d : gt) d = random_dist(rng);
    auto f = [&](std::int64_t x) { return ft[static_cast<std::size_t>(x)]; };
    auto g = [&](std::int64_t x) { return gt[static_cast<std::size_t>(x)]; };
    const std::int64_t a = static_cast<std::int64_t>(rng() % 5);
    n.require(Dist<std::int64_t>::point(a).bind(f) == f(a), "left identity");
    n.require(m.bind([](std::int64_t x) { return Dist<std::int64_t>::point(x); }) == m, "right identity");
    n.require(m.bind(f).bind(g) == m.bind([&](std::int64_t x) { return f(x).bind(g); }), "associativity");
  }

  // exec_n is monotone in n
  const std::vector<SchedulerPolicy> policies{SchedulerPolicy::round_robin(), SchedulerPolicy::uniform_random(),
                                              SchedulerPolicy::scripted({1, 1, 0, 1})};
  for (const char* name : {"twoAdd", "conTwoAdd-I1", "stuck_half_if"}) {
    Config c = config_of(name);
    for (const auto& pi : policies) {
      Dist<Value> prev;
      for (std::size_t h = 0; h <= 30; ++h) {
        Dist<Value> cur = exec_n(pi, pi.initial_state(), c, h);
        for (const auto& [v, p] : prev) n.require(cur(v) >= p, std::string(name) + " exec_n shrinks at " + std::to_string(h));
        prev = std::move(cur);
      }
    }
  }

  // the adversary dominates every concrete policy, and its witness replays
  std::size_t dominance = 0;
  for (const char* name : {"twoAdd", "conTwoAdd", "conTwoAdd-I1", "conTwoAdd-I2", "hashrace", "lazyrace", "hash-2-3"}) {
    const Fixture& f = fixture(name);
    Config c = config_of(f);
    const Predicate phi = Predicate::parse(f.predicate);
    AdversaryResult adv = sup_violation(c, f.horizon, phi, {.witness = true});
    n.require(adv.replayed && *adv.replayed == adv.value, std::string(name) + " witness replay");
    if (adv.witness && adv.witness->flat) {
      ValueDistResult w = value_dist(c, SchedulerPolicy::scripted(adv.witness->script), f.horizon);
      n.require(violation_mass(w.dist, phi) == adv.value, std::string(name) + " witness script");
    }
    ConfigGraph g(c);
    std::vector<SchedulerPolicy> pis = policies;
    for (const auto& s : all_scripts(2, 6)) pis.push_back(SchedulerPolicy::scripted(s));
    for (const auto& pi : pis) {
      ++dominance;
      Rational got = violation_mass(value_dist(g, pi, f.horizon).dist, phi);
      n.require(got <= adv.value, std::string(name) + " under " + pi.name() + " exceeds the adversary");
    }
  }

  // Monte Carlo replays exactly, serial or parallel
  {
    Config c = config_of("conTwoAdd-I2");
    const Predicate phi = Predicate::parse("ret > 0");
    McOptions a;
    a.trials = 3000;
    a.seed = 99;
    McOptions b = a;
    b.parallel = false;
    Estimate x = estimate(c, SchedulerPolicy::uniform_random(), phi, a);
    Estimate y = estimate(c, SchedulerPolicy::uniform_random(), phi, a);
    Estimate z = estimate(c, SchedulerPolicy::uniform_random(), phi, b);
    n.require(x.violations == y.violations && x.total_steps == y.total_steps, "mc replay");
    n.require(x.violations == z.violations && x.total_steps == z.total_steps, "mc serial vs parallel");
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      TrialOutcome p = run_trial(c, SchedulerPolicy::uniform_random(), seed, 100000);
      TrialOutcome q = run_trial(c, SchedulerPolicy::uniform_random(), seed, 100000);
      n.require(p.steps == q.steps && equal(p.value, q.value), "run_trial replay");
    }
  }

  // CI coverage: twoAdd violates ret > 0 with probability 1/16
  {
    Config c = config_of("twoAdd");
    const Predicate phi = Predicate::parse("ret > 0");
    const int reps = 200;
    int covered = 0;
    for (int rep = 0; rep < reps; ++rep) {
      McOptions o;
      o.trials = 1000;
      o.seed = 5000 + static_cast<std::uint64_t>(rep);
      o.confidence = 0.95;
      Estimate e = estimate(c, SchedulerPolicy::round_robin(), phi, o);
      covered += e.ci_low <= 1.0 / 16 && 1.0 / 16 <= e.ci_high;
    }
    n.require(covered >= 180, "coverage " + std::to_string(covered) + "/200");
    n.info("CI coverage " + std::to_string(covered) + "/" + std::to_string(reps));
  }
  n.info(std::to_string(dominance) + " dominance checks");
  return n.done();
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

// Optional arguments select criteria by number.
int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const std::vector<Criterion> criteria{
      {1, "conTwoAdd-I1 adversary bound is 1/16", 30, adversary_bound},
      {2, "sequential twoAdd gives Pr[0] = 1/16", 5, sequential_two_add},
      {3, "twoincr results are uniform", 60, twoincr_uniform},
      {4, "counter implementations are interchangeable", 300, interchangeable},
      {5, "lazy sampler race is 1/2", 120, lazy_sampler},
      {6, "hash answers agree after the first write", 120, hash_determinism},
      {7, "stuck_half keeps mass 1/2", 1, safety},
      {8, "erasure preserves exec distributions", 300, erasure},
      {9, "presampling is scheduler erasable", 120, scheduler_erasability},
      {10, "Bloom recurrence matches enumeration", 120, bloom_recurrence},
      {11, "Bloom filter false positives end to end", 720, bloom_end_to_end},
      {12, "property suites", 600, property_suites},
  };
  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.pass && s > c.limit_s) {
      o.pass = false;
      o.detail += (o.detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    failed += !o.pass;
    std::printf("%s %2d %-46s %8.2f s / %4.0f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, s, c.limit_s,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
