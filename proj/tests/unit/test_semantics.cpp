#include <doctest.h>

#include <climits>

#include "probsched/fixtures/fixtures.hpp"
#include "probsched/semantics/exec.hpp"
#include "probsched/semantics/step.hpp"
#include "probsched/syntax/parser.hpp"
#include "probsched/testing/unredacted_view.hpp"

using namespace probsched;

namespace {

Config start(const std::string& src) { return initial_config(parse_core(src)); }

// Result of a program that uses no randomness and a single thread.
Config run_det(Config c, std::size_t fuel = 1000) {
  while (!c.final() && fuel-- > 0) {
    Dist<Config> d = tpstep(c, 0);
    REQUIRE(d.size() == 1);
    c = d.support().front().first;
  }
  return c;
}

bool stuck_somewhere(const std::string& src) {
  Config c = start(src);
  for (int fuel = 0; fuel < 1000; ++fuel) {
    if (c.final()) return false;
    Dist<Config> d = tpstep(c, 0);
    if (d.empty()) return true;
    c = d.support().front().first;
  }
  return false;
}

Value result_of(const std::string& src) { return run_det(start(src)).result(); }

}  // namespace

TEST_CASE("deterministic reductions") {
  CHECK(equal(result_of("1 + 2 * 3"), int_lit(7)));
  CHECK(equal(result_of("let x = 4 in x * x"), int_lit(16)));
  CHECK(equal(result_of("(rec f n = if n == 0 then 1 else n * f (n - 1)) 5"), int_lit(120)));
  CHECK(equal(result_of("fst (1, 2) + snd (3, 4)"), int_lit(5)));
  CHECK(equal(result_of("match inr 3 with inl x -> x | inr y -> y + 1 end"), int_lit(4)));
  CHECK(equal(result_of("(1, true) == (1, true)"), bool_lit(true)));
  CHECK(equal(result_of("7 / 2 + 7 % 2"), int_lit(4)));
  CHECK(equal(result_of("list_length [4; 5; 6]"), int_lit(3)));
}

TEST_CASE("heap operations") {
  CHECK(equal(result_of("let l = ref 1 in l := 5; !l"), int_lit(5)));
  CHECK(equal(result_of("let l = ref 1 in faa l 10"), int_lit(1)));
  CHECK(equal(result_of("let l = ref 1 in faa l 10; !l"), int_lit(11)));
  CHECK(equal(result_of("let l = ref 0 in let b = cas l 0 5 in (b, !l)"), pair(bool_lit(true), int_lit(5))));
  CHECK(equal(result_of("let l = ref 0 in let b = cas l 1 5 in (b, !l)"), pair(bool_lit(false), int_lit(0))));
  // the pair's right component is read before the cas runs
  CHECK(equal(result_of("let l = ref 0 in (cas l 0 5, !l)"), pair(bool_lit(true), int_lit(0))));
  CHECK(equal(result_of("let a = array 3 0 in a.[2] := 9; a.[2] + a.[0]"), int_lit(9)));
  // fresh locations are the next heap index
  Config c = run_det(start("let a = ref 0 in let b = ref 0 in b"));
  CHECK(equal(c.result(), loc_lit(1)));
  CHECK(c.state.heap.size() == 2);
}

TEST_CASE("stuck terms") {
  CHECK(stuck_somewhere("1 + true"));
  CHECK(stuck_somewhere("9223372036854775807 + 1"));
  CHECK(stuck_somewhere("-9223372036854775807 - 2"));
  CHECK(stuck_somewhere("1 / 0"));
  CHECK(stuck_somewhere("1 % 0"));
  CHECK(stuck_somewhere("if 1 then 2 else 3"));
  CHECK(stuck_somewhere("1 < true"));
  CHECK(stuck_somewhere("true && 1"));
  CHECK(stuck_somewhere("!5"));
  CHECK(stuck_somewhere("(array 2 0).[2]"));
  CHECK(stuck_somewhere("(array 2 0).[-1]"));
  CHECK(stuck_somewhere("array 0 0"));
  CHECK(stuck_somewhere("rand (-1)"));
  CHECK(stuck_somewhere("alloctape (-1)"));
  CHECK(stuck_somewhere("rand #t0 1"));
  CHECK(stuck_somewhere("fst 3"));
  CHECK(stuck_somewhere("3 4"));
  // a second array is a separate block
  CHECK(stuck_somewhere("let a = array 1 0 in let b = array 1 0 in a.[1]"));
}

TEST_CASE("rand is uniform and labelled rand reads the tape") {
  Dist<Config> d = tpstep(start("rand 3"), 0);
  CHECK(d.size() == 4);
  for (const auto& [c, p] : d) CHECK(p == Rational(1, 4));

  Config c = run_det(start("alloctape 2"));
  CHECK(equal(c.result(), label_lit(0)));
  CHECK(c.state.tapes.size() == 1);
  CHECK(c.state.tapes[0].bound == 2);

  State s = presample(presample(c.state, 0, 1), 0, 2);
  Config pop{{rand_l(label_lit(0), int_lit(2))}, s};
  Dist<Config> one = tpstep(pop, 0);
  REQUIRE(one.size() == 1);
  const Config& after = one.support().front().first;
  CHECK(equal(after.result(), int_lit(1)));
  CHECK(after.state.tapes[0].queue == std::vector<std::int64_t>{2});

  // other bound: fresh uniform draw, tape untouched
  Config other{{rand_l(label_lit(0), int_lit(1))}, s};
  Dist<Config> two = tpstep(other, 0);
  CHECK(two.size() == 2);
  for (const auto& [n, p] : two) CHECK(n.state.tapes[0].queue == s.tapes[0].queue);

  CHECK_THROWS_AS(presample(c.state, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(presample(c.state, 1, 0), std::invalid_argument);
}

TEST_CASE("fork appends a thread and returns unit") {
  Config c = start("fork (1 + 1)");
  Dist<Config> d = tpstep(c, 0);
  REQUIRE(d.size() == 1);
  const Config& n = d.support().front().first;
  CHECK(n.threads.size() == 2);
  CHECK(equal(n.threads[0], unit_lit()));
  CHECK(equal(n.threads[1], parse_core("1 + 1")));
  // the main thread is a value, so the pool is final and has no step
  CHECK(n.final());
  CHECK(tpstep(n, 0).empty());
  // a finished forked thread stutters
  Config side{{parse_core("1 + 1"), int_lit(2)}, {}};
  CHECK(tpstep(side, 1) == Dist<Config>::point(side));
}

TEST_CASE("evaluation is right to left") {
  // the right operand's effect happens first
  CHECK(equal(result_of("let l = ref 0 in (l := 1; 10) - (l := 2; !l)"), int_lit(8)));
  CHECK(equal(result_of("let l = ref 0 in ((faa l 1), (faa l 10))"), pair(int_lit(10), int_lit(0))));
}

TEST_CASE("twoAdd distribution matches an independent convolution") {
  Dist<Value> got = exec_n(SchedulerPolicy::round_robin(), 0, start(fixture("twoAdd").source), 40);
  std::vector<std::pair<Value, Rational>> want;
  for (int total = 0; total <= 6; ++total) {
    int ways = 0;
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; b <= 3; ++b) ways += a + b == total;
    want.emplace_back(int_lit(total), ratio(ways, 16));
  }
  CHECK(got == Dist<Value>::from_entries(want));
}

TEST_CASE("scheduler policies") {
  Config two{{parse_core("1 + 1"), parse_core("2 + 2"), parse_core("3 + 3")}, {}};
  SchedView view = censor(two);

  auto rr = SchedulerPolicy::round_robin();
  auto c = rr.choose(4, view);
  REQUIRE(c.size() == 1);
  CHECK(c[0].thread == 1);
  CHECK(c[0].next == 2);

  auto sc = SchedulerPolicy::scripted({2, 5});
  CHECK(sc.choose(0, view)[0].thread == 2);
  CHECK(sc.choose(1, view)[0].thread == 2);  // 5 mod 3
  CHECK(sc.choose(1, view)[0].next == 2);
  CHECK(sc.choose(2, view)[0].thread == 0);  // then round robin from thread 0
  CHECK(sc.choose(3, view)[0].thread == 1);

  auto ur = SchedulerPolicy::uniform_random();
  auto u = ur.choose(0, view);
  CHECK(u.size() == 3);
  for (const auto& ch : u) {
    CHECK(ch.p == Rational(1, 3));
    CHECK(ch.next == 0);
  }

  CHECK(parse_policy("rr").kind() == SchedulerPolicy::Kind::RoundRobin);
  CHECK(parse_policy("uniform").kind() == SchedulerPolicy::Kind::UniformRandom);
  CHECK(parse_policy("scripted:1,0").script() == std::vector<std::size_t>{1, 0});
  CHECK_THROWS_AS(parse_policy("sometimes"), std::invalid_argument);
  CHECK_THROWS_AS(parse_policy("scripted:1,x"), std::invalid_argument);
}

TEST_CASE("external policies are validated") {
  Config c{{parse_core("1 + 1")}, {}};
  auto out_of_range = SchedulerPolicy::external([](SchedState, const SchedView&) {
    return std::vector<SchedChoice>{{0, 3, Rational(1)}};
  });
  CHECK_THROWS(out_of_range.choose(0, censor(c)));
  auto too_heavy = SchedulerPolicy::external([](SchedState, const SchedView&) {
    return std::vector<SchedChoice>{{0, 0, Rational(3, 4)}, {0, 0, Rational(1, 2)}};
  });
  CHECK_THROWS(too_heavy.choose(0, censor(c)));
}

TEST_CASE("the scheduler view hides tape contents") {
  State a;
  a.tapes.push_back(Tape{1, {}});
  State b = presample(a, 0, 1);
  Config ca{{parse_core("1")}, a}, cb{{parse_core("1")}, b};
  CHECK(censor(ca) == censor(cb));
  CHECK(censor(ca).tape_count() == 1);
  CHECK(censor(ca).tape_bound(0) == 1);
  CHECK_FALSE(testing::unredacted_tapes(censor(ca)) == testing::unredacted_tapes(censor(cb)));
}

TEST_CASE("exec_n mass and outcome weights grow with n") {
  for (const char* name : {"twoAdd", "conTwoAdd", "conTwoAdd-I1", "twoincr-I3", "lazyrace"}) {
    INFO(name);
    Config c = start(fixture(name).source);
    for (const auto& pi : {SchedulerPolicy::round_robin(), SchedulerPolicy::uniform_random()}) {
      Dist<Value> prev;
      for (std::size_t n = 0; n <= 48; n += 4) {
        Dist<Value> cur = exec_n(pi, 0, c, n);
        for (const auto& [v, p] : prev) CHECK(cur(v) >= p);
        CHECK(cur.mass() >= prev.mass());
        prev = cur;
      }
    }
  }
}

TEST_CASE("memoization does not change exec_n or pexec_n") {
  Config c = start(fixture("conTwoAdd").source);
  for (std::size_t n : {5u, 12u, 20u}) {
    auto pi = SchedulerPolicy::uniform_random();
    CHECK(exec_n(pi, 0, c, n, true) == exec_n(pi, 0, c, n, false));
    CHECK(pexec_n(pi, 0, c, n, true) == pexec_n(pi, 0, c, n, false));
  }
}

TEST_CASE("pexec_n keeps total mass one on stuck-free programs") {
  Config c = start(fixture("conTwoAdd-I2").source);
  for (std::size_t n : {0u, 7u, 30u}) CHECK(pexec_n(SchedulerPolicy::uniform_random(), 0, c, n).mass() == 1);
}

TEST_CASE("erasability: legal schedulers pass, a tape-peeking one fails") {
  State s;
  s.tapes.push_back(Tape{1, {}});
  Config c{{rand_l(label_lit(0), int_lit(1)), parse_core("1 + 1")}, s};

  for (const auto& pi : {SchedulerPolicy::round_robin(), SchedulerPolicy::scripted({1, 0, 1}),
                         SchedulerPolicy::uniform_random()}) {
    for (std::size_t n = 0; n <= 4; ++n) CHECK(erasability_check(pi, 0, c, 0, n).pass);
  }

  auto peek = SchedulerPolicy::external(
      [](SchedState z, const SchedView& v) {
        bool loaded = !testing::unredacted_tapes(v)[0].queue.empty();
        return std::vector<SchedChoice>{{z, loaded ? std::size_t{1} : std::size_t{0}, Rational(1)}};
      },
      "tape-peeking");
  ErasabilityVerdict bad = erasability_check(peek, 0, c, 0, 1);
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.counterexample.has_value());
  CHECK(bad.with_presample != bad.without_presample);
}
