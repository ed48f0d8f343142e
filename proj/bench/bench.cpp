// Times the recursive reference DP against the layered kernel, serial and
// OpenMP, and Monte Carlo serial against OpenMP. Usage: bench [reps]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "probsched/engine/analysis.hpp"
#include "probsched/fixtures/fixtures.hpp"
#include "probsched/mc/mc.hpp"
#include "probsched/syntax/parser.hpp"

using namespace probsched;

namespace {

// Best of `reps` wall-clock runs, in milliseconds.
double best_ms(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  std::printf("threads: %d, best of %d\n\n", omp_get_max_threads(), reps);
  std::printf("%-14s %5s %8s | %12s %12s %12s | %s\n", "fixture", "H", "nodes", "reference ms", "serial ms",
              "parallel ms", "agree");

  for (const char* name : {"twoAdd", "conTwoAdd-I1", "conTwoAdd-I2", "conTwoAdd-I3", "hashrace", "lazyrace", "hash-2-3",
                           "bloom-2-1"}) {
    const Fixture& f = fixture(name);
    Config c = initial_config(parse_core(f.source));
    const Predicate phi = Predicate::parse(f.predicate);
    Rational ref, ser, par;
    std::size_t nodes = 0;
    double t_ref = best_ms(reps, [&] { ref = sup_violation_reference(c, f.horizon, phi); });
    double t_ser = best_ms(reps, [&] {
      AdversaryResult r = sup_violation(c, f.horizon, phi, {.parallel = false});
      ser = r.value;
      nodes = r.nodes;
    });
    double t_par = best_ms(reps, [&] { par = sup_violation(c, f.horizon, phi, {.parallel = true}).value; });
    std::printf("%-14s %5zu %8zu | %12.1f %12.1f %12.1f | %s\n", name, f.horizon, nodes, t_ref, t_ser, t_par,
                ref == ser && ser == par ? "yes" : "NO");
  }

  std::printf("\n%-14s %8s | %12s %12s | %s\n", "mc fixture", "trials", "serial ms", "parallel ms", "agree");
  for (const char* name : {"conTwoAdd-I2", "bloom-8-2"}) {
    const Fixture& f = fixture(name);
    Config c = initial_config(parse_core(f.source));
    const Predicate phi = Predicate::parse(f.predicate);
    McOptions opt;
    opt.trials = 5000;
    Estimate a, b;
    opt.parallel = false;
    double t_ser = best_ms(reps, [&] { a = estimate(c, SchedulerPolicy::uniform_random(), phi, opt); });
    opt.parallel = true;
    double t_par = best_ms(reps, [&] { b = estimate(c, SchedulerPolicy::uniform_random(), phi, opt); });
    std::printf("%-14s %8zu | %12.1f %12.1f | %s\n", name, opt.trials, t_ser, t_par,
                a.violations == b.violations && a.total_steps == b.total_steps ? "yes" : "NO");
  }
  return 0;
}
