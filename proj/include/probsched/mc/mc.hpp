#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>

#include "probsched/engine/predicate.hpp"
#include "probsched/semantics/scheduler.hpp"

namespace probsched {

// Random stream of one trial: mt19937_64 seeded through std::seed_seq with
// the 32-bit halves of (base_seed, trial). Both are fully specified by the
// standard, so streams are reproducible across platforms (docs/rng.md).
class TrialRng {
 public:
  TrialRng(std::uint64_t base_seed, std::uint64_t trial);
  // Uniform on 0..bound inclusive.
  std::int64_t uniform(std::int64_t bound);
  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct TrialOutcome {
  enum class Kind { Value, Timeout, Stuck };
  Kind kind = Kind::Timeout;
  Value value;  // Kind::Value only
  std::size_t steps = 0;
};

TrialOutcome run_trial(const Config& c, const SchedulerPolicy& pi, TrialRng& rng, std::size_t max_steps);
TrialOutcome run_trial(const Config& c, const SchedulerPolicy& pi, std::uint64_t seed, std::size_t max_steps);

struct McOptions {
  std::size_t trials = 10'000;
  std::uint64_t seed = 1;
  std::size_t max_steps = 100'000;
  double confidence = 0.99;
  bool timeout_as_violation = false;
  bool parallel = true;
};

struct Estimate {
  std::size_t violations = 0;  // includes timeouts under timeout_as_violation
  std::size_t trials = 0;
  double point = 0;
  double ci_low = 0, ci_high = 1;
  double confidence = 0;
  std::size_t timeouts = 0;
  std::size_t stuck = 0;
  std::size_t total_steps = 0;
};

// Throws std::invalid_argument for trials == 0, a confidence outside (0,1),
// or an external policy.
Estimate estimate(const Config& c, const SchedulerPolicy& pi, const Predicate& phi, const McOptions& opt);

// Clopper-Pearson interval for `successes` out of `trials`.
std::pair<double, double> ci(std::size_t successes, std::size_t trials, double confidence);

}  // namespace probsched
