#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "probsched/dist.hpp"
#include "probsched/semantics/scheduler.hpp"

namespace probsched {

// Straightforward recursive definitions, kept as the reference the graph
// engine is tested against. `memo` caches on (ζ, configuration, n).

// Value of thread 0 once final, within n scheduler steps.
Dist<Value> exec_n(const SchedulerPolicy& pi, SchedState z, const Config& c, std::size_t n, bool memo = true);

// Partial execution: mass stays on the configuration reached after n steps
// (or earlier, when final).
Dist<std::pair<SchedState, Config>> pexec_n(const SchedulerPolicy& pi, SchedState z, const Config& c, std::size_t n,
                                            bool memo = true);

// Thread-pool projection of a pexec distribution.
Dist<std::vector<Expr>> thread_pools(const Dist<std::pair<SchedState, Config>>& d);

struct ErasabilityVerdict {
  bool pass = true;
  // First pool (in canonical order) whose probability differs.
  std::optional<std::vector<Expr>> counterexample;
  // Probability of the counterexample pool on each side; total masses when
  // the check passes.
  Rational with_presample;
  Rational without_presample;
};

// Checks that presampling a uniform value onto `label` before running leaves
// the thread-pool distribution of pexec_n unchanged.
ErasabilityVerdict erasability_check(const SchedulerPolicy& pi, SchedState z, const Config& c, std::int64_t label,
                                     std::size_t n);

}  // namespace probsched
