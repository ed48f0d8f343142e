#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "probsched/dist.hpp"
#include "probsched/engine/graph.hpp"
#include "probsched/engine/predicate.hpp"
#include "probsched/semantics/scheduler.hpp"

namespace probsched {

struct EngineOptions {
  std::size_t node_limit = default_node_limit();
  bool parallel = true;  // OpenMP over configurations
  bool witness = false;  // keep optimal choices for a witness
};

// An optimal thread-choice strategy for the adversary. When every reachable
// configuration agrees on an optimal thread at each step the strategy is a
// plain script; otherwise `flat` is false and `script` holds the choices
// along the most likely prefix only.
struct Witness {
  bool flat = true;
  std::vector<std::size_t> script;
  std::size_t flat_prefix = 0;  // steps for which the script is exact
};

struct AdversaryResult {
  Rational value;
  std::vector<Rational> history;  // history[n] = value at horizon n
  std::size_t horizon = 0;
  std::size_t nodes = 0;
  std::optional<Witness> witness;
  // Violation probability of the stored strategy, recomputed forward.
  std::optional<Rational> replayed;
};

struct SafetyResult {
  Rational value;
  std::vector<Rational> history;
  std::size_t horizon = 0;
  std::size_t nodes = 0;
};

struct ValueDistResult {
  Dist<Value> dist;
  Rational residual;
  std::size_t horizon = 0;
  std::size_t nodes = 0;
  // Scheduler states times configurations touched.
  std::size_t product_states = 0;
};

// Maximum over thread-choice strategies of Pr[thread 0 returns v with !phi(v)]
// within n steps. The adversary sees the whole configuration.
AdversaryResult sup_violation(const Config& c, std::size_t n, const Predicate& phi, const EngineOptions& opt = {});

// Minimum over thread-choice strategies of the pexec mass; a stuck choice
// loses the branch.
SafetyResult min_mass(const Config& c, std::size_t n, const EngineOptions& opt = {});

// exec_n under a concrete policy, by forward propagation of mass.
ValueDistResult value_dist(const Config& c, const SchedulerPolicy& pi, std::size_t n, const EngineOptions& opt = {});
// Same, over an already built graph (expanded on demand), so many policies
// can share one exploration.
ValueDistResult value_dist(ConfigGraph& g, const SchedulerPolicy& pi, std::size_t n);

struct BoundVerdict {
  bool holds = true;
  Rational epsilon;
  AdversaryResult adversary;
};

BoundVerdict check_bound(const Config& c, std::size_t n, const Predicate& phi, const Rational& epsilon,
                         EngineOptions opt = {});

// Serial recursive versions of the two dynamic programs, for testing.
Rational sup_violation_reference(const Config& c, std::size_t n, const Predicate& phi, bool memo = true);
Rational min_mass_reference(const Config& c, std::size_t n, bool memo = true);

}  // namespace probsched
