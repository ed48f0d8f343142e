#pragma once

#include <cstdint>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "probsched/dist.hpp"
#include "probsched/semantics/state.hpp"

namespace probsched {

enum class StepKind : std::uint8_t {
  Value,    // nothing to do
  Stuck,    // the redex has no rule
  Det,      // one outcome with probability 1
  Uniform,  // `bound + 1` outcomes, each an integer in the hole, state unchanged
};

// The redex of an expression, decomposed once so callers can either
// enumerate the outcomes (exact engine) or sample one (Monte Carlo).
class Step {
 public:
  StepKind kind = StepKind::Stuck;

  // Det
  Expr expr;
  std::optional<State> state;  // nullopt: unchanged
  std::optional<Expr> forked;

  // Uniform
  std::int64_t bound = 0;

  // Uniform: the whole expression with integer k in place of the redex.
  Expr fill(std::int64_t k) const;

 private:
  friend Step analyze(const Expr& e, const State& s);
  Expr plug(Expr inner) const;
  std::vector<std::pair<Expr, std::uint8_t>> frames_;  // outermost first
};

// Finds the redex in right-to-left evaluation order and classifies it.
Step analyze(const Expr& e, const State& s);

// Largest rand bound the enumerating functions accept.
inline constexpr std::int64_t kMaxEnumeratedBound = 1 << 20;

using StepOutcome = std::tuple<Expr, State, std::vector<Expr>>;

// Distribution of (expression, state, forked threads). Empty for values and
// stuck terms.
Dist<StepOutcome> step(const Expr& e, const State& s);

// What scheduling thread i does to a configuration.
enum class ThreadMove : std::uint8_t { Final, Stutter, Stuck, Step };

struct Successor {
  Config config;
  Rational p;
};

// Appends the successors of scheduling thread i (for Step). Final and stuck
// moves append nothing; a stutter appends nothing and means "stays put".
ThreadMove successors(const Config& c, std::size_t i, std::vector<Successor>& out);

// Thread-pool step as a distribution (stutter: point mass on c).
Dist<Config> tpstep(const Config& c, std::size_t i);

}  // namespace probsched
