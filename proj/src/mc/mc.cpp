#include "probsched/mc/mc.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <numeric>
#include <stdexcept>

#include "probsched/semantics/step.hpp"

namespace probsched {

TrialRng::TrialRng(std::uint64_t base_seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(base_seed), static_cast<std::uint32_t>(base_seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  engine_.seed(seq);
}

std::int64_t TrialRng::uniform(std::int64_t bound) {
  boost::random::uniform_int_distribution<std::int64_t> d(0, bound);
  return d(engine_);
}

namespace {

// Exact sampling from rational weights: draw on the common denominator.
std::size_t pick_big(const std::vector<SchedChoice>& choices, TrialRng& rng) {
  mpz_class common = 1;
  for (const auto& ch : choices) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), ch.p.get_den_mpz_t());
  if (!common.fits_slong_p()) throw std::overflow_error("scheduler weights too fine to sample");
  std::int64_t draw = rng.uniform(common.get_si() - 1);
  mpz_class acc = 0;
  for (std::size_t k = 0; k < choices.size(); ++k) {
    acc += choices[k].p.get_num() * (common / choices[k].p.get_den());
    if (draw < acc) return k;
  }
  // mass below one: the remainder stops the run
  return choices.size();
}

std::size_t pick(const std::vector<SchedChoice>& choices, TrialRng& rng) {
  if (choices.size() == 1 && choices[0].p == 1) return 0;
  // same draw as pick_big while every weight fits in 32 bits
  std::uint64_t common = 1;
  for (const auto& ch : choices) {
    if (!ch.p.get_num().fits_uint_p() || !ch.p.get_den().fits_uint_p()) return pick_big(choices, rng);
    common = std::lcm(common, ch.p.get_den().get_ui());
    if (common > (std::uint64_t{1} << 32)) return pick_big(choices, rng);
  }
  const auto draw = static_cast<std::uint64_t>(rng.uniform(static_cast<std::int64_t>(common) - 1));
  std::uint64_t acc = 0;
  for (std::size_t k = 0; k < choices.size(); ++k) {
    acc += choices[k].p.get_num().get_ui() * (common / choices[k].p.get_den().get_ui());
    if (draw < acc) return k;
  }
  return choices.size();
}

}  // namespace

TrialOutcome run_trial(const Config& start, const SchedulerPolicy& pi, TrialRng& rng, std::size_t max_steps) {
  Config c = start;
  SchedState z = pi.initial_state();
  TrialOutcome out;
  while (!c.final()) {
    if (out.steps >= max_steps) {
      out.kind = TrialOutcome::Kind::Timeout;
      return out;
    }
    std::size_t thread;
    if (pi.kind() == SchedulerPolicy::Kind::UniformRandom) {
      // the draw pick() would make on denominator n, without the rationals
      const std::size_t n = c.threads.size();
      thread = n == 1 ? 0 : static_cast<std::size_t>(rng.uniform(static_cast<std::int64_t>(n) - 1));
    } else {
      auto choices = pi.choose(z, censor(c));
      std::size_t k = pick(choices, rng);
      if (k == choices.size()) {
        out.kind = TrialOutcome::Kind::Stuck;
        return out;
      }
      z = choices[k].next;
      thread = choices[k].thread;
    }
    Expr& t = c.threads[thread];
    ++out.steps;
    if (t->is_value()) continue;
    Step s = analyze(t, c.state);
    switch (s.kind) {
      case StepKind::Det:
        t = s.expr;
        if (s.state) c.state = std::move(*s.state);
        if (s.forked) c.threads.push_back(*s.forked);
        break;
      case StepKind::Uniform:
        t = s.fill(rng.uniform(s.bound));
        break;
      default:
        out.kind = TrialOutcome::Kind::Stuck;
        return out;
    }
  }
  out.kind = TrialOutcome::Kind::Value;
  out.value = c.result();
  return out;
}

TrialOutcome run_trial(const Config& c, const SchedulerPolicy& pi, std::uint64_t seed, std::size_t max_steps) {
  TrialRng rng(seed, 0);
  return run_trial(c, pi, rng, max_steps);
}

std::pair<double, double> ci(std::size_t successes, std::size_t trials, double confidence) {
  if (trials == 0 || successes > trials) throw std::invalid_argument("ci needs successes <= trials and trials >= 1");
  if (!(confidence > 0 && confidence < 1)) throw std::invalid_argument("confidence must lie in (0,1)");
  const double alpha = 1 - confidence;
  const auto k = static_cast<double>(successes), n = static_cast<double>(trials);
  double low = successes == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1, alpha / 2);
  double high = successes == trials ? 1.0 : boost::math::ibeta_inv(k + 1, n - k, 1 - alpha / 2);
  return {low, high};
}

Estimate estimate(const Config& c, const SchedulerPolicy& pi, const Predicate& phi, const McOptions& opt) {
  if (opt.trials == 0) throw std::invalid_argument("trials must be at least 1");
  if (!(opt.confidence > 0 && opt.confidence < 1)) throw std::invalid_argument("confidence must lie in (0,1)");
  if (pi.kind() == SchedulerPolicy::Kind::External) throw std::invalid_argument("external policies are not samplable");

  std::size_t violations = 0, timeouts = 0, stuck = 0, steps = 0;
  const auto n = static_cast<std::int64_t>(opt.trials);
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : violations, timeouts, stuck, steps) if (opt.parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    TrialRng rng(opt.seed, static_cast<std::uint64_t>(i));
    TrialOutcome o = run_trial(c, pi, rng, opt.max_steps);
    steps += o.steps;
    switch (o.kind) {
      case TrialOutcome::Kind::Value:
        if (!phi(o.value)) ++violations;
        break;
      case TrialOutcome::Kind::Timeout:
        ++timeouts;
        if (opt.timeout_as_violation) ++violations;
        break;
      case TrialOutcome::Kind::Stuck:
        ++stuck;
        break;
    }
  }

  Estimate e;
  e.violations = violations;
  e.trials = opt.trials;
  e.point = static_cast<double>(violations) / static_cast<double>(opt.trials);
  std::tie(e.ci_low, e.ci_high) = ci(violations, opt.trials, opt.confidence);
  e.confidence = opt.confidence;
  e.timeouts = timeouts;
  e.stuck = stuck;
  e.total_steps = steps;
  return e;
}

}  // namespace probsched
