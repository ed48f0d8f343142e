#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "probsched/dist.hpp"
#include "probsched/semantics/state.hpp"

namespace probsched {

namespace testing {
struct Backdoor;
}

// What a scheduler may observe: every thread, the whole heap, and which tape
// labels exist with their bounds. Tape queues are not reachable from here.
class SchedView {
 public:
  const std::vector<Expr>& threads() const { return config_->threads; }
  std::size_t thread_count() const { return config_->threads.size(); }
  const std::vector<Cell>& heap() const { return config_->state.heap; }
  std::size_t tape_count() const { return config_->state.tapes.size(); }
  std::int64_t tape_bound(std::size_t label) const { return config_->state.tapes.at(label).bound; }

 private:
  explicit SchedView(const Config& c) : config_(&c) {}
  friend SchedView censor(const Config& c);
  friend struct testing::Backdoor;
  const Config* config_;
};

// Redacts tape queues. The view borrows `c`.
SchedView censor(const Config& c);

bool operator==(const SchedView& a, const SchedView& b);

using SchedState = std::int64_t;

struct SchedChoice {
  SchedState next;
  std::size_t thread;
  Rational p;
};

class SchedulerPolicy {
 public:
  enum class Kind { RoundRobin, Scripted, UniformRandom, External };
  using Callback = std::function<std::vector<SchedChoice>(SchedState, const SchedView&)>;

  // Thread ζ mod |threads|; the next state is that index plus one.
  static SchedulerPolicy round_robin();
  // script[ζ] mod |threads| while ζ < |script|, then round robin.
  static SchedulerPolicy scripted(std::vector<std::size_t> script);
  // Every thread with equal probability; stateless.
  static SchedulerPolicy uniform_random();
  static SchedulerPolicy external(Callback cb, std::string name = "external");

  Kind kind() const { return kind_; }
  const std::vector<std::size_t>& script() const { return script_; }
  std::string name() const;
  SchedState initial_state() const { return 0; }
  // True when every choice is a point mass.
  bool deterministic() const { return kind_ == Kind::RoundRobin || kind_ == Kind::Scripted; }

  std::vector<SchedChoice> choose(SchedState z, const SchedView& view) const;

 private:
  Kind kind_ = Kind::RoundRobin;
  std::vector<std::size_t> script_;
  Callback callback_;
  std::string name_;
};

// Parses "round_robin", "uniform_random" or "scripted:1,0,1".
SchedulerPolicy parse_policy(const std::string& text);

// One scheduler-driven step: choose a thread from the censored view, then
// step it.
Dist<std::pair<SchedState, Config>> sched_step(const SchedulerPolicy& pi, SchedState z, const Config& c);

}  // namespace probsched
