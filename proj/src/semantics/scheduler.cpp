#include "probsched/semantics/scheduler.hpp"

#include <sstream>
#include <stdexcept>

#include "probsched/semantics/step.hpp"

namespace probsched {

SchedView censor(const Config& c) { return SchedView(c); }

bool operator==(const SchedView& a, const SchedView& b) {
  if (a.thread_count() != b.thread_count() || a.heap().size() != b.heap().size() ||
      a.tape_count() != b.tape_count()) {
    return false;
  }
  for (std::size_t i = 0; i < a.thread_count(); ++i) {
    if (!equal(a.threads()[i], b.threads()[i])) return false;
  }
  for (std::size_t i = 0; i < a.heap().size(); ++i) {
    const Cell& x = a.heap()[i];
    const Cell& y = b.heap()[i];
    if (x.block != y.block || x.length != y.length || !equal(x.value, y.value)) return false;
  }
  for (std::size_t i = 0; i < a.tape_count(); ++i) {
    if (a.tape_bound(i) != b.tape_bound(i)) return false;
  }
  return true;
}

SchedulerPolicy SchedulerPolicy::round_robin() { return SchedulerPolicy{}; }

SchedulerPolicy SchedulerPolicy::scripted(std::vector<std::size_t> script) {
  SchedulerPolicy p;
  p.kind_ = Kind::Scripted;
  p.script_ = std::move(script);
  return p;
}

SchedulerPolicy SchedulerPolicy::uniform_random() {
  SchedulerPolicy p;
  p.kind_ = Kind::UniformRandom;
  return p;
}

SchedulerPolicy SchedulerPolicy::external(Callback cb, std::string name) {
  SchedulerPolicy p;
  p.kind_ = Kind::External;
  p.callback_ = std::move(cb);
  p.name_ = std::move(name);
  return p;
}

std::string SchedulerPolicy::name() const {
  switch (kind_) {
    case Kind::RoundRobin: return "round_robin";
    case Kind::UniformRandom: return "uniform_random";
    case Kind::External: return name_;
    case Kind::Scripted: {
      std::string s = "scripted:";
      for (std::size_t i = 0; i < script_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(script_[i]);
      }
      return s;
    }
  }
  return "?";
}

std::vector<SchedChoice> SchedulerPolicy::choose(SchedState z, const SchedView& view) const {
  const std::size_t n = view.thread_count();
  switch (kind_) {
    case Kind::RoundRobin: {
      auto i = static_cast<std::size_t>(z) % n;
      return {SchedChoice{static_cast<SchedState>(i + 1), i, Rational(1)}};
    }
    case Kind::Scripted: {
      const auto len = static_cast<SchedState>(script_.size());
      if (z < len) return {SchedChoice{z + 1, script_[static_cast<std::size_t>(z)] % n, Rational(1)}};
      auto i = static_cast<std::size_t>(z - len) % n;
      return {SchedChoice{len + static_cast<SchedState>(i) + 1, i, Rational(1)}};
    }
    case Kind::UniformRandom: {
      std::vector<SchedChoice> out;
      Rational p = ratio(1, mpz_class(static_cast<unsigned long>(n)));
      out.reserve(n);
      for (std::size_t i = 0; i < n; ++i) out.push_back(SchedChoice{0, i, p});
      return out;
    }
    case Kind::External: {
      auto out = callback_(z, view);
      Rational total = 0;
      for (const auto& c : out) {
        if (c.thread >= n) throw std::out_of_range("scheduler chose thread " + std::to_string(c.thread));
        total += c.p;
      }
      if (total > 1) throw std::invalid_argument("scheduler choice has mass above 1");
      return out;
    }
  }
  return {};
}

SchedulerPolicy parse_policy(const std::string& text) {
  if (text == "round_robin" || text == "rr") return SchedulerPolicy::round_robin();
  if (text == "uniform_random" || text == "uniform") return SchedulerPolicy::uniform_random();
  const std::string prefix = "scripted:";
  if (text.rfind(prefix, 0) == 0) {
    std::vector<std::size_t> script;
    std::stringstream ss(text.substr(prefix.size()));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      std::size_t used = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != item.size()) throw std::invalid_argument("bad thread index in script: " + item);
      script.push_back(v);
    }
    return SchedulerPolicy::scripted(std::move(script));
  }
  throw std::invalid_argument("unknown scheduler '" + text + "' (round_robin, uniform_random, scripted:i,j,...)");
}

Dist<std::pair<SchedState, Config>> sched_step(const SchedulerPolicy& pi, SchedState z, const Config& c) {
  std::vector<std::pair<std::pair<SchedState, Config>, Rational>> entries;
  std::vector<Successor> succ;
  for (const auto& choice : pi.choose(z, censor(c))) {
    succ.clear();
    switch (successors(c, choice.thread, succ)) {
      case ThreadMove::Final:
      case ThreadMove::Stuck:
        break;
      case ThreadMove::Stutter:
        entries.emplace_back(std::pair{choice.next, c}, choice.p);
        break;
      case ThreadMove::Step:
        for (auto& s : succ) entries.emplace_back(std::pair{choice.next, std::move(s.config)}, choice.p * s.p);
        break;
    }
  }
  return Dist<std::pair<SchedState, Config>>::from_entries(std::move(entries));
}

}  // namespace probsched
