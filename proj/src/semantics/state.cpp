#include "probsched/semantics/state.hpp"

#include <stdexcept>

#include "probsched/syntax/pretty.hpp"

namespace probsched {

std::size_t State::hash() const {
  std::size_t h = 0x5eed;
  for (const auto& c : heap) {
    h = hash_combine(h, c.value->hash());
    h = hash_combine(h, static_cast<std::size_t>(c.block) * 31 + static_cast<std::size_t>(c.length));
  }
  h = hash_combine(h, tapes.size());
  for (const auto& t : tapes) {
    h = hash_combine(h, static_cast<std::size_t>(t.bound));
    for (auto q : t.queue) h = hash_combine(h, static_cast<std::size_t>(q));
    h = hash_combine(h, t.queue.size());
  }
  return h;
}

bool operator==(const State& a, const State& b) {
  if (a.heap.size() != b.heap.size() || a.tapes.size() != b.tapes.size()) return false;
  for (std::size_t i = 0; i < a.heap.size(); ++i) {
    if (a.heap[i].block != b.heap[i].block || a.heap[i].length != b.heap[i].length) return false;
    if (!equal(a.heap[i].value, b.heap[i].value)) return false;
  }
  for (std::size_t i = 0; i < a.tapes.size(); ++i) {
    if (a.tapes[i].bound != b.tapes[i].bound || a.tapes[i].queue != b.tapes[i].queue) return false;
  }
  return true;
}

namespace {

template <typename T>
int three_way(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

}  // namespace

int compare(const State& a, const State& b) {
  if (int c = three_way(a.heap.size(), b.heap.size())) return c;
  for (std::size_t i = 0; i < a.heap.size(); ++i) {
    if (int c = three_way(a.heap[i].block, b.heap[i].block)) return c;
    if (int c = three_way(a.heap[i].length, b.heap[i].length)) return c;
    if (int c = compare(a.heap[i].value, b.heap[i].value)) return c;
  }
  if (int c = three_way(a.tapes.size(), b.tapes.size())) return c;
  for (std::size_t i = 0; i < a.tapes.size(); ++i) {
    if (int c = three_way(a.tapes[i].bound, b.tapes[i].bound)) return c;
    if (int c = three_way(a.tapes[i].queue, b.tapes[i].queue)) return c;
  }
  return 0;
}

std::size_t Config::hash() const {
  std::size_t h = state.hash();
  for (const auto& t : threads) h = hash_combine(h, t->hash());
  return hash_combine(h, threads.size());
}

bool operator==(const Config& a, const Config& b) {
  if (a.threads.size() != b.threads.size()) return false;
  for (std::size_t i = 0; i < a.threads.size(); ++i) {
    if (!equal(a.threads[i], b.threads[i])) return false;
  }
  return a.state == b.state;
}

int compare(const Config& a, const Config& b) {
  if (int c = three_way(a.threads.size(), b.threads.size())) return c;
  for (std::size_t i = 0; i < a.threads.size(); ++i) {
    if (int c = compare(a.threads[i], b.threads[i])) return c;
  }
  return compare(a.state, b.state);
}

bool Order<std::vector<Expr>>::operator()(const std::vector<Expr>& a, const std::vector<Expr>& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (int c = compare(a[i], b[i])) return c < 0;
  }
  return false;
}

Config initial_config(Expr program) {
  Config c;
  c.threads.push_back(std::move(program));
  return c;
}

State presample(const State& s, std::int64_t label, std::int64_t v) {
  if (label < 0 || label >= static_cast<std::int64_t>(s.tapes.size())) {
    throw std::invalid_argument("presample: label #t" + std::to_string(label) + " is not allocated");
  }
  const Tape& t = s.tapes[static_cast<std::size_t>(label)];
  if (v < 0 || v > t.bound) {
    throw std::invalid_argument("presample: " + std::to_string(v) + " outside 0.." + std::to_string(t.bound));
  }
  State out = s;
  out.tapes[static_cast<std::size_t>(label)].queue.push_back(v);
  return out;
}

std::string dump(const State& s) {
  std::string out = "heap:\n";
  for (std::size_t i = 0; i < s.heap.size(); ++i) {
    const Cell& c = s.heap[i];
    out += "  #l" + std::to_string(i) + " = " + pretty(c.value);
    if (c.length > 1) {
      out += "    [block #l" + std::to_string(c.block) + " +" + std::to_string(static_cast<std::int64_t>(i) - c.block) +
             "/" + std::to_string(c.length) + "]";
    }
    out += '\n';
  }
  out += "tapes:\n";
  for (std::size_t i = 0; i < s.tapes.size(); ++i) {
    out += "  #t" + std::to_string(i) + " : " + std::to_string(s.tapes[i].bound) + " [";
    for (std::size_t k = 0; k < s.tapes[i].queue.size(); ++k) {
      if (k) out += "; ";
      out += std::to_string(s.tapes[i].queue[k]);
    }
    out += "]\n";
  }
  return out;
}

std::string dump(const Config& c) {
  std::string out = "threads:\n";
  for (std::size_t i = 0; i < c.threads.size(); ++i) {
    out += "  [" + std::to_string(i) + "] " + pretty(c.threads[i]) + '\n';
  }
  return out + dump(c.state);
}

}  // namespace probsched
