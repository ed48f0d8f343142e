#include "probsched/engine/graph.hpp"

#include <cstdlib>

namespace probsched {

ResourceExhausted::ResourceExhausted(std::size_t nodes, std::size_t depth, std::size_t limit)
    : std::runtime_error("configuration budget of " + std::to_string(limit) + " exhausted (" + std::to_string(nodes) +
                         " nodes, depth " + std::to_string(depth) + ")"),
      nodes_(nodes),
      depth_(depth),
      limit_(limit) {}

std::size_t default_node_limit() {
  if (const char* env = std::getenv("PROBSCHED_MEMO_LIMIT")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 10'000'000;
}

ConfigGraph::ConfigGraph(Config root, std::size_t node_limit, bool parallel)
    : limit_(node_limit), parallel_(parallel) {
  intern(std::move(root), 0);
  level_end_.push_back(1);
}

NodeId ConfigGraph::intern(Config c, std::uint32_t depth) {
  std::size_t h = c.hash();
  auto [lo, hi] = index_.equal_range(h);
  for (auto it = lo; it != hi; ++it) {
    if (nodes_[it->second].config == c) return it->second;
  }
  if (nodes_.size() >= limit_) throw ResourceExhausted(nodes_.size(), depth, limit_);
  auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(NodeData{std::move(c), h, depth, 0, 0});
  index_.emplace(h, id);
  return id;
}

std::size_t ConfigGraph::prefix(std::size_t d) const {
  if (d >= level_end_.size()) return nodes_.size();
  return level_end_[d];
}

namespace {

struct LocalMove {
  ThreadMove kind;
  std::uint32_t den = 1;
  std::vector<std::pair<Config, std::uint32_t>> targets;
};

// Successors of one node, with duplicate targets merged.
std::vector<LocalMove> explore(const Config& c) {
  std::vector<LocalMove> out;
  if (c.final()) return out;
  std::vector<Successor> succ;
  for (std::size_t i = 0; i < c.threads.size(); ++i) {
    succ.clear();
    LocalMove m;
    m.kind = successors(c, i, succ);
    if (m.kind == ThreadMove::Step) {
      // every successor has probability 1/den
      m.den = static_cast<std::uint32_t>(succ.front().p.get_den().get_ui());
      std::vector<std::size_t> target_hash;
      for (auto& sc : succ) {
        std::size_t h = sc.config.hash();
        bool merged = false;
        for (std::size_t j = 0; j < m.targets.size() && !merged; ++j) {
          if (target_hash[j] == h && m.targets[j].first == sc.config) {
            ++m.targets[j].second;
            merged = true;
          }
        }
        if (!merged) {
          m.targets.emplace_back(std::move(sc.config), 1);
          target_hash.push_back(h);
        }
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

void ConfigGraph::expand_to(std::size_t d) {
  while (explored_ < d) {
    const std::size_t begin = explored_ == 0 ? 0 : level_end_[explored_ - 1];
    const std::size_t end = level_end_[explored_];
    const auto next_depth = static_cast<std::uint32_t>(explored_ + 1);
    std::vector<std::vector<LocalMove>> found(end - begin);

    const auto count = static_cast<std::int64_t>(end - begin);
#pragma omp parallel for schedule(dynamic, 16) if (parallel_ && count > 64)
    for (std::int64_t k = 0; k < count; ++k) {
      found[static_cast<std::size_t>(k)] = explore(nodes_[begin + static_cast<std::size_t>(k)].config);
    }

    for (std::size_t k = 0; k < found.size(); ++k) {
      const auto id = static_cast<NodeId>(begin + k);
      nodes_[id].first_move = static_cast<std::uint32_t>(moves_.size());
      nodes_[id].move_count = static_cast<std::uint32_t>(found[k].size());
      for (auto& lm : found[k]) {
        Move m;
        m.kind = lm.kind;
        m.den = lm.den;
        m.first = static_cast<std::uint32_t>(edges_.size());
        m.count = static_cast<std::uint32_t>(lm.targets.size());
        for (auto& [cfg, num] : lm.targets) edges_.push_back(Edge{intern(std::move(cfg), next_depth), num});
        moves_.push_back(m);
      }
      found[k].clear();
    }
    level_end_.push_back(nodes_.size());
    ++explored_;
  }
}

}  // namespace probsched
