#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "probsched/semantics/step.hpp"

namespace probsched {

// Thrown when exploration would exceed the configured node budget.
class ResourceExhausted : public std::runtime_error {
 public:
  ResourceExhausted(std::size_t nodes, std::size_t depth, std::size_t limit);
  std::size_t nodes() const { return nodes_; }
  std::size_t depth() const { return depth_; }
  std::size_t limit() const { return limit_; }

 private:
  std::size_t nodes_, depth_, limit_;
};

// Node budget: PROBSCHED_MEMO_LIMIT if set, else 10^7.
std::size_t default_node_limit();

using NodeId = std::uint32_t;

// Weight num/den of reaching `to`; den is shared by a move's edges.
struct Edge {
  NodeId to;
  std::uint32_t num;
};

struct Move {
  ThreadMove kind = ThreadMove::Stuck;
  std::uint32_t den = 1;
  std::uint32_t first = 0;  // into edges()
  std::uint32_t count = 0;
};

// Reachable configurations, interned, explored breadth first. Nodes are
// numbered in BFS order, so the nodes within depth d form a prefix.
class ConfigGraph {
 public:
  explicit ConfigGraph(Config root, std::size_t node_limit = default_node_limit(), bool parallel = true);

  NodeId root() const { return 0; }
  std::size_t size() const { return nodes_.size(); }
  const Config& config(NodeId id) const { return nodes_[id].config; }
  bool final(NodeId id) const { return nodes_[id].config.final(); }
  std::uint32_t depth(NodeId id) const { return nodes_[id].depth; }
  std::size_t thread_count(NodeId id) const { return nodes_[id].config.threads.size(); }

  // Explores every node at depth < d, so all nodes within depth d exist.
  void expand_to(std::size_t d);
  std::size_t explored_depth() const { return explored_; }
  // Number of nodes with depth <= d (d <= explored depth).
  std::size_t prefix(std::size_t d) const;

  // Moves of an expanded, non-final node, one per thread.
  std::span<const Move> moves(NodeId id) const {
    const auto& n = nodes_[id];
    return {moves_.data() + n.first_move, n.move_count};
  }
  std::span<const Edge> edges(const Move& m) const { return {edges_.data() + m.first, m.count}; }

  std::size_t edge_count() const { return edges_.size(); }

 private:
  struct NodeData {
    Config config;
    std::size_t hash = 0;
    std::uint32_t depth = 0;
    std::uint32_t first_move = 0;
    std::uint32_t move_count = 0;
  };

  NodeId intern(Config c, std::uint32_t depth);

  std::vector<NodeData> nodes_;
  std::vector<Move> moves_;
  std::vector<Edge> edges_;
  std::unordered_multimap<std::size_t, NodeId> index_;
  std::vector<std::size_t> level_end_;  // level_end_[d] = nodes with depth <= d
  std::size_t explored_ = 0;
  std::size_t limit_;
  bool parallel_;
};

}  // namespace probsched
