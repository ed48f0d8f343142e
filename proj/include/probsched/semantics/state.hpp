#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "probsched/dist.hpp"
#include "probsched/syntax/expr.hpp"

namespace probsched {

// One heap cell. Cells allocated together by `array n v` share a block; a
// `ref` is a block of length one.
struct Cell {
  Value value;
  std::int64_t block = 0;   // index of the block's first cell
  std::int64_t length = 1;  // cells in the block
};

struct Tape {
  std::int64_t bound = 0;
  std::vector<std::int64_t> queue;  // head first
  bool operator==(const Tape&) const = default;
};

// Heap and tape store. Locations and labels are dense indices, so fresh
// allocation is deterministic (the next index).
struct State {
  std::vector<Cell> heap;
  std::vector<Tape> tapes;

  std::size_t hash() const;
};

bool operator==(const State& a, const State& b);
int compare(const State& a, const State& b);

struct Config {
  std::vector<Expr> threads;
  State state;

  bool final() const { return threads.front()->is_value(); }
  const Value& result() const { return threads.front(); }
  std::size_t hash() const;
};

bool operator==(const Config& a, const Config& b);
int compare(const Config& a, const Config& b);

// Initial configuration of a closed program: one thread, empty state.
Config initial_config(Expr program);

struct ConfigHash {
  std::size_t operator()(const Config& c) const { return c.hash(); }
};

template <>
struct Order<State> {
  bool operator()(const State& a, const State& b) const { return compare(a, b) < 0; }
};

template <>
struct Order<Config> {
  bool operator()(const Config& a, const Config& b) const { return compare(a, b) < 0; }
};

template <>
struct Order<std::vector<Expr>> {
  bool operator()(const std::vector<Expr>& a, const std::vector<Expr>& b) const;
};

// Adds `v` at the tail of tape `label`. Throws std::invalid_argument for an
// unallocated label or v outside 0..bound.
State presample(const State& s, std::int64_t label, std::int64_t v);

// Text dump (docs/state-dump.md).
std::string dump(const State& s);
std::string dump(const Config& c);

}  // namespace probsched
