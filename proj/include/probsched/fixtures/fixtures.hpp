#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "probsched/rational.hpp"

namespace probsched {

struct Fixture {
  enum class Expect { Bound, Uniform, MinMass };

  std::string name;
  std::string source;
  std::string predicate = "true";
  Expect expect = Expect::Bound;
  // Bound: sup_violation <= value. MinMass: min_mass == value.
  Rational value;
  // Uniform: outcomes 0..uniform_top, each equally likely.
  std::int64_t uniform_top = 0;
  std::size_t horizon = 50;
  bool uses_tapes = false;
  // False when the configuration space is too large for the exact engine;
  // such fixtures are checked by Monte Carlo.
  bool exact = true;
  // Rejection probability per attempt; nonzero means exact runs leave a
  // geometric residual and horizons must be sized from it.
  Rational decay;
  std::string summary;
};

class UnknownFixture : public std::invalid_argument {
 public:
  explicit UnknownFixture(const std::string& name);
};

// Every named fixture, in catalogue order.
const std::vector<Fixture>& catalogue();

// Lookup ignoring case and treating '_' and '-' alike. Throws UnknownFixture
// listing the available names.
const Fixture& fixture(std::string_view name);

// Contents of fixtures/<name>.cpl: a comment header with the query, then
// the source.
std::string fixture_file_text(const Fixture& f);

std::string normalize_fixture_name(std::string_view name);

// Counter implementations 1..3 as let-bindings of createcounter, readcounter,
// createtape and incrcounter, ready to prefix a client.
std::string counter_module(int impl);

// Lock-protected hash over keys drawing values 0..values-1 on a miss. With
// `taped` the hash takes a tape label as a final argument.
std::string hash_module(std::int64_t values, bool taped);

// Hashes keys 0..keys-1 in order and returns the list of values.
Fixture hash_fixture(std::int64_t keys, std::int64_t values);

// Concurrent Bloom filter of `size` bits with `hashes` hash functions,
// inserting `xs` in parallel and then looking up `y`.
Fixture bloom_fixture(std::int64_t size, std::int64_t hashes, const std::vector<std::int64_t>& xs, std::int64_t y);

}  // namespace probsched
