#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "probsched/syntax/expr.hpp"

namespace probsched {

class PredicateError : public std::runtime_error {
 public:
  PredicateError(std::size_t column, const std::string& what)
      : std::runtime_error("predicate, column " + std::to_string(column) + ": " + what), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

struct PredNode;

// Decidable property of a result value (docs/predicates.md). A comparison
// whose operands have the wrong shape is false.
class Predicate {
 public:
  static Predicate parse(std::string_view text);
  static Predicate always_true();

  bool operator()(const Value& ret) const;
  const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const PredNode> root_;
  std::string text_;
};

}  // namespace probsched
