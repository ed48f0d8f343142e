#pragma once

#include <string>

#include "probsched/syntax/expr.hpp"

namespace probsched {

// Canonical single-line rendering of a core expression. The output parses
// back to a structurally equal tree.
std::string pretty(const Expr& e);

}  // namespace probsched
