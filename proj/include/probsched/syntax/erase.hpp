#pragma once

#include "probsched/syntax/expr.hpp"

namespace probsched {

// Removes tapes: `alloctape b` becomes `let _ = b in ()` and `rand l b`
// becomes `let n = b in let _ = l in rand n`, keeping right-to-left order.
Expr erase(const Expr& e);

// True when no AllocTape or RandL node occurs in `e`.
bool tape_free(const Expr& e);

}  // namespace probsched
