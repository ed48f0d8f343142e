#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "probsched/syntax/expr.hpp"

namespace probsched::stdlib {

// Closed values backing the derived forms.
//   par_wait c       spins until the cell c holds `inr v`, then returns v
//   acquire l        spin lock over cas
//   list_init n f    [f 0; ...; f (n-1)]
//   list_iter f l    applies f to each element, left to right
//   list_length l
//   array_init n v   array of n cells holding v
//   assoc_lookup l k first `Some v` with (k, v) in l, else None
const Value& par_wait();
const Value& acquire();

std::optional<Value> lookup(std::string_view name);
std::vector<std::string> names();

// Source text of the library, in the surface language.
std::string_view source();

}  // namespace probsched::stdlib
