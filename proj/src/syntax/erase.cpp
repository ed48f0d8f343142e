#include "probsched/syntax/erase.hpp"

#include <array>

namespace probsched {

namespace {

Sym fresh_bound_name(const Expr& avoid) {
  for (int k = 0;; ++k) {
    Sym s = intern(k == 0 ? std::string("bound") : "bound" + std::to_string(k));
    if (!avoid->has_free(s)) return s;
  }
}

}  // namespace

Expr erase(const Expr& e) {
  if (tape_free(e)) return e;
  std::array<Expr, 3> kids;
  for (std::size_t i = 0; i < e->arity(); ++i) kids[i] = erase(e->child(i));
  switch (e->kind()) {
    case Kind::AllocTape:
      return let_(kAnonymous, kids[0], unit_lit());
    case Kind::RandL: {
      const Expr& label = kids[0];
      Sym n = fresh_bound_name(label);
      return let_(n, kids[1], let_(kAnonymous, label, rand(var(n))));
    }
    default:
      return with_children(e, std::span<const Expr>(kids.data(), e->arity()));
  }
}

bool tape_free(const Expr& e) {
  if (e->kind() == Kind::AllocTape || e->kind() == Kind::RandL) return false;
  for (std::size_t i = 0; i < e->arity(); ++i) {
    if (!tape_free(e->child(i))) return false;
  }
  return true;
}

}  // namespace probsched
