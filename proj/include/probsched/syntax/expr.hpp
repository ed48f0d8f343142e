#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "probsched/dist.hpp"

namespace probsched {

// Interned identifier. Symbol 0 is the anonymous binder `_`, which never
// binds anything.
using Sym = std::uint32_t;
inline constexpr Sym kAnonymous = 0;

Sym intern(std::string_view name);
const std::string& symbol_name(Sym s);

enum class Kind : std::uint8_t {
  // literals
  Int,
  Bool,
  Unit,
  Loc,
  Label,
  // binding and control
  Var,
  Rec,
  App,
  UnOp,
  BinOp,
  If,
  // products and sums
  Pair,
  Fst,
  Snd,
  InjL,
  InjR,
  Match,
  // heap
  Alloc,
  Load,
  Store,
  AllocN,
  ArrLoad,
  ArrStore,
  // randomness and tapes
  Rand,
  RandL,
  AllocTape,
  // concurrency
  Fork,
  Faa,
  Cas,
};

enum class UnOp : std::uint8_t { Neg, Not };
enum class BinOp : std::uint8_t { Add, Sub, Mul, Quot, Rem, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

std::string_view binop_token(BinOp op);

class Node;
// Immutable, shared expression tree. Values are the subset of expressions for
// which Node::is_value() holds: literals, closed `rec` closures, and pairs and
// injections of values.
using Expr = std::shared_ptr<const Node>;
using Value = Expr;

class Node {
 public:
  Kind kind() const { return kind_; }
  // Int/Bool payload, Loc/Label index, or the UnOp/BinOp code.
  std::int64_t num() const { return num_; }
  // Var: name. Rec: function name / parameter. Match: inl binder / inr binder.
  Sym sym0() const { return sym0_; }
  Sym sym1() const { return sym1_; }
  std::size_t arity() const { return arity_; }
  const Expr& child(std::size_t i) const { return kids_[i]; }

  std::size_t hash() const { return hash_; }
  bool is_value() const { return value_; }
  bool closed() const { return free_.empty(); }
  // Sorted, duplicate-free.
  std::span<const Sym> free_vars() const { return free_; }
  bool has_free(Sym s) const;

  bool as_bool() const { return num_ != 0; }
  UnOp unop() const { return static_cast<UnOp>(num_); }
  BinOp binop() const { return static_cast<BinOp>(num_); }

  // Internal factory; use the named constructors below.
  static Expr make(Kind kind, std::int64_t num, Sym s0, Sym s1, std::initializer_list<Expr> kids);

 private:
  Kind kind_ = Kind::Unit;
  std::uint8_t arity_ = 0;
  bool value_ = false;
  std::int64_t num_ = 0;
  Sym sym0_ = kAnonymous;
  Sym sym1_ = kAnonymous;
  std::size_t hash_ = 0;
  std::array<Expr, 3> kids_{};
  std::vector<Sym> free_;
};

// Constructors.
Expr int_lit(std::int64_t n);
Expr bool_lit(bool b);
Expr unit_lit();
Expr loc_lit(std::int64_t index);
Expr label_lit(std::int64_t index);
Expr var(Sym name);
Expr var(std::string_view name);
Expr rec(Sym f, Sym x, Expr body);
Expr lam(Sym x, Expr body);
// A closed `rec`; throws std::invalid_argument if the body has free variables.
Value closure(Sym f, Sym x, Expr body);
Expr app(Expr f, Expr a);
Expr unop(UnOp op, Expr e);
Expr binop(BinOp op, Expr l, Expr r);
Expr if_(Expr c, Expr t, Expr e);
Expr pair(Expr a, Expr b);
Expr fst(Expr e);
Expr snd(Expr e);
Expr inl(Expr e);
Expr inr(Expr e);
Expr match(Expr scrutinee, Sym left_binder, Expr left, Sym right_binder, Expr right);
Expr alloc(Expr init);
Expr load(Expr l);
Expr store(Expr l, Expr v);
Expr alloc_n(Expr size, Expr init);
Expr arr_load(Expr a, Expr i);
Expr arr_store(Expr a, Expr i, Expr v);
Expr rand(Expr bound);
Expr rand_l(Expr label, Expr bound);
Expr alloc_tape(Expr bound);
Expr fork(Expr e);
Expr faa(Expr l, Expr delta);
Expr cas(Expr l, Expr expected, Expr desired);
// `let x = e1 in e2`, i.e. (fun x -> e2) e1.
Expr let_(Sym x, Expr e1, Expr e2);

// Rebuilds `e` with new children (same kind, payload and binders).
Expr with_children(const Expr& e, std::span<const Expr> kids);

bool equal(const Expr& a, const Expr& b);
// Total structural order: negative, zero or positive.
int compare(const Expr& a, const Expr& b);

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e->hash(); }
};
struct ExprEq {
  bool operator()(const Expr& a, const Expr& b) const { return equal(a, b); }
};

template <>
struct Order<Expr> {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// Capture-free substitution of the closed value `v` for free occurrences of `x`.
Expr subst(const Expr& e, Sym x, const Value& v);

// Number of nodes.
std::size_t tree_size(const Expr& e);

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 12) + (seed >> 4));
}

}  // namespace probsched
