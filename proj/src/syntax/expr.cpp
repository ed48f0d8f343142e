#include "probsched/syntax/expr.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace probsched {

namespace {

struct SymbolTable {
  std::mutex mu;
  std::deque<std::string> names{"_"};
  std::unordered_map<std::string, Sym> ids{{"_", kAnonymous}};
};

SymbolTable& symbols() {
  static SymbolTable table;
  return table;
}

void merge_free(std::vector<Sym>& out, std::span<const Sym> add, Sym drop0 = kAnonymous, Sym drop1 = kAnonymous) {
  if (add.empty()) return;
  auto keep = [&](Sym s) { return s != drop0 && s != drop1; };
  if (out.empty()) {
    for (Sym s : add) {
      if (keep(s)) out.push_back(s);
    }
    return;
  }
  std::vector<Sym> merged;
  merged.reserve(out.size() + add.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < out.size() || j < add.size()) {
    Sym next;
    if (j >= add.size() || (i < out.size() && out[i] < add[j])) {
      next = out[i++];
    } else if (i >= out.size() || add[j] < out[i]) {
      next = add[j++];
      if (!keep(next)) continue;
    } else {
      next = out[i++];
      ++j;
    }
    merged.push_back(next);
  }
  out.swap(merged);
}

const Expr& cached_unit() {
  static const Expr e = Node::make(Kind::Unit, 0, kAnonymous, kAnonymous, {});
  return e;
}

const Expr& cached_bool(bool b) {
  static const Expr t = Node::make(Kind::Bool, 1, kAnonymous, kAnonymous, {});
  static const Expr f = Node::make(Kind::Bool, 0, kAnonymous, kAnonymous, {});
  return b ? t : f;
}

}  // namespace

Sym intern(std::string_view name) {
  auto& t = symbols();
  std::lock_guard lock(t.mu);
  auto it = t.ids.find(std::string(name));
  if (it != t.ids.end()) return it->second;
  Sym id = static_cast<Sym>(t.names.size());
  t.names.emplace_back(name);
  t.ids.emplace(std::string(name), id);
  return id;
}

const std::string& symbol_name(Sym s) {
  auto& t = symbols();
  std::lock_guard lock(t.mu);
  return t.names.at(s);
}

std::string_view binop_token(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Quot: return "/";
    case BinOp::Rem: return "%";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

bool Node::has_free(Sym s) const { return std::binary_search(free_.begin(), free_.end(), s); }

Expr Node::make(Kind kind, std::int64_t num, Sym s0, Sym s1, std::initializer_list<Expr> kids) {
  auto n = std::make_shared<Node>();
  n->kind_ = kind;
  n->num_ = num;
  n->sym0_ = s0;
  n->sym1_ = s1;
  n->arity_ = static_cast<std::uint8_t>(kids.size());
  std::size_t i = 0;
  for (const auto& k : kids) {
    if (!k) throw std::invalid_argument("null child expression");
    n->kids_[i++] = k;
  }

  std::size_t h = hash_combine(static_cast<std::size_t>(kind) * 0x100000001b3ULL, static_cast<std::size_t>(num));
  h = hash_combine(h, (static_cast<std::size_t>(s0) << 32) | s1);
  for (std::size_t c = 0; c < n->arity_; ++c) h = hash_combine(h, n->kids_[c]->hash());
  n->hash_ = h;

  switch (kind) {
    case Kind::Var:
      if (s0 != kAnonymous) n->free_.push_back(s0);
      break;
    case Kind::Rec:
      merge_free(n->free_, n->kids_[0]->free_, s0, s1);
      break;
    case Kind::Match:
      merge_free(n->free_, n->kids_[0]->free_);
      merge_free(n->free_, n->kids_[1]->free_, s0);
      merge_free(n->free_, n->kids_[2]->free_, s1);
      break;
    default:
      for (std::size_t c = 0; c < n->arity_; ++c) merge_free(n->free_, n->kids_[c]->free_);
      break;
  }

  switch (kind) {
    case Kind::Int:
    case Kind::Bool:
    case Kind::Unit:
    case Kind::Loc:
    case Kind::Label:
      n->value_ = true;
      break;
    case Kind::Rec:
      n->value_ = n->free_.empty();
      break;
    case Kind::Pair:
      n->value_ = n->kids_[0]->value_ && n->kids_[1]->value_;
      break;
    case Kind::InjL:
    case Kind::InjR:
      n->value_ = n->kids_[0]->value_;
      break;
    default:
      n->value_ = false;
      break;
  }
  return n;
}

Expr int_lit(std::int64_t n) { return Node::make(Kind::Int, n, kAnonymous, kAnonymous, {}); }
Expr bool_lit(bool b) { return cached_bool(b); }
Expr unit_lit() { return cached_unit(); }
Expr loc_lit(std::int64_t index) { return Node::make(Kind::Loc, index, kAnonymous, kAnonymous, {}); }
Expr label_lit(std::int64_t index) { return Node::make(Kind::Label, index, kAnonymous, kAnonymous, {}); }
Expr var(Sym name) { return Node::make(Kind::Var, 0, name, kAnonymous, {}); }
Expr var(std::string_view name) { return var(intern(name)); }
Expr rec(Sym f, Sym x, Expr body) { return Node::make(Kind::Rec, 0, f, x, {std::move(body)}); }
Expr lam(Sym x, Expr body) { return rec(kAnonymous, x, std::move(body)); }

Value closure(Sym f, Sym x, Expr body) {
  Expr e = rec(f, x, std::move(body));
  if (!e->closed()) throw std::invalid_argument("closure has free variable " + symbol_name(e->free_vars().front()));
  return e;
}

Expr app(Expr f, Expr a) { return Node::make(Kind::App, 0, kAnonymous, kAnonymous, {std::move(f), std::move(a)}); }
Expr unop(UnOp op, Expr e) {
  return Node::make(Kind::UnOp, static_cast<std::int64_t>(op), kAnonymous, kAnonymous, {std::move(e)});
}
Expr binop(BinOp op, Expr l, Expr r) {
  return Node::make(Kind::BinOp, static_cast<std::int64_t>(op), kAnonymous, kAnonymous, {std::move(l), std::move(r)});
}
Expr if_(Expr c, Expr t, Expr e) {
  return Node::make(Kind::If, 0, kAnonymous, kAnonymous, {std::move(c), std::move(t), std::move(e)});
}
Expr pair(Expr a, Expr b) { return Node::make(Kind::Pair, 0, kAnonymous, kAnonymous, {std::move(a), std::move(b)}); }
Expr fst(Expr e) { return Node::make(Kind::Fst, 0, kAnonymous, kAnonymous, {std::move(e)}); }
Expr snd(Expr e) { return Node::make(Kind::Snd, 0, kAnonymous, kAnonymous, {std::move(e)}); }
Expr inl(Expr e) { return Node::make(Kind::InjL, 0, kAnonymous, kAnonymous, {std::move(e)}); }
Expr inr(Expr e) { return Node::make(Kind::InjR, 0, kAnonymous, kAnonymous, {std::move(e)}); }
Expr match(Expr scrutinee, Sym left_binder, Expr left, Sym right_binder, Expr right) {
  return Node::make(Kind::Match, 0, left_binder, right_binder, {std::move(scrutinee), std::move(left), std::move(right)});
}
Expr alloc(Expr init) { return Node::make(Kind::Alloc, 0, kAnonymous, kAnonymous, {std::move(init)}); }
Expr load(Expr l) { return Node::make(Kind::Load, 0, kAnonymous, kAnonymous, {std::move(l)}); }
Expr store(Expr l, Expr v) { return Node::make(Kind::Store, 0, kAnonymous, kAnonymous, {std::move(l), std::move(v)}); }
Expr alloc_n(Expr size, Expr init) {
  return Node::make(Kind::AllocN, 0, kAnonymous, kAnonymous, {std::move(size), std::move(init)});
}
Expr arr_load(Expr a, Expr i) { return Node::make(Kind::ArrLoad, 0, kAnonymous, kAnonymous, {std::move(a), std::move(i)}); }
Expr arr_store(Expr a, Expr i, Expr v) {
  return Node::make(Kind::ArrStore, 0, kAnonymous, kAnonymous, {std::move(a), std::move(i), std::move(v)});
}
Expr rand(Expr bound) { return Node::make(Kind::Rand, 0, kAnonymous, kAnonymous, {std::move(bound)}); }
Expr rand_l(Expr label, Expr bound) {
  return Node::make(Kind::RandL, 0, kAnonymous, kAnonymous, {std::move(label), std::move(bound)});
}
Expr alloc_tape(Expr bound) { return Node::make(Kind::AllocTape, 0, kAnonymous, kAnonymous, {std::move(bound)}); }
Expr fork(Expr e) { return Node::make(Kind::Fork, 0, kAnonymous, kAnonymous, {std::move(e)}); }
Expr faa(Expr l, Expr delta) { return Node::make(Kind::Faa, 0, kAnonymous, kAnonymous, {std::move(l), std::move(delta)}); }
Expr cas(Expr l, Expr expected, Expr desired) {
  return Node::make(Kind::Cas, 0, kAnonymous, kAnonymous, {std::move(l), std::move(expected), std::move(desired)});
}
Expr let_(Sym x, Expr e1, Expr e2) { return app(lam(x, std::move(e2)), std::move(e1)); }

Expr with_children(const Expr& e, std::span<const Expr> kids) {
  if (kids.size() != e->arity()) throw std::invalid_argument("with_children: arity mismatch");
  switch (kids.size()) {
    case 0: return e;
    case 1: return Node::make(e->kind(), e->num(), e->sym0(), e->sym1(), {kids[0]});
    case 2: return Node::make(e->kind(), e->num(), e->sym0(), e->sym1(), {kids[0], kids[1]});
    default: return Node::make(e->kind(), e->num(), e->sym0(), e->sym1(), {kids[0], kids[1], kids[2]});
  }
}

bool equal(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return true;
  if (a->hash() != b->hash() || a->kind() != b->kind() || a->num() != b->num() || a->sym0() != b->sym0() ||
      a->sym1() != b->sym1() || a->arity() != b->arity()) {
    return false;
  }
  for (std::size_t i = 0; i < a->arity(); ++i) {
    if (!equal(a->child(i), b->child(i))) return false;
  }
  return true;
}

namespace {

int compare_sym(Sym a, Sym b) {
  if (a == b) return 0;
  return symbol_name(a).compare(symbol_name(b)) < 0 ? -1 : 1;
}

}  // namespace

int compare(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind() != b->kind()) return a->kind() < b->kind() ? -1 : 1;
  if (a->num() != b->num()) return a->num() < b->num() ? -1 : 1;
  if (int c = compare_sym(a->sym0(), b->sym0()); c != 0) return c;
  if (int c = compare_sym(a->sym1(), b->sym1()); c != 0) return c;
  for (std::size_t i = 0; i < a->arity(); ++i) {
    if (int c = compare(a->child(i), b->child(i)); c != 0) return c;
  }
  return 0;
}

Expr subst(const Expr& e, Sym x, const Value& v) {
  if (x == kAnonymous || !e->has_free(x)) return e;
  switch (e->kind()) {
    case Kind::Var:
      return v;
    case Kind::Rec:
      if (e->sym0() == x || e->sym1() == x) return e;
      return rec(e->sym0(), e->sym1(), subst(e->child(0), x, v));
    case Kind::Match: {
      Expr scrut = subst(e->child(0), x, v);
      Expr left = e->sym0() == x ? e->child(1) : subst(e->child(1), x, v);
      Expr right = e->sym1() == x ? e->child(2) : subst(e->child(2), x, v);
      return match(std::move(scrut), e->sym0(), std::move(left), e->sym1(), std::move(right));
    }
    default: {
      std::array<Expr, 3> kids;
      for (std::size_t i = 0; i < e->arity(); ++i) kids[i] = subst(e->child(i), x, v);
      return with_children(e, std::span<const Expr>(kids.data(), e->arity()));
    }
  }
}

std::size_t tree_size(const Expr& e) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < e->arity(); ++i) n += tree_size(e->child(i));
  return n;
}

}  // namespace probsched
