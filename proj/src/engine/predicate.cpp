#include "probsched/engine/predicate.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <vector>

namespace probsched {

struct PredNode {
  enum class Op { Ret, Int, Bool, Unit, Var, Fst, Snd, Inl, Inr, Tuple, Eq, Ne, Lt, Le, Gt, Ge, And, Or, Not, Exists };
  Op op;
  std::int64_t num = 0;
  std::string name;
  std::vector<std::shared_ptr<const PredNode>> kids;
};

namespace {

using P = std::shared_ptr<const PredNode>;
using Op = PredNode::Op;

P node(Op op, std::vector<P> kids = {}, std::int64_t num = 0, std::string name = {}) {
  auto n = std::make_shared<PredNode>();
  n->op = op;
  n->kids = std::move(kids);
  n->num = num;
  n->name = std::move(name);
  return n;
}

class PredParser {
 public:
  explicit PredParser(std::string_view s) : s_(s) {}

  P parse() {
    P p = disjunction();
    skip();
    if (i_ < s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw PredicateError(i_ + 1, what); }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool accept(std::string_view tok) {
    skip();
    if (s_.substr(i_, tok.size()) != tok) return false;
    // keywords must not run into identifier characters
    if (std::isalpha(static_cast<unsigned char>(tok.back()))) {
      std::size_t j = i_ + tok.size();
      if (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) return false;
    }
    i_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  std::string ident() {
    skip();
    std::size_t start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    if (start == i_ || std::isdigit(static_cast<unsigned char>(s_[start]))) fail("expected identifier");
    return std::string(s_.substr(start, i_ - start));
  }

  P disjunction() {
    P l = conjunction();
    while (accept("||")) l = node(Op::Or, {l, conjunction()});
    return l;
  }

  P conjunction() {
    P l = unary();
    while (accept("&&")) l = node(Op::And, {l, unary()});
    return l;
  }

  P unary() {
    skip();
    if (s_.substr(i_, 2) != "!=" && accept("!")) return node(Op::Not, {unary()});
    if (accept("not")) return node(Op::Not, {unary()});
    if (accept("exists")) {
      std::string var = ident();
      expect("in");
      P lo = atom();
      expect("..");
      P hi = atom();
      expect(".");
      P body = disjunction();
      return node(Op::Exists, {lo, hi, body}, 0, var);
    }
    return comparison();
  }

  P comparison() {
    P l = atom();
    static const std::pair<std::string_view, Op> ops[] = {
        {"==", Op::Eq}, {"!=", Op::Ne}, {"<=", Op::Le}, {">=", Op::Ge}, {"<", Op::Lt}, {">", Op::Gt}, {"=", Op::Eq},
    };
    for (const auto& [tok, op] : ops) {
      if (accept(tok)) return node(op, {l, atom()});
    }
    return l;
  }

  P atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of predicate");
    char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '-' && i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1])))) {
      std::size_t start = i_;
      ++i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + i_, v);
      if (ec != std::errc{}) fail("integer out of range");
      return node(Op::Int, {}, v);
    }
    if (accept("(")) {
      if (accept(")")) return node(Op::Unit);
      std::vector<P> items{disjunction()};
      while (accept(",")) items.push_back(disjunction());
      expect(")");
      P acc = items.back();
      for (std::size_t k = items.size() - 1; k-- > 0;) acc = node(Op::Tuple, {items[k], acc});
      return acc;
    }
    if (accept("ret")) return node(Op::Ret);
    if (accept("true")) return node(Op::Bool, {}, 1);
    if (accept("false")) return node(Op::Bool, {}, 0);
    if (accept("fst")) return node(Op::Fst, {atom()});
    if (accept("snd")) return node(Op::Snd, {atom()});
    if (accept("inl")) return node(Op::Inl, {atom()});
    if (accept("inr")) return node(Op::Inr, {atom()});
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return node(Op::Var, {}, 0, ident());
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

struct Env {
  std::vector<std::pair<std::string, std::int64_t>> vars;

  std::optional<std::int64_t> lookup(const std::string& name) const {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    return std::nullopt;
  }
};

// nullopt: shape mismatch
std::optional<Value> eval(const PredNode& n, const Value& ret, Env& env);

bool truth(const PredNode& n, const Value& ret, Env& env) {
  auto v = eval(n, ret, env);
  return v && (*v)->kind() == Kind::Bool && (*v)->as_bool();
}

std::optional<Value> eval(const PredNode& n, const Value& ret, Env& env) {
  switch (n.op) {
    case Op::Ret: return ret;
    case Op::Int: return int_lit(n.num);
    case Op::Bool: return bool_lit(n.num != 0);
    case Op::Unit: return unit_lit();
    case Op::Var: {
      auto v = env.lookup(n.name);
      if (!v) throw PredicateError(0, "unbound name '" + n.name + "'");
      return int_lit(*v);
    }
    case Op::Fst:
    case Op::Snd: {
      auto v = eval(*n.kids[0], ret, env);
      if (!v || (*v)->kind() != Kind::Pair) return std::nullopt;
      return (*v)->child(n.op == Op::Fst ? 0 : 1);
    }
    case Op::Inl:
    case Op::Inr: {
      auto v = eval(*n.kids[0], ret, env);
      if (!v) return std::nullopt;
      return n.op == Op::Inl ? inl(*v) : inr(*v);
    }
    case Op::Tuple: {
      auto a = eval(*n.kids[0], ret, env);
      auto b = eval(*n.kids[1], ret, env);
      if (!a || !b) return std::nullopt;
      return pair(*a, *b);
    }
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: {
      auto a = eval(*n.kids[0], ret, env);
      auto b = eval(*n.kids[1], ret, env);
      if (!a || !b) return bool_lit(false);
      if (n.op == Op::Eq) return bool_lit(equal(*a, *b));
      if (n.op == Op::Ne) return bool_lit(!equal(*a, *b));
      if ((*a)->kind() != Kind::Int || (*b)->kind() != Kind::Int) return bool_lit(false);
      std::int64_t x = (*a)->num(), y = (*b)->num();
      bool r = n.op == Op::Lt ? x < y : n.op == Op::Le ? x <= y : n.op == Op::Gt ? x > y : x >= y;
      return bool_lit(r);
    }
    case Op::And: return bool_lit(truth(*n.kids[0], ret, env) && truth(*n.kids[1], ret, env));
    case Op::Or: return bool_lit(truth(*n.kids[0], ret, env) || truth(*n.kids[1], ret, env));
    case Op::Not: return bool_lit(!truth(*n.kids[0], ret, env));
    case Op::Exists: {
      auto lo = eval(*n.kids[0], ret, env);
      auto hi = eval(*n.kids[1], ret, env);
      if (!lo || !hi || (*lo)->kind() != Kind::Int || (*hi)->kind() != Kind::Int) return bool_lit(false);
      for (std::int64_t k = (*lo)->num(); k <= (*hi)->num(); ++k) {
        env.vars.emplace_back(n.name, k);
        bool hit = truth(*n.kids[2], ret, env);
        env.vars.pop_back();
        if (hit) return bool_lit(true);
      }
      return bool_lit(false);
    }
  }
  return std::nullopt;
}

// Names used but not bound by an enclosing exists.
void check_scope(const PredNode& n, std::vector<std::string>& bound) {
  if (n.op == Op::Var) {
    for (const auto& b : bound) {
      if (b == n.name) return;
    }
    throw PredicateError(0, "unbound name '" + n.name + "'");
  }
  if (n.op == Op::Exists) {
    check_scope(*n.kids[0], bound);
    check_scope(*n.kids[1], bound);
    bound.push_back(n.name);
    check_scope(*n.kids[2], bound);
    bound.pop_back();
    return;
  }
  for (const auto& k : n.kids) check_scope(*k, bound);
}

}  // namespace

Predicate Predicate::parse(std::string_view text) {
  Predicate p;
  p.root_ = PredParser(text).parse();
  std::vector<std::string> bound;
  check_scope(*p.root_, bound);
  p.text_ = std::string(text);
  return p;
}

Predicate Predicate::always_true() { return parse("true"); }

bool Predicate::operator()(const Value& ret) const {
  Env env;
  return truth(*root_, ret, env);
}

}  // namespace probsched
