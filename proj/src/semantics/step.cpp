#include "probsched/semantics/step.hpp"

#include <stdexcept>

namespace probsched {

namespace {

// Child indices in evaluation order; -1 terminates.
const std::int8_t* eval_order(Kind k) {
  static const std::int8_t none[] = {-1};
  static const std::int8_t one[] = {0, -1};
  static const std::int8_t two[] = {1, 0, -1};
  static const std::int8_t three[] = {2, 1, 0, -1};
  switch (k) {
    case Kind::App:
    case Kind::BinOp:
    case Kind::Pair:
    case Kind::Store:
    case Kind::AllocN:
    case Kind::ArrLoad:
    case Kind::RandL:
    case Kind::Faa:
      return two;
    case Kind::ArrStore:
    case Kind::Cas:
      return three;
    case Kind::UnOp:
    case Kind::If:
    case Kind::Fst:
    case Kind::Snd:
    case Kind::InjL:
    case Kind::InjR:
    case Kind::Match:
    case Kind::Alloc:
    case Kind::Load:
    case Kind::Rand:
    case Kind::AllocTape:
      return one;
    default:
      return none;
  }
}

struct Head {
  StepKind kind = StepKind::Stuck;
  Expr expr;
  std::optional<State> state;
  std::optional<Expr> forked;
  std::int64_t bound = 0;
};

Head stuck() { return {}; }

Head det(Expr e) {
  Head h;
  h.kind = StepKind::Det;
  h.expr = std::move(e);
  return h;
}

Head det(Expr e, State s) {
  Head h = det(std::move(e));
  h.state = std::move(s);
  return h;
}

bool is_int(const Expr& e) { return e->kind() == Kind::Int; }

bool valid_loc(const Expr& e, const State& s) {
  return e->kind() == Kind::Loc && e->num() >= 0 && e->num() < static_cast<std::int64_t>(s.heap.size());
}

std::optional<std::int64_t> arith(BinOp op, std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  switch (op) {
    case BinOp::Add:
      if (__builtin_add_overflow(a, b, &r)) return std::nullopt;
      return r;
    case BinOp::Sub:
      if (__builtin_sub_overflow(a, b, &r)) return std::nullopt;
      return r;
    case BinOp::Mul:
      if (__builtin_mul_overflow(a, b, &r)) return std::nullopt;
      return r;
    case BinOp::Quot:
      if (b == 0 || (a == INT64_MIN && b == -1)) return std::nullopt;
      return a / b;
    case BinOp::Rem:
      if (b == 0 || (a == INT64_MIN && b == -1)) return std::nullopt;
      return a % b;
    default:
      return std::nullopt;
  }
}

Head binop_head(BinOp op, const Expr& l, const Expr& r) {
  switch (op) {
    case BinOp::Add:
    case BinOp::Sub:
    case BinOp::Mul:
    case BinOp::Quot:
    case BinOp::Rem: {
      if (!is_int(l) || !is_int(r)) return stuck();
      auto v = arith(op, l->num(), r->num());
      return v ? det(int_lit(*v)) : stuck();
    }
    case BinOp::Eq: return det(bool_lit(equal(l, r)));
    case BinOp::Ne: return det(bool_lit(!equal(l, r)));
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: {
      if (!is_int(l) || !is_int(r)) return stuck();
      std::int64_t a = l->num(), b = r->num();
      bool out = op == BinOp::Lt ? a < b : op == BinOp::Le ? a <= b : op == BinOp::Gt ? a > b : a >= b;
      return det(bool_lit(out));
    }
    case BinOp::And:
    case BinOp::Or: {
      if (l->kind() != Kind::Bool || r->kind() != Kind::Bool) return stuck();
      bool out = op == BinOp::And ? (l->as_bool() && r->as_bool()) : (l->as_bool() || r->as_bool());
      return det(bool_lit(out));
    }
  }
  return stuck();
}

// Cell index addressed by loc + offset, if it stays within loc's block.
std::optional<std::size_t> array_cell(const Expr& loc, const Expr& offset, const State& s) {
  if (!valid_loc(loc, s) || !is_int(offset)) return std::nullopt;
  const Cell& c = s.heap[static_cast<std::size_t>(loc->num())];
  std::int64_t target = 0;
  if (__builtin_add_overflow(loc->num(), offset->num(), &target)) return std::nullopt;
  if (target < c.block || target >= c.block + c.length) return std::nullopt;
  return static_cast<std::size_t>(target);
}

Head head_step(const Expr& e, const State& s) {
  const auto& k = [&](std::size_t i) -> const Expr& { return e->child(i); };
  switch (e->kind()) {
    case Kind::App: {
      const Expr& f = k(0);
      if (f->kind() != Kind::Rec) return stuck();
      Expr body = f->child(0);
      // function name first, then the parameter
      body = subst(body, f->sym0(), f);
      body = subst(body, f->sym1(), k(1));
      return det(std::move(body));
    }
    case Kind::UnOp: {
      const Expr& v = k(0);
      if (e->unop() == UnOp::Neg) {
        if (!is_int(v) || v->num() == INT64_MIN) return stuck();
        return det(int_lit(-v->num()));
      }
      if (v->kind() != Kind::Bool) return stuck();
      return det(bool_lit(!v->as_bool()));
    }
    case Kind::BinOp:
      return binop_head(e->binop(), k(0), k(1));
    case Kind::If:
      if (k(0)->kind() != Kind::Bool) return stuck();
      return det(k(0)->as_bool() ? k(1) : k(2));
    case Kind::Fst:
    case Kind::Snd:
      if (k(0)->kind() != Kind::Pair) return stuck();
      return det(k(0)->child(e->kind() == Kind::Fst ? 0 : 1));
    case Kind::Match: {
      const Expr& v = k(0);
      if (v->kind() == Kind::InjL) return det(subst(k(1), e->sym0(), v->child(0)));
      if (v->kind() == Kind::InjR) return det(subst(k(2), e->sym1(), v->child(0)));
      return stuck();
    }
    case Kind::Alloc: {
      State out = s;
      auto index = static_cast<std::int64_t>(out.heap.size());
      out.heap.push_back(Cell{k(0), index, 1});
      return det(loc_lit(index), std::move(out));
    }
    case Kind::Load:
      if (!valid_loc(k(0), s)) return stuck();
      return det(s.heap[static_cast<std::size_t>(k(0)->num())].value);
    case Kind::Store: {
      if (!valid_loc(k(0), s)) return stuck();
      State out = s;
      out.heap[static_cast<std::size_t>(k(0)->num())].value = k(1);
      return det(unit_lit(), std::move(out));
    }
    case Kind::AllocN: {
      if (!is_int(k(0)) || k(0)->num() < 1) return stuck();
      std::int64_t n = k(0)->num();
      State out = s;
      auto base = static_cast<std::int64_t>(out.heap.size());
      for (std::int64_t i = 0; i < n; ++i) out.heap.push_back(Cell{k(1), base, n});
      return det(loc_lit(base), std::move(out));
    }
    case Kind::ArrLoad: {
      auto cell = array_cell(k(0), k(1), s);
      if (!cell) return stuck();
      return det(s.heap[*cell].value);
    }
    case Kind::ArrStore: {
      auto cell = array_cell(k(0), k(1), s);
      if (!cell) return stuck();
      State out = s;
      out.heap[*cell].value = k(2);
      return det(unit_lit(), std::move(out));
    }
    case Kind::Rand: {
      if (!is_int(k(0)) || k(0)->num() < 0) return stuck();
      Head h;
      h.kind = StepKind::Uniform;
      h.bound = k(0)->num();
      return h;
    }
    case Kind::RandL: {
      const Expr& label = k(0);
      const Expr& bound = k(1);
      if (label->kind() != Kind::Label || !is_int(bound) || bound->num() < 0) return stuck();
      if (label->num() < 0 || label->num() >= static_cast<std::int64_t>(s.tapes.size())) return stuck();
      const Tape& t = s.tapes[static_cast<std::size_t>(label->num())];
      if (t.bound == bound->num() && !t.queue.empty()) {
        State out = s;
        auto& q = out.tapes[static_cast<std::size_t>(label->num())].queue;
        std::int64_t head = q.front();
        q.erase(q.begin());
        return det(int_lit(head), std::move(out));
      }
      // empty tape, or a bound that differs from the tape's: plain sampling
      Head h;
      h.kind = StepKind::Uniform;
      h.bound = bound->num();
      return h;
    }
    case Kind::AllocTape: {
      if (!is_int(k(0)) || k(0)->num() < 0) return stuck();
      State out = s;
      auto label = static_cast<std::int64_t>(out.tapes.size());
      out.tapes.push_back(Tape{k(0)->num(), {}});
      return det(label_lit(label), std::move(out));
    }
    case Kind::Fork: {
      Head h = det(unit_lit());
      h.forked = k(0);
      return h;
    }
    case Kind::Faa: {
      if (!valid_loc(k(0), s) || !is_int(k(1))) return stuck();
      const Value& old = s.heap[static_cast<std::size_t>(k(0)->num())].value;
      if (!is_int(old)) return stuck();
      std::int64_t sum = 0;
      if (__builtin_add_overflow(old->num(), k(1)->num(), &sum)) return stuck();
      State out = s;
      out.heap[static_cast<std::size_t>(k(0)->num())].value = int_lit(sum);
      return det(old, std::move(out));
    }
    case Kind::Cas: {
      if (!valid_loc(k(0), s)) return stuck();
      const Value& cur = s.heap[static_cast<std::size_t>(k(0)->num())].value;
      if (!equal(cur, k(1))) return det(bool_lit(false));
      State out = s;
      out.heap[static_cast<std::size_t>(k(0)->num())].value = k(2);
      return det(bool_lit(true), std::move(out));
    }
    default:
      // variables, open functions
      return stuck();
  }
}

}  // namespace

Expr Step::plug(Expr inner) const {
  for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
    const Expr& parent = it->first;
    std::array<Expr, 3> kids;
    for (std::size_t i = 0; i < parent->arity(); ++i) kids[i] = parent->child(i);
    kids[it->second] = std::move(inner);
    inner = with_children(parent, std::span<const Expr>(kids.data(), parent->arity()));
  }
  return inner;
}

Expr Step::fill(std::int64_t k) const {
  if (kind != StepKind::Uniform) throw std::logic_error("Step::fill on a non-uniform step");
  return plug(int_lit(k));
}

Step analyze(const Expr& e, const State& s) {
  Step out;
  if (e->is_value()) {
    out.kind = StepKind::Value;
    return out;
  }
  Expr cur = e;
  out.frames_.reserve(16);
  for (;;) {
    const std::int8_t* order = eval_order(cur->kind());
    int next = -1;
    for (const std::int8_t* o = order; *o >= 0; ++o) {
      if (!cur->child(static_cast<std::size_t>(*o))->is_value()) {
        next = *o;
        break;
      }
    }
    if (next < 0) break;
    out.frames_.emplace_back(cur, static_cast<std::uint8_t>(next));
    Expr child = cur->child(static_cast<std::size_t>(next));
    cur = std::move(child);
  }
  Head h = head_step(cur, s);
  out.kind = h.kind;
  out.bound = h.bound;
  if (h.kind == StepKind::Det) {
    out.expr = out.plug(std::move(h.expr));
    out.state = std::move(h.state);
    out.forked = std::move(h.forked);
  }
  return out;
}

Dist<StepOutcome> step(const Expr& e, const State& s) {
  Step st = analyze(e, s);
  std::vector<std::pair<StepOutcome, Rational>> entries;
  switch (st.kind) {
    case StepKind::Value:
    case StepKind::Stuck:
      break;
    case StepKind::Det: {
      std::vector<Expr> forked;
      if (st.forked) forked.push_back(*st.forked);
      entries.emplace_back(StepOutcome{st.expr, st.state ? *st.state : s, std::move(forked)}, Rational(1));
      break;
    }
    case StepKind::Uniform: {
      if (st.bound > kMaxEnumeratedBound) throw std::length_error("rand bound too large to enumerate");
      Rational p = ratio(1, mpz_class(st.bound + 1));
      for (std::int64_t k = 0; k <= st.bound; ++k) entries.emplace_back(StepOutcome{st.fill(k), s, {}}, p);
      break;
    }
  }
  return Dist<StepOutcome>::from_entries(std::move(entries));
}

ThreadMove successors(const Config& c, std::size_t i, std::vector<Successor>& out) {
  if (i >= c.threads.size()) throw std::out_of_range("thread index out of range");
  if (c.final()) return ThreadMove::Final;
  const Expr& e = c.threads[i];
  if (e->is_value()) return ThreadMove::Stutter;
  Step st = analyze(e, c.state);
  switch (st.kind) {
    case StepKind::Value:
      return ThreadMove::Stutter;
    case StepKind::Stuck:
      return ThreadMove::Stuck;
    case StepKind::Det: {
      Config next;
      next.threads = c.threads;
      next.threads[i] = st.expr;
      if (st.forked) next.threads.push_back(*st.forked);
      next.state = st.state ? std::move(*st.state) : c.state;
      out.push_back(Successor{std::move(next), Rational(1)});
      return ThreadMove::Step;
    }
    case StepKind::Uniform: {
      if (st.bound > kMaxEnumeratedBound) throw std::length_error("rand bound too large to enumerate");
      Rational p = ratio(1, mpz_class(st.bound + 1));
      for (std::int64_t k = 0; k <= st.bound; ++k) {
        Config next;
        next.threads = c.threads;
        next.threads[i] = st.fill(k);
        next.state = c.state;
        out.push_back(Successor{std::move(next), p});
      }
      return ThreadMove::Step;
    }
  }
  return ThreadMove::Stuck;
}

Dist<Config> tpstep(const Config& c, std::size_t i) {
  std::vector<Successor> succ;
  switch (successors(c, i, succ)) {
    case ThreadMove::Final:
    case ThreadMove::Stuck:
      return {};
    case ThreadMove::Stutter:
      return Dist<Config>::point(c);
    case ThreadMove::Step:
      break;
  }
  std::vector<std::pair<Config, Rational>> entries;
  entries.reserve(succ.size());
  for (auto& s : succ) entries.emplace_back(std::move(s.config), std::move(s.p));
  return Dist<Config>::from_entries(std::move(entries));
}

}  // namespace probsched
