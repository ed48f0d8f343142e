#include "probsched/syntax/pretty.hpp"

namespace probsched {

namespace {

// Context levels, loosest first.
enum Level : int {
  kSeq = 0,
  kPar = 1,
  kStore = 2,
  kOr = 3,
  kAnd = 4,
  kCmp = 5,
  kCons = 6,
  kAdd = 7,
  kMul = 8,
  kPrefix = 9,
  kApp = 10,
  kPostfix = 11,
  kAtom = 12,
};

bool is_let(const Expr& e) {
  return e->kind() == Kind::App && e->child(0)->kind() == Kind::Rec && e->child(0)->sym0() == kAnonymous;
}

bool is_primitive_app(const Expr& e) {
  switch (e->kind()) {
    case Kind::Fst:
    case Kind::Snd:
    case Kind::InjL:
    case Kind::InjR:
    case Kind::Alloc:
    case Kind::AllocN:
    case Kind::Rand:
    case Kind::RandL:
    case Kind::AllocTape:
    case Kind::Fork:
    case Kind::Faa:
    case Kind::Cas:
      return true;
    case Kind::UnOp:
      return e->unop() == UnOp::Not;
    default:
      return false;
  }
}

const std::string& binder(Sym s) {
  static const std::string wild = "_";
  return s == kAnonymous ? wild : symbol_name(s);
}

struct Printer {
  std::string out;

  void emit(const Expr& e, int ctx) {
    int level = level_of(e);
    bool paren = level < ctx;
    if (paren) out += '(';
    body(e);
    if (paren) out += ')';
  }

  static int level_of(const Expr& e) {
    switch (e->kind()) {
      case Kind::Rec:
      case Kind::If:
        return kSeq;
      case Kind::App:
        if (is_let(e)) return kSeq;
        return kApp;
      case Kind::BinOp:
        switch (e->binop()) {
          case BinOp::Or: return kOr;
          case BinOp::And: return kAnd;
          case BinOp::Add:
          case BinOp::Sub: return kAdd;
          case BinOp::Mul:
          case BinOp::Quot:
          case BinOp::Rem: return kMul;
          default: return kCmp;
        }
      case Kind::UnOp:
        return e->unop() == UnOp::Neg ? kPrefix : kApp;
      case Kind::Store:
      case Kind::ArrStore:
        return kStore;
      case Kind::Load:
      case Kind::ArrLoad:
        return kPostfix;
      case Kind::Int:
        return e->num() < 0 ? kPrefix : kAtom;
      default:
        return is_primitive_app(e) ? kApp : kAtom;
    }
  }

  void prim(const char* name, const Expr& e) {
    out += name;
    for (std::size_t i = 0; i < e->arity(); ++i) {
      out += ' ';
      emit(e->child(i), kAtom);
    }
  }

  void body(const Expr& e) {
    switch (e->kind()) {
      case Kind::Int:
        out += std::to_string(e->num());
        return;
      case Kind::Bool:
        out += e->as_bool() ? "true" : "false";
        return;
      case Kind::Unit:
        out += "()";
        return;
      case Kind::Loc:
        out += "#l" + std::to_string(e->num());
        return;
      case Kind::Label:
        out += "#t" + std::to_string(e->num());
        return;
      case Kind::Var:
        out += symbol_name(e->sym0());
        return;
      case Kind::Rec:
        if (e->sym0() == kAnonymous) {
          out += "fun " + binder(e->sym1()) + " -> ";
        } else {
          out += "rec " + symbol_name(e->sym0()) + " " + binder(e->sym1()) + " = ";
        }
        emit(e->child(0), kSeq);
        return;
      case Kind::App:
        if (is_let(e)) {
          const Expr& fn = e->child(0);
          if (fn->sym1() == kAnonymous) {
            emit(e->child(1), kPar);
            out += "; ";
          } else {
            out += "let " + symbol_name(fn->sym1()) + " = ";
            emit(e->child(1), kSeq);
            out += " in ";
          }
          emit(fn->child(0), kSeq);
          return;
        }
        // A primitive in head position would swallow the argument.
        emit(e->child(0), is_primitive_app(e->child(0)) ? kPostfix : kApp);
        out += ' ';
        emit(e->child(1), kPostfix);
        return;
      case Kind::UnOp:
        if (e->unop() == UnOp::Neg) {
          out += "-";
          // `-3` would read back as a literal
          if (e->child(0)->kind() == Kind::Int) {
            out += '(';
            body(e->child(0));
            out += ')';
          } else {
            emit(e->child(0), kAtom);
          }
        } else {
          prim("not", e);
        }
        return;
      case Kind::BinOp: {
        int level = level_of(e);
        bool chain = level != kCmp;
        emit(e->child(0), chain ? level : level + 1);
        out += ' ';
        out += binop_token(e->binop());
        out += ' ';
        emit(e->child(1), level + 1);
        return;
      }
      case Kind::If:
        out += "if ";
        emit(e->child(0), kSeq);
        out += " then ";
        emit(e->child(1), kSeq);
        out += " else ";
        emit(e->child(2), kSeq);
        return;
      case Kind::Pair:
        out += '(';
        emit(e->child(0), kSeq);
        out += ", ";
        emit(e->child(1), kSeq);
        out += ')';
        return;
      case Kind::Fst: prim("fst", e); return;
      case Kind::Snd: prim("snd", e); return;
      case Kind::InjL: prim("inl", e); return;
      case Kind::InjR: prim("inr", e); return;
      case Kind::Match:
        out += "match ";
        emit(e->child(0), kSeq);
        out += " with inl " + binder(e->sym0()) + " -> ";
        emit(e->child(1), kSeq);
        out += " | inr " + binder(e->sym1()) + " -> ";
        emit(e->child(2), kSeq);
        out += " end";
        return;
      case Kind::Alloc: prim("ref", e); return;
      case Kind::Load:
        out += '!';
        emit(e->child(0), kPostfix);
        return;
      case Kind::Store:
        // `(a.[i]) := v` is a plain store; without parentheses it is an array store.
        emit(e->child(0), e->child(0)->kind() == Kind::ArrLoad ? kAtom : kOr);
        out += " := ";
        emit(e->child(1), kOr);
        return;
      case Kind::AllocN: prim("array", e); return;
      case Kind::ArrLoad:
        emit(e->child(0), kAtom);
        out += ".[";
        emit(e->child(1), kSeq);
        out += ']';
        return;
      case Kind::ArrStore:
        emit(e->child(0), kAtom);
        out += ".[";
        emit(e->child(1), kSeq);
        out += "] := ";
        emit(e->child(2), kOr);
        return;
      case Kind::Rand: prim("rand", e); return;
      case Kind::RandL: prim("rand", e); return;
      case Kind::AllocTape: prim("alloctape", e); return;
      case Kind::Fork: prim("fork", e); return;
      case Kind::Faa: prim("faa", e); return;
      case Kind::Cas: prim("cas", e); return;
    }
  }
};

}  // namespace

std::string pretty(const Expr& e) {
  Printer p;
  p.emit(e, kSeq);
  return p.out;
}

}  // namespace probsched
