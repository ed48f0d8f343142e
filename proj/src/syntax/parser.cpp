#include "probsched/syntax/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "probsched/syntax/stdlib.hpp"

namespace probsched {

namespace {

std::string join_expected(const std::vector<std::string>& expected) {
  std::string out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) out += ", ";
    out += expected[i];
  }
  return out;
}

}  // namespace

ParseError::ParseError(SourcePos pos, std::string found, std::vector<std::string> expected)
    : std::runtime_error("syntax error at " + pos.str() + ": unexpected " + found + "; expected one of: " +
                         join_expected(expected)),
      pos_(pos),
      found_(std::move(found)),
      expected_(std::move(expected)) {}

ScopeError::ScopeError(SourcePos pos, std::string name)
    : std::runtime_error("unbound variable '" + name + "' at " + pos.str()), pos_(pos), name_(std::move(name)) {}

namespace {

enum class Tok {
  End,
  Int,
  Ident,
  LocLit,    // #l<n>
  LabelLit,  // #t<n>
  KwLet,
  KwRec,
  KwIn,
  KwFun,
  KwIf,
  KwThen,
  KwElse,
  KwMatch,
  KwWith,
  KwEnd,
  KwTrue,
  KwFalse,
  KwNone,
  Prim,  // ref, rand, fst, ... (text holds the keyword)
  LParen,
  RParen,
  LBracket,
  RBracket,
  DotBracket,
  Comma,
  Semi,
  Arrow,
  Equals,
  Assign,  // := or <-
  Plus,
  Minus,
  Star,
  Slash,
  Percent,
  EqEq,
  NotEq,
  Lt,
  Le,
  Gt,
  Ge,
  AndAnd,
  OrOr,
  Par,
  Bar,
  Bang,
  ColonColon,
  Underscore,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  SourcePos pos;
};

const std::unordered_map<std::string_view, Tok>& keywords() {
  static const std::unordered_map<std::string_view, Tok> table = {
      {"let", Tok::KwLet},     {"rec", Tok::KwRec},   {"in", Tok::KwIn},       {"fun", Tok::KwFun},
      {"if", Tok::KwIf},       {"then", Tok::KwThen}, {"else", Tok::KwElse},   {"match", Tok::KwMatch},
      {"with", Tok::KwWith},   {"end", Tok::KwEnd},   {"true", Tok::KwTrue},   {"false", Tok::KwFalse},
      {"None", Tok::KwNone},
  };
  return table;
}

// Primitive keywords and their argument counts (rand takes one or two).
const std::unordered_map<std::string_view, int>& primitives() {
  static const std::unordered_map<std::string_view, int> table = {
      {"ref", 1},  {"rand", 1},    {"alloctape", 1}, {"fork", 1},    {"faa", 2},     {"cas", 3},
      {"array", 2}, {"fst", 1},    {"snd", 1},       {"inl", 1},     {"inr", 1},     {"not", 1},
      {"Some", 1}, {"spawn", 1},   {"join", 1},      {"newlock", 1}, {"acquire", 1}, {"release", 1},
  };
  return table;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.pos = pos_;
      if (i_ >= src_.size()) {
        t.kind = Tok::End;
        t.text = "end of input";
        out.push_back(t);
        return out;
      }
      char c = src_[i_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Int;
        t.text = take_while([](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; });
        t.value = to_int(t.text, t.pos);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word = take_while([](char ch) {
          return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'';
        });
        t.text = word;
        if (word == "_") {
          t.kind = Tok::Underscore;
        } else if (auto it = keywords().find(word); it != keywords().end()) {
          t.kind = it->second;
        } else if (primitives().count(word)) {
          t.kind = Tok::Prim;
        } else {
          t.kind = Tok::Ident;
        }
      } else if (c == '#') {
        advance();
        if (i_ < src_.size() && (src_[i_] == 'l' || src_[i_] == 't')) {
          t.kind = src_[i_] == 'l' ? Tok::LocLit : Tok::LabelLit;
          advance();
          std::string digits = take_while([](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; });
          if (digits.empty()) throw ParseError(t.pos, "'#'", {"#l<index>", "#t<index>"});
          t.text = std::string("#") + (t.kind == Tok::LocLit ? "l" : "t") + digits;
          t.value = to_int(digits, t.pos);
        } else {
          throw ParseError(t.pos, "'#'", {"#l<index>", "#t<index>"});
        }
      } else {
        lex_symbol(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
  }

  bool starts(std::string_view s) const { return src_.substr(i_, s.size()) == s; }

  template <typename P>
  std::string take_while(P pred) {
    std::string out;
    while (i_ < src_.size() && pred(src_[i_])) {
      out.push_back(src_[i_]);
      advance();
    }
    return out;
  }

  static std::int64_t to_int(const std::string& digits, SourcePos pos) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc{}) throw ParseError(pos, "integer literal " + digits, {"integer fitting in 64 bits"});
    return v;
  }

  void skip_space() {
    for (;;) {
      while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) advance();
      if (starts("(*")) {
        SourcePos start = pos_;
        int depth = 0;
        do {
          if (i_ >= src_.size()) throw ParseError(start, "unterminated comment", {"*)"});
          if (starts("(*")) {
            ++depth;
            advance();
            advance();
          } else if (starts("*)")) {
            --depth;
            advance();
            advance();
          } else {
            advance();
          }
        } while (depth > 0);
        continue;
      }
      if (starts("//")) {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
        continue;
      }
      return;
    }
  }

  void lex_symbol(Token& t) {
    static const std::pair<std::string_view, Tok> table[] = {
        {"|||", Tok::Par},   {".[", Tok::DotBracket}, {"->", Tok::Arrow},  {":=", Tok::Assign},
        {"<-", Tok::Assign}, {"==", Tok::EqEq},       {"!=", Tok::NotEq},  {"<=", Tok::Le},
        {">=", Tok::Ge},     {"&&", Tok::AndAnd},     {"||", Tok::OrOr},   {"::", Tok::ColonColon},
        {"(", Tok::LParen},  {")", Tok::RParen},      {"[", Tok::LBracket}, {"]", Tok::RBracket},
        {",", Tok::Comma},   {";", Tok::Semi},        {"=", Tok::Equals},  {"+", Tok::Plus},
        {"-", Tok::Minus},   {"*", Tok::Star},        {"/", Tok::Slash},   {"%", Tok::Percent},
        {"<", Tok::Lt},      {">", Tok::Gt},          {"|", Tok::Bar},     {"!", Tok::Bang},
    };
    for (const auto& [sym, kind] : table) {
      if (starts(sym)) {
        t.kind = kind;
        t.text = std::string(sym);
        for (std::size_t k = 0; k < sym.size(); ++k) advance();
        return;
      }
    }
    throw ParseError(t.pos, std::string("character '") + src_[i_] + "'", {"a token"});
  }

  std::string_view src_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

using Node_ = SurfaceNode;
using Form = SurfaceNode::Form;

Node_ core_node(Kind k, SourcePos pos, std::vector<Node_> kids, std::int64_t num = 0) {
  Node_ n;
  n.form = Form::Core;
  n.core_kind = k;
  n.num = num;
  n.pos = pos;
  n.kids = std::move(kids);
  return n;
}

Node_ sugar_node(Form f, SourcePos pos, std::vector<Node_> kids) {
  Node_ n;
  n.form = f;
  n.pos = pos;
  n.kids = std::move(kids);
  return n;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Node_ program() {
    Node_ e = expr();
    expect(Tok::End, "end of input");
    return e;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  Token next() { return toks_[std::min(i_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? t.text : "'" + t.text + "'";
    throw ParseError(t.pos, found, std::move(expected));
  }

  Token expect(Tok k, const char* what) {
    if (!at(k)) fail({what});
    return next();
  }

  bool starts_atom() const {
    switch (peek().kind) {
      case Tok::Int:
      case Tok::Ident:
      case Tok::LocLit:
      case Tok::LabelLit:
      case Tok::KwTrue:
      case Tok::KwFalse:
      case Tok::KwNone:
      case Tok::KwMatch:
      case Tok::LParen:
      case Tok::LBracket:
      case Tok::Bang:
        return true;
      default:
        return false;
    }
  }

  bool starts_open_form() const {
    switch (peek().kind) {
      case Tok::KwLet:
      case Tok::KwFun:
      case Tok::KwRec:
      case Tok::KwIf:
        return true;
      default:
        return false;
    }
  }

  static std::vector<std::string> expression_starts() {
    return {"integer", "identifier", "'('", "'['", "'!'", "'-'", "let", "fun", "rec", "if", "match", "true",
            "false", "None", "a primitive such as ref or rand"};
  }

  // expr := nonseq (';' expr)?
  Node_ expr() {
    Node_ e = nonseq();
    if (at(Tok::Semi)) {
      SourcePos pos = next().pos;
      Node_ rest = expr();
      return sugar_node(Form::Seq, pos, {std::move(e), std::move(rest)});
    }
    return e;
  }

  // nonseq := assign ('|||' assign)*
  Node_ nonseq() {
    Node_ e = assign();
    while (at(Tok::Par)) {
      SourcePos pos = next().pos;
      Node_ r = assign();
      e = sugar_node(Form::Par, pos, {std::move(e), std::move(r)});
    }
    return e;
  }

  Node_ assign() {
    if (starts_open_form()) return open_form();
    bool bare_index = false;
    Node_ lhs = binary(0, &bare_index);
    if (at(Tok::Assign)) {
      SourcePos pos = next().pos;
      Node_ rhs = binary(0, nullptr);
      if (bare_index) {
        // a.[i] := v
        std::vector<Node_> kids = std::move(lhs.kids);
        kids.push_back(std::move(rhs));
        return core_node(Kind::ArrStore, pos, std::move(kids));
      }
      return core_node(Kind::Store, pos, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  struct OpInfo {
    int level;
    BinOp op;
    bool cons;
  };

  std::optional<OpInfo> binary_op() const {
    switch (peek().kind) {
      case Tok::OrOr: return OpInfo{0, BinOp::Or, false};
      case Tok::AndAnd: return OpInfo{1, BinOp::And, false};
      case Tok::EqEq: return OpInfo{2, BinOp::Eq, false};
      case Tok::NotEq: return OpInfo{2, BinOp::Ne, false};
      case Tok::Lt: return OpInfo{2, BinOp::Lt, false};
      case Tok::Le: return OpInfo{2, BinOp::Le, false};
      case Tok::Gt: return OpInfo{2, BinOp::Gt, false};
      case Tok::Ge: return OpInfo{2, BinOp::Ge, false};
      case Tok::ColonColon: return OpInfo{3, BinOp::Add, true};
      case Tok::Plus: return OpInfo{4, BinOp::Add, false};
      case Tok::Minus: return OpInfo{4, BinOp::Sub, false};
      case Tok::Star: return OpInfo{5, BinOp::Mul, false};
      case Tok::Slash: return OpInfo{5, BinOp::Quot, false};
      case Tok::Percent: return OpInfo{5, BinOp::Rem, false};
      default: return std::nullopt;
    }
  }

  // Precedence climbing over levels 0..5; comparisons are non-associative and
  // `::` is right-associative. `bare_index` reports whether the whole result is
  // an unparenthesized `a.[i]`.
  Node_ binary(int min_level, bool* bare_index) {
    bool lhs_bare = false;
    Node_ lhs = prefix(&lhs_bare);
    bool any = false;
    for (;;) {
      auto info = binary_op();
      if (!info || info->level < min_level) break;
      any = true;
      SourcePos pos = next().pos;
      int next_level = info->level + 1;
      if (info->cons) next_level = info->level;
      Node_ rhs = binary(next_level, nullptr);
      if (info->cons) {
        lhs = sugar_node(Form::Cons, pos, {std::move(lhs), std::move(rhs)});
      } else {
        lhs = core_node(Kind::BinOp, pos, {std::move(lhs), std::move(rhs)}, static_cast<std::int64_t>(info->op));
      }
      if (info->level == 2) {
        auto again = binary_op();
        if (again && again->level == 2) fail({"operator other than a comparison (comparisons do not chain)"});
      }
    }
    if (bare_index) *bare_index = lhs_bare && !any;
    return lhs;
  }

  Node_ prefix(bool* bare_index) {
    if (starts_open_form()) return open_form();
    if (at(Tok::Minus)) {
      SourcePos pos = next().pos;
      if (at(Tok::Int)) {
        Token t = next();
        Node_ lit = core_node(Kind::Int, pos, {}, -t.value);
        return postfix_tail(std::move(lit), bare_index);
      }
      Node_ operand = prefix(nullptr);
      return core_node(Kind::UnOp, pos, {std::move(operand)}, static_cast<std::int64_t>(UnOp::Neg));
    }
    return application(bare_index);
  }

  Node_ application(bool* bare_index) {
    if (at(Tok::Prim)) return primitive();
    bool bare = false;
    Node_ head = postfix(&bare);
    bool applied = false;
    while (starts_atom()) {
      SourcePos pos = peek().pos;
      Node_ arg = postfix(nullptr);
      head = core_node(Kind::App, pos, {std::move(head), std::move(arg)});
      applied = true;
    }
    if (bare_index) *bare_index = bare && !applied;
    return head;
  }

  Node_ primitive() {
    Token kw = next();
    SourcePos pos = kw.pos;
    int arity = primitives().at(kw.text);
    std::vector<Node_> args;
    for (int a = 0; a < arity; ++a) {
      if (!starts_atom()) fail({"argument of '" + kw.text + "'"});
      args.push_back(postfix(nullptr));
    }
    if (kw.text == "rand" && starts_atom()) args.push_back(postfix(nullptr));
    const std::string& k = kw.text;
    if (k == "ref") return core_node(Kind::Alloc, pos, std::move(args));
    if (k == "rand") {
      Kind kind = args.size() == 2 ? Kind::RandL : Kind::Rand;
      return core_node(kind, pos, std::move(args));
    }
    if (k == "alloctape") return core_node(Kind::AllocTape, pos, std::move(args));
    if (k == "fork") return core_node(Kind::Fork, pos, std::move(args));
    if (k == "faa") return core_node(Kind::Faa, pos, std::move(args));
    if (k == "cas") return core_node(Kind::Cas, pos, std::move(args));
    if (k == "array") return core_node(Kind::AllocN, pos, std::move(args));
    if (k == "fst") return core_node(Kind::Fst, pos, std::move(args));
    if (k == "snd") return core_node(Kind::Snd, pos, std::move(args));
    if (k == "inl") return core_node(Kind::InjL, pos, std::move(args));
    if (k == "inr") return core_node(Kind::InjR, pos, std::move(args));
    if (k == "not") return core_node(Kind::UnOp, pos, std::move(args), static_cast<std::int64_t>(UnOp::Not));
    if (k == "Some") return sugar_node(Form::SomeE, pos, std::move(args));
    if (k == "spawn") return sugar_node(Form::Spawn, pos, std::move(args));
    if (k == "join") return sugar_node(Form::Join, pos, std::move(args));
    if (k == "newlock") return sugar_node(Form::NewLock, pos, std::move(args));
    if (k == "acquire") return sugar_node(Form::Acquire, pos, std::move(args));
    return sugar_node(Form::Release, pos, std::move(args));
  }

  Node_ postfix(bool* bare_index) {
    if (at(Tok::Bang)) {
      SourcePos pos = next().pos;
      Node_ operand = postfix(nullptr);
      if (bare_index) *bare_index = false;
      return core_node(Kind::Load, pos, {std::move(operand)});
    }
    return postfix_tail(atom(), bare_index);
  }

  Node_ postfix_tail(Node_ base, bool* bare_index) {
    bool bare = false;
    while (at(Tok::DotBracket)) {
      SourcePos pos = next().pos;
      Node_ index = expr();
      expect(Tok::RBracket, "']'");
      base = core_node(Kind::ArrLoad, pos, {std::move(base), std::move(index)});
      bare = true;
    }
    if (bare_index) *bare_index = bare;
    return base;
  }

  Node_ atom() {
    const Token& t = peek();
    SourcePos pos = t.pos;
    switch (t.kind) {
      case Tok::Int: {
        std::int64_t v = next().value;
        return core_node(Kind::Int, pos, {}, v);
      }
      case Tok::LocLit: {
        std::int64_t v = next().value;
        return core_node(Kind::Loc, pos, {}, v);
      }
      case Tok::LabelLit: {
        std::int64_t v = next().value;
        return core_node(Kind::Label, pos, {}, v);
      }
      case Tok::KwTrue:
        next();
        return core_node(Kind::Bool, pos, {}, 1);
      case Tok::KwFalse:
        next();
        return core_node(Kind::Bool, pos, {}, 0);
      case Tok::KwNone:
        next();
        return sugar_node(Form::NoneLit, pos, {});
      case Tok::Ident: {
        Node_ n;
        n.form = Form::Var;
        n.pos = pos;
        n.name = next().text;
        return n;
      }
      case Tok::KwMatch:
        return match_expr();
      case Tok::LBracket: {
        next();
        std::vector<Node_> items;
        if (!at(Tok::RBracket)) {
          items.push_back(nonseq());
          while (at(Tok::Semi)) {
            next();
            items.push_back(nonseq());
          }
        }
        expect(Tok::RBracket, "']'");
        return sugar_node(Form::ListLit, pos, std::move(items));
      }
      case Tok::LParen: {
        next();
        if (at(Tok::RParen)) {
          next();
          return core_node(Kind::Unit, pos, {});
        }
        std::vector<Node_> items;
        items.push_back(expr_in_parens());
        while (at(Tok::Comma)) {
          next();
          items.push_back(expr_in_parens());
        }
        expect(Tok::RParen, "')'");
        if (items.size() == 1) return std::move(items.front());
        // (a, b, c) is (a, (b, c))
        Node_ acc = std::move(items.back());
        for (std::size_t k = items.size() - 1; k-- > 0;) {
          acc = core_node(Kind::Pair, pos, {std::move(items[k]), std::move(acc)});
        }
        return acc;
      }
      default:
        fail(expression_starts());
    }
  }

  // Inside parentheses a full sequence is allowed unless a comma follows.
  Node_ expr_in_parens() { return expr(); }

  Node_ open_form() {
    switch (peek().kind) {
      case Tok::KwLet: return let_expr();
      case Tok::KwFun: {
        SourcePos pos = next().pos;
        std::vector<Pattern> params = param_list();
        if (params.empty()) fail({"parameter"});
        expect(Tok::Arrow, "'->'");
        Node_ body = expr();
        Node_ n = sugar_node(Form::Fun, pos, {std::move(body)});
        n.params = std::move(params);
        return n;
      }
      case Tok::KwRec: {
        SourcePos pos = next().pos;
        std::string name = expect(Tok::Ident, "function name").text;
        std::vector<Pattern> params = param_list();
        if (params.empty()) fail({"parameter"});
        expect(Tok::Equals, "'='");
        Node_ body = expr();
        Node_ n = sugar_node(Form::RecFun, pos, {std::move(body)});
        n.name = std::move(name);
        n.params = std::move(params);
        return n;
      }
      case Tok::KwIf: {
        SourcePos pos = next().pos;
        Node_ c = expr();
        expect(Tok::KwThen, "then");
        Node_ t = expr();
        expect(Tok::KwElse, "else");
        Node_ e = expr();
        return core_node(Kind::If, pos, {std::move(c), std::move(t), std::move(e)});
      }
      default:
        fail({"let", "fun", "rec", "if"});
    }
  }

  bool starts_pattern() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::Underscore:
      case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  Pattern pattern() {
    Pattern p;
    p.pos = peek().pos;
    switch (peek().kind) {
      case Tok::Ident:
        p.form = Pattern::Form::Var;
        p.name = next().text;
        return p;
      case Tok::Underscore:
        next();
        p.form = Pattern::Form::Wild;
        return p;
      case Tok::LParen: {
        next();
        if (at(Tok::RParen)) {
          next();
          p.form = Pattern::Form::Unit;
          return p;
        }
        std::vector<Pattern> items;
        items.push_back(pattern());
        while (at(Tok::Comma)) {
          next();
          items.push_back(pattern());
        }
        expect(Tok::RParen, "')'");
        if (items.size() == 1) return items.front();
        Pattern acc = std::move(items.back());
        for (std::size_t k = items.size() - 1; k-- > 0;) {
          Pattern pr;
          pr.form = Pattern::Form::Pair;
          pr.pos = items[k].pos;
          pr.items = {std::move(items[k]), std::move(acc)};
          acc = std::move(pr);
        }
        return acc;
      }
      default:
        fail({"identifier", "'_'", "'('"});
    }
  }

  std::vector<Pattern> param_list() {
    std::vector<Pattern> params;
    while (starts_pattern()) params.push_back(pattern());
    return params;
  }

  Node_ let_expr() {
    SourcePos pos = next().pos;
    if (at(Tok::KwRec)) {
      next();
      std::string name = expect(Tok::Ident, "function name").text;
      std::vector<Pattern> params = param_list();
      if (params.empty()) fail({"parameter"});
      expect(Tok::Equals, "'='");
      Node_ fn = expr();
      expect(Tok::KwIn, "in");
      Node_ body = expr();
      Node_ n = sugar_node(Form::LetRec, pos, {std::move(fn), std::move(body)});
      n.name = std::move(name);
      n.params = std::move(params);
      return n;
    }
    if (at(Tok::Ident) && peek(1).kind != Tok::Equals) {
      std::string name = next().text;
      std::vector<Pattern> params = param_list();
      if (params.empty()) fail({"'='"});
      expect(Tok::Equals, "'='");
      Node_ fn = expr();
      expect(Tok::KwIn, "in");
      Node_ body = expr();
      Node_ n = sugar_node(Form::LetFun, pos, {std::move(fn), std::move(body)});
      n.name = std::move(name);
      n.params = std::move(params);
      return n;
    }
    Pattern p = pattern();
    expect(Tok::Equals, "'='");
    Node_ bound = expr();
    expect(Tok::KwIn, "in");
    Node_ body = expr();
    Node_ n = sugar_node(Form::Let, pos, {std::move(bound), std::move(body)});
    n.params.push_back(std::move(p));
    return n;
  }

  SurfaceNode::Arm arm_head() {
    using Tag = SurfaceNode::Arm::Tag;
    SurfaceNode::Arm arm;
    const Token& t = peek();
    if (t.kind == Tok::Prim && (t.text == "inl" || t.text == "inr" || t.text == "Some")) {
      std::string kw = next().text;
      arm.tag = kw == "inl" ? Tag::Inl : kw == "inr" ? Tag::Inr : Tag::Some;
      arm.first = pattern();
      return arm;
    }
    if (t.kind == Tok::KwNone) {
      next();
      arm.tag = Tag::None;
      return arm;
    }
    if (t.kind == Tok::LBracket) {
      next();
      expect(Tok::RBracket, "']'");
      arm.tag = Tag::Nil;
      return arm;
    }
    if (starts_pattern()) {
      arm.first = pattern();
      expect(Tok::ColonColon, "'::'");
      arm.second = pattern();
      arm.tag = Tag::Cons;
      return arm;
    }
    fail({"inl", "inr", "None", "Some", "[]", "x :: xs"});
  }

  Node_ match_expr() {
    using Tag = SurfaceNode::Arm::Tag;
    SourcePos pos = next().pos;
    Node_ scrut = expr();
    expect(Tok::KwWith, "with");
    if (at(Tok::Bar)) next();
    SurfaceNode::Arm a1 = arm_head();
    expect(Tok::Arrow, "'->'");
    Node_ e1 = expr();
    expect(Tok::Bar, "'|'");
    SourcePos second_pos = peek().pos;
    SurfaceNode::Arm a2 = arm_head();
    expect(Tok::Arrow, "'->'");
    Node_ e2 = expr();
    expect(Tok::KwEnd, "end");
    auto is_left = [](Tag t) { return t == Tag::Inl || t == Tag::None || t == Tag::Nil; };
    if (is_left(a1.tag) == is_left(a2.tag)) {
      throw ParseError(second_pos, "second arm of the same shape", {"one left arm (inl/None/[]) and one right arm"});
    }
    if (!is_left(a1.tag)) {
      std::swap(a1, a2);
      std::swap(e1, e2);
    }
    Node_ n = sugar_node(Form::Match, pos, {std::move(scrut), std::move(e1), std::move(e2)});
    n.arms = {std::move(a1), std::move(a2)};
    return n;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

// ---------------------------------------------------------------------------
// scope checking

void pattern_names(const Pattern& p, std::vector<std::string>& out) {
  switch (p.form) {
    case Pattern::Form::Var: out.push_back(p.name); break;
    case Pattern::Form::Pair:
      for (const auto& q : p.items) pattern_names(q, out);
      break;
    default: break;
  }
}

class ScopeChecker {
 public:
  void check(const Node_& n) {
    switch (n.form) {
      case Form::Var:
        if (!bound(n.name) && !is_stdlib_name(n.name)) throw ScopeError(n.pos, n.name);
        return;
      case Form::Let:
        check(n.kids[0]);
        with(n.params, [&] { check(n.kids[1]); });
        return;
      case Form::LetFun:
        with(n.params, [&] { check(n.kids[0]); });
        with_name(n.name, [&] { check(n.kids[1]); });
        return;
      case Form::LetRec:
        with_name(n.name, [&] {
          with(n.params, [&] { check(n.kids[0]); });
          check(n.kids[1]);
        });
        return;
      case Form::Fun:
        with(n.params, [&] { check(n.kids[0]); });
        return;
      case Form::RecFun:
        with_name(n.name, [&] { with(n.params, [&] { check(n.kids[0]); }); });
        return;
      case Form::Match: {
        check(n.kids[0]);
        for (int k = 0; k < 2; ++k) {
          std::vector<Pattern> ps = {n.arms[k].first, n.arms[k].second};
          with(ps, [&] { check(n.kids[k + 1]); });
        }
        return;
      }
      default:
        for (const auto& k : n.kids) check(k);
        return;
    }
  }

 private:
  bool bound(const std::string& name) const {
    auto it = env_.find(name);
    return it != env_.end() && it->second > 0;
  }

  template <typename F>
  void with(const std::vector<Pattern>& ps, F&& body) {
    std::vector<std::string> names;
    for (const auto& p : ps) pattern_names(p, names);
    for (const auto& s : names) ++env_[s];
    body();
    for (const auto& s : names) --env_[s];
  }

  template <typename F>
  void with_name(const std::string& name, F&& body) {
    ++env_[name];
    body();
    --env_[name];
  }

  std::unordered_map<std::string, int> env_;
};

// ---------------------------------------------------------------------------
// desugaring

bool any_free(const Expr& e, Sym s) { return e->has_free(s); }

// A name not free in any of `avoid` and distinct from `taken`.
Sym fresh(std::string_view base, std::initializer_list<const Expr*> avoid, std::initializer_list<Sym> taken = {}) {
  for (int k = 0;; ++k) {
    Sym s = intern(k == 0 ? std::string(base) : std::string(base) + std::to_string(k));
    bool clash = std::find(taken.begin(), taken.end(), s) != taken.end();
    for (const Expr* e : avoid) clash = clash || any_free(*e, s);
    if (!clash) return s;
  }
}

Sym binder_of(const Pattern& p) {
  switch (p.form) {
    case Pattern::Form::Var: return intern(p.name);
    default: return kAnonymous;
  }
}

class Desugarer {
 public:
  Expr run(const Node_& n) {
    switch (n.form) {
      case Form::Core: return core(n);
      case Form::Var: {
        if (bound(n.name)) return var(n.name);
        if (auto v = stdlib::lookup(n.name)) return *v;
        throw ScopeError(n.pos, n.name);
      }
      case Form::Let: {
        Expr bound_e = run(n.kids[0]);
        Expr body = under(n.params, [&] { return run(n.kids[1]); });
        return bind_pattern(n.params[0], std::move(bound_e), std::move(body));
      }
      case Form::LetFun: {
        Expr fn = under(n.params, [&] { return lambda(n.params, run(n.kids[0])); });
        Expr body = under_name(n.name, [&] { return run(n.kids[1]); });
        return let_(intern(n.name), std::move(fn), std::move(body));
      }
      case Form::LetRec: {
        Expr fn = under_name(n.name, [&] { return under(n.params, [&] { return rec_fn(n.name, n.params, run(n.kids[0])); }); });
        Expr body = under_name(n.name, [&] { return run(n.kids[1]); });
        return let_(intern(n.name), std::move(fn), std::move(body));
      }
      case Form::Fun:
        return under(n.params, [&] { return lambda(n.params, run(n.kids[0])); });
      case Form::RecFun:
        return under_name(n.name, [&] { return under(n.params, [&] { return rec_fn(n.name, n.params, run(n.kids[0])); }); });
      case Form::Seq: {
        Expr a = run(n.kids[0]);
        Expr b = run(n.kids[1]);
        return let_(kAnonymous, std::move(a), std::move(b));
      }
      case Form::Par: return parallel(run(n.kids[0]), run(n.kids[1]));
      case Form::ListLit: {
        Expr acc = inl(unit_lit());
        for (auto it = n.kids.rbegin(); it != n.kids.rend(); ++it) acc = inr(pair(run(*it), std::move(acc)));
        return acc;
      }
      case Form::Cons: {
        Expr h = run(n.kids[0]);
        Expr t = run(n.kids[1]);
        return inr(pair(std::move(h), std::move(t)));
      }
      case Form::NoneLit: return inl(unit_lit());
      case Form::SomeE: return inr(run(n.kids[0]));
      case Form::Match: return match_arms(n);
      case Form::Spawn: {
        Expr body = run(n.kids[0]);
        Sym cell = fresh("spawn_cell", {&body});
        Expr h = var(cell);
        return let_(cell, alloc(inl(unit_lit())), let_(kAnonymous, fork(store(h, inr(body))), h));
      }
      case Form::Join: return app(stdlib::par_wait(), run(n.kids[0]));
      case Form::NewLock: {
        Expr arg = run(n.kids[0]);
        if (arg->kind() == Kind::Unit) return alloc(bool_lit(false));
        return let_(kAnonymous, std::move(arg), alloc(bool_lit(false)));
      }
      case Form::Acquire: return app(stdlib::acquire(), run(n.kids[0]));
      case Form::Release: return store(run(n.kids[0]), bool_lit(false));
    }
    throw std::logic_error("unhandled surface form");
  }

 private:
  Expr core(const Node_& n) {
    switch (n.core_kind) {
      case Kind::Int: return int_lit(n.num);
      case Kind::Bool: return bool_lit(n.num != 0);
      case Kind::Unit: return unit_lit();
      case Kind::Loc: return loc_lit(n.num);
      case Kind::Label: return label_lit(n.num);
      default: break;
    }
    std::array<Expr, 3> kids;
    for (std::size_t k = 0; k < n.kids.size(); ++k) kids[k] = run(n.kids[k]);
    switch (n.core_kind) {
      case Kind::App: return app(kids[0], kids[1]);
      case Kind::UnOp: return unop(static_cast<UnOp>(n.num), kids[0]);
      case Kind::BinOp: return binop(static_cast<BinOp>(n.num), kids[0], kids[1]);
      case Kind::If: return if_(kids[0], kids[1], kids[2]);
      case Kind::Pair: return pair(kids[0], kids[1]);
      case Kind::Fst: return fst(kids[0]);
      case Kind::Snd: return snd(kids[0]);
      case Kind::InjL: return inl(kids[0]);
      case Kind::InjR: return inr(kids[0]);
      case Kind::Alloc: return alloc(kids[0]);
      case Kind::Load: return load(kids[0]);
      case Kind::Store: return store(kids[0], kids[1]);
      case Kind::AllocN: return alloc_n(kids[0], kids[1]);
      case Kind::ArrLoad: return arr_load(kids[0], kids[1]);
      case Kind::ArrStore: return arr_store(kids[0], kids[1], kids[2]);
      case Kind::Rand: return rand(kids[0]);
      case Kind::RandL: return rand_l(kids[0], kids[1]);
      case Kind::AllocTape: return alloc_tape(kids[0]);
      case Kind::Fork: return fork(kids[0]);
      case Kind::Faa: return faa(kids[0], kids[1]);
      case Kind::Cas: return cas(kids[0], kids[1], kids[2]);
      default: break;
    }
    throw std::logic_error("unhandled core form in surface tree");
  }

  // let p = bound in body, where body was desugared with p's names in scope.
  Expr bind_pattern(const Pattern& p, Expr bound_e, Expr body) {
    if (p.form != Pattern::Form::Pair) return let_(binder_of(p), std::move(bound_e), std::move(body));
    std::vector<std::string> names;
    pattern_names(p, names);
    Sym tmp = fresh_avoiding("tuple", body, names);
    return let_(tmp, std::move(bound_e), destructure(p, var(tmp), std::move(body)));
  }

  // Binds the components of `p` from the variable expression `source`.
  Expr destructure(const Pattern& p, Expr source, Expr body) {
    if (p.form == Pattern::Form::Wild) return body;
    if (p.form != Pattern::Form::Pair) return let_(binder_of(p), std::move(source), std::move(body));
    const Pattern& a = p.items[0];
    const Pattern& b = p.items[1];
    // let a = fst t in let b = snd t in body; `t` is never rebound by a or b
    Expr inner = destructure(b, snd(source), std::move(body));
    return destructure(a, fst(source), std::move(inner));
  }

  Sym fresh_avoiding(std::string_view base, const Expr& body, const std::vector<std::string>& names) {
    for (int k = 0;; ++k) {
      std::string cand = k == 0 ? std::string(base) : std::string(base) + std::to_string(k);
      if (std::find(names.begin(), names.end(), cand) != names.end()) continue;
      Sym s = intern(cand);
      if (!body->has_free(s)) return s;
    }
  }

  Expr lambda(const std::vector<Pattern>& params, Expr body) {
    for (auto it = params.rbegin(); it != params.rend(); ++it) body = param(*it, std::move(body), kAnonymous);
    return body;
  }

  Expr rec_fn(const std::string& name, const std::vector<Pattern>& params, Expr body) {
    for (std::size_t k = params.size(); k-- > 1;) body = param(params[k], std::move(body), kAnonymous);
    return param(params[0], std::move(body), intern(name));
  }

  // rec self x = body, destructuring a pair-pattern parameter.
  Expr param(const Pattern& p, Expr body, Sym self) {
    if (p.form != Pattern::Form::Pair) return rec(self, binder_of(p), std::move(body));
    std::vector<std::string> names;
    pattern_names(p, names);
    if (self != kAnonymous) names.push_back(symbol_name(self));
    Sym tmp = fresh_avoiding("arg", body, names);
    return rec(self, tmp, destructure(p, var(tmp), std::move(body)));
  }

  Expr parallel(Expr left, Expr right) {
    Sym cell = fresh("par_cell", {&left, &right});
    Sym lv = fresh("par_left", {&left, &right}, {cell});
    Expr h = var(cell);
    Expr result = pair(var(lv), app(stdlib::par_wait(), h));
    Expr body = let_(kAnonymous, fork(store(h, inr(std::move(right)))), let_(lv, std::move(left), std::move(result)));
    return let_(cell, alloc(inl(unit_lit())), std::move(body));
  }

  Expr match_arms(const Node_& n) {
    using Tag = SurfaceNode::Arm::Tag;
    Expr scrut = run(n.kids[0]);
    Sym binders[2];
    Expr bodies[2];
    for (int k = 0; k < 2; ++k) {
      const auto& arm = n.arms[k];
      std::vector<Pattern> ps = {arm.first, arm.second};
      Expr body = under(ps, [&] { return run(n.kids[k + 1]); });
      switch (arm.tag) {
        case Tag::Nil:
        case Tag::None:
          binders[k] = kAnonymous;
          bodies[k] = std::move(body);
          break;
        case Tag::Cons: {
          std::vector<std::string> names;
          pattern_names(arm.first, names);
          pattern_names(arm.second, names);
          Sym tmp = fresh_avoiding("cell", body, names);
          Pattern whole;
          whole.form = Pattern::Form::Pair;
          whole.items = {arm.first, arm.second};
          binders[k] = tmp;
          bodies[k] = destructure(whole, var(tmp), std::move(body));
          break;
        }
        default:
          if (arm.first.form == Pattern::Form::Pair) {
            std::vector<std::string> names;
            pattern_names(arm.first, names);
            Sym tmp = fresh_avoiding("payload", body, names);
            binders[k] = tmp;
            bodies[k] = destructure(arm.first, var(tmp), std::move(body));
          } else {
            binders[k] = binder_of(arm.first);
            bodies[k] = std::move(body);
          }
          break;
      }
    }
    return match(std::move(scrut), binders[0], std::move(bodies[0]), binders[1], std::move(bodies[1]));
  }

  bool bound(const std::string& name) const {
    auto it = env_.find(name);
    return it != env_.end() && it->second > 0;
  }

  template <typename F>
  Expr under(const std::vector<Pattern>& ps, F&& body) {
    std::vector<std::string> names;
    for (const auto& p : ps) pattern_names(p, names);
    for (const auto& s : names) ++env_[s];
    Expr out = body();
    for (const auto& s : names) --env_[s];
    return out;
  }

  template <typename F>
  Expr under_name(const std::string& name, F&& body) {
    ++env_[name];
    Expr out = body();
    --env_[name];
    return out;
  }

  std::unordered_map<std::string, int> env_;
};

}  // namespace

SurfaceProgram parse(std::string_view text) {
  Lexer lexer(text);
  Parser parser(lexer.run());
  SurfaceProgram p;
  p.source = std::string(text);
  p.root = parser.program();
  ScopeChecker{}.check(p.root);
  return p;
}

Expr desugar(const SurfaceProgram& program) { return Desugarer{}.run(program.root); }

Expr parse_core(std::string_view text) { return desugar(parse(text)); }

bool is_core_only(const SurfaceNode& node) {
  if (node.form != SurfaceNode::Form::Core && node.form != SurfaceNode::Form::Var) return false;
  for (const auto& k : node.kids) {
    if (!is_core_only(k)) return false;
  }
  return true;
}

}  // namespace probsched
