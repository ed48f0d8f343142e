#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "probsched/syntax/expr.hpp"

namespace probsched {

struct SourcePos {
  int line = 1;
  int column = 1;
  std::string str() const { return std::to_string(line) + ":" + std::to_string(column); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, std::string found, std::vector<std::string> expected);
  SourcePos pos() const { return pos_; }
  const std::string& found() const { return found_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  SourcePos pos_;
  std::string found_;
  std::vector<std::string> expected_;
};

class ScopeError : public std::runtime_error {
 public:
  ScopeError(SourcePos pos, std::string name);
  SourcePos pos() const { return pos_; }
  const std::string& name() const { return name_; }

 private:
  SourcePos pos_;
  std::string name_;
};

// Binding patterns accepted by let, fun and match arms.
struct Pattern {
  enum class Form { Var, Wild, Unit, Pair };
  Form form = Form::Wild;
  std::string name;
  std::vector<Pattern> items;  // Pair: exactly two
  SourcePos pos;
};

// Surface syntax tree: core constructs with surface children, plus the
// derived forms that desugar() removes.
struct SurfaceNode {
  enum class Form {
    Core,     // core_kind with kids in core child order; literals use num
    Var,      // name
    Let,      // params[0] = pattern; kids = {bound, body}
    LetFun,   // name, params; kids = {fn body, let body}
    LetRec,   // name, params; kids = {fn body, let body}
    Fun,      // params; kids = {body}
    RecFun,   // name, params; kids = {body}
    Seq,      // kids = {first, second}
    Par,      // kids = {left, right}
    ListLit,  // kids = elements
    Cons,     // kids = {head, tail}
    NoneLit,
    SomeE,    // kids = {payload}
    Match,    // kids = {scrutinee, left arm, right arm}; arms[0] left, arms[1] right
    Spawn,
    Join,
    NewLock,
    Acquire,
    Release,
  };
  // Shape of a match arm; left arms are Inl/None/Nil, right arms Inr/Some/Cons.
  struct Arm {
    enum class Tag { Inl, Inr, None, Some, Nil, Cons };
    Tag tag = Tag::Inl;
    Pattern first;   // payload (or head for Cons)
    Pattern second;  // tail for Cons
  };

  Form form = Form::Core;
  Kind core_kind = Kind::Unit;
  std::int64_t num = 0;
  SourcePos pos;
  std::string name;
  std::vector<Pattern> params;
  std::vector<Arm> arms;
  std::vector<SurfaceNode> kids;
};

struct SurfaceProgram {
  std::string source;
  SurfaceNode root;
};

// Parses and scope-checks. Throws ParseError or ScopeError.
SurfaceProgram parse(std::string_view text);

// Rewrites every derived form into core syntax.
Expr desugar(const SurfaceProgram& program);

// parse + desugar.
Expr parse_core(std::string_view text);

// Names resolvable without a binder (stdlib values).
bool is_stdlib_name(std::string_view name);

// True when the tree uses only core constructors (and is hence a desugar output).
bool is_core_only(const SurfaceNode& node);

}  // namespace probsched
