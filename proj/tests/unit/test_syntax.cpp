#include <doctest.h>

#include "probsched/fixtures/fixtures.hpp"
#include "probsched/syntax/erase.hpp"
#include "probsched/syntax/parser.hpp"
#include "probsched/syntax/pretty.hpp"

using namespace probsched;

namespace {

Expr v(const char* name) { return var(std::string_view(name)); }
Sym s(const char* name) { return intern(name); }

}  // namespace

TEST_CASE("let, sequence and primitives parse to the expected core tree") {
  Expr got = parse_core("let l = ref 0 in l := !l + rand 3; !l");
  Expr want = let_(s("l"), alloc(int_lit(0)),
                   let_(kAnonymous, store(v("l"), binop(BinOp::Add, load(v("l")), rand(int_lit(3)))), load(v("l"))));
  CHECK(equal(got, want));
}

TEST_CASE("labelled rand keeps both arguments") {
  Expr e = parse_core("fun l -> rand l 3");
  REQUIRE(e->kind() == Kind::Rec);
  CHECK(equal(e->child(0), rand_l(v("l"), int_lit(3))));
  CHECK(equal(parse_core("rand 3"), rand(int_lit(3))));
}

TEST_CASE("operator precedence and associativity") {
  CHECK(equal(parse_core("1 + 2 * 3"), binop(BinOp::Add, int_lit(1), binop(BinOp::Mul, int_lit(2), int_lit(3)))));
  CHECK(equal(parse_core("1 - 2 - 3"), binop(BinOp::Sub, binop(BinOp::Sub, int_lit(1), int_lit(2)), int_lit(3))));
  CHECK(equal(parse_core("1 < 2 && true || false"),
              binop(BinOp::Or, binop(BinOp::And, binop(BinOp::Lt, int_lit(1), int_lit(2)), bool_lit(true)),
                    bool_lit(false))));
  CHECK(equal(parse_core("-3"), int_lit(-3)));
}

TEST_CASE("tuples nest to the right and lists become injections") {
  CHECK(equal(parse_core("(1, 2, 3)"), pair(int_lit(1), pair(int_lit(2), int_lit(3)))));
  CHECK(equal(parse_core("[]"), inl(unit_lit())));
  CHECK(equal(parse_core("[7]"), inr(pair(int_lit(7), inl(unit_lit())))));
  CHECK(equal(parse_core("None"), inl(unit_lit())));
  CHECK(equal(parse_core("Some 4"), inr(int_lit(4))));
}

TEST_CASE("array syntax") {
  CHECK(equal(parse_core("(array 2 0).[1]"), arr_load(alloc_n(int_lit(2), int_lit(0)), int_lit(1))));
  Expr st = parse_core("let a = array 2 0 in a.[1] := 5");
  REQUIRE(st->kind() == Kind::App);
  CHECK(equal(st->child(0)->child(0), arr_store(v("a"), int_lit(1), int_lit(5))));
}

TEST_CASE("parallel composition desugars to fork and a join cell") {
  Expr e = parse_core("(1 ||| 2)");
  CHECK(e->closed());
  bool has_fork = false;
  std::vector<Expr> todo{e};
  while (!todo.empty()) {
    Expr x = todo.back();
    todo.pop_back();
    if (x->kind() == Kind::Fork) has_fork = true;
    for (std::size_t i = 0; i < x->arity(); ++i) todo.push_back(x->child(i));
  }
  CHECK(has_fork);
}

TEST_CASE("parse errors carry a position and the expected tokens") {
  try {
    parse("let x = in 3");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.pos().line == 1);
    CHECK(e.pos().column == 9);
    CHECK_FALSE(e.expected().empty());
  }
  try {
    parse("1 +\n  )");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.pos().line == 2);
    CHECK(e.pos().column == 3);
  }
  CHECK_THROWS_AS(parse("(1, 2"), ParseError);
  CHECK_THROWS_AS(parse("1 < 2 < 3"), ParseError);
}

TEST_CASE("unbound names are scope errors") {
  try {
    parse("let x = 1 in y");
    FAIL("no error");
  } catch (const ScopeError& e) {
    CHECK(e.name() == "y");
    CHECK(e.pos().column == 14);
  }
  CHECK_NOTHROW(parse("fun x -> x"));
  // stdlib names resolve without a binder
  CHECK_NOTHROW(parse("list_length [1; 2]"));
  CHECK(is_stdlib_name("list_iter"));
  CHECK_FALSE(is_stdlib_name("nope"));
}

TEST_CASE("comments are skipped") {
  CHECK(equal(parse_core("(* a (* nested *) comment *) 1 // trailing\n + 2"),
              binop(BinOp::Add, int_lit(1), int_lit(2))));
}

TEST_CASE("desugared trees are core only") {
  SurfaceProgram p = parse("let (a, b) = (1, 2) in a + b");
  CHECK_FALSE(is_core_only(p.root));
  CHECK(equal(parse_core("let (a, b) = (1, 2) in a + b"), desugar(p)));
}

TEST_CASE("pretty output parses back to the same tree") {
  const char* programs[] = {
      "let l = ref 0 in l := !l + rand 3; l := !l + rand 3; !l",
      "fun x -> match x with inl a -> a | inr b -> -b end",
      "let a = array 3 (-1) in a.[2] := 4; (a.[2], a.[0])",
      "rec f n = if n <= 0 then 0 else n + f (n - 1)",
      "let t = alloctape 2 in (rand t 2, rand 5)",
      "let l = ref 0 in cas l 0 1 && not (faa l 2 == 3)",
      "1 - (2 - 3) * -(4)",
  };
  for (const char* src : programs) {
    Expr e = parse_core(src);
    INFO(src);
    CHECK(equal(parse_core(pretty(e)), e));
  }
  for (const auto& f : catalogue()) {
    INFO(f.name);
    Expr e = parse_core(f.source);
    CHECK(equal(parse_core(pretty(e)), e));
  }
}

TEST_CASE("erasure removes every tape construct") {
  for (const auto& f : catalogue()) {
    Expr e = parse_core(f.source);
    CHECK(tape_free(erase(e)));
    CHECK(tape_free(e) == !f.uses_tapes);
    if (tape_free(e)) CHECK(equal(erase(e), e));
  }
  Expr e = erase(parse_core("let t = alloctape 3 in rand t 3"));
  CHECK(tape_free(e));
  CHECK(e->closed());
}
