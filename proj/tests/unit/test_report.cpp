#include <doctest.h>

#include "probsched/report/report.hpp"

using namespace probsched;

TEST_CASE("rationals round-trip through the report encoding") {
  for (const Rational& r : {Rational(1, 16), Rational(0), Rational(1), Rational(mpz_class("2328306436538696282"), 7)}) {
    json j = rational_json(r);
    CHECK(j["rational"].is_string());
    CHECK(j["decimal"].is_string());
    CHECK(rational_from_json(json::parse(j.dump())) == r);
  }
  CHECK(rational_json(Rational(3, 4))["decimal"] == "0.75");
  CHECK_THROWS_AS(rational_from_json(json{{"decimal", "0.5"}}), std::invalid_argument);
}

TEST_CASE("exit codes follow the bound field") {
  Report r("adversary");
  CHECK(exit_code(r.doc()) == 0);
  r["bound"] = json{{"holds", true}};
  CHECK(exit_code(r.doc()) == 0);
  r["bound"]["holds"] = false;
  CHECK(exit_code(r.doc()) == 1);
  Report cmp("erase-check");
  cmp["agree"] = true;
  CHECK(exit_code(cmp.doc()) == 0);
  cmp["agree"] = false;
  CHECK(exit_code(cmp.doc()) == 1);
  CHECK(r.doc()["schema"] == kReportSchema);
}

TEST_CASE("text lines") {
  Report r("efp");
  r.value_line("value", Rational(3, 4));
  CHECK(r.text() == "value: 3/4 (0.75)\n");
}
