#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "gen.hpp"
#include "pgfi/parse.hpp"
#include "pgfi/printer.hpp"
#include "pgfi/validate.hpp"

using namespace pgfi;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(FIXTURES_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has_violation(const ValidationReport& r, Violation::Kind k) {
  for (const auto& v : r)
    if (v.kind == k) return true;
  return false;
}

}  // namespace

TEST_CASE("parses the telephone-operator program") {
  Program p = parse_program(fixture("fig1.pp"));
  REQUIRE(p.stmts.size() == 3);
  CHECK(p.stmts[0].kind == Stmt::Kind::Choice);
  CHECK(p.stmts[1].kind == Stmt::Kind::IfElse);
  CHECK(p.stmts[2].kind == Stmt::Kind::Observe);
  REQUIRE(p.variables.size() == 2);
  CHECK(p.variables[0].name == "w");
  CHECK(p.variables[1].name == "c");
  CHECK(p.stmts[0].prob.equals(Expr::constant(Rat(5, 7))));
  CHECK(validate(p).empty());
}

TEST_CASE("parses the odd-geometric program") {
  Program p = parse_program(fixture("fig2.pp"));
  REQUIRE(p.stmts.size() == 3);
  CHECK(p.stmts[1].kind == Stmt::Kind::While);
  REQUIRE(p.stmts[1].invariant != nullptr);
  CHECK(p.stmts[1].invariant->stmts.size() == 1);
  CHECK(p.stmts[2].guard->kind == Event::Kind::ParityOdd);
  CHECK(validate(p).empty());
}

TEST_CASE("minimal statements") {
  Program p = parse_program("skip");
  REQUIRE(p.stmts.size() == 1);
  CHECK(p.stmts[0].kind == Stmt::Kind::Skip);
  CHECK(p.variables.empty());
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_program("observe(c ="), ParseError);
  try {
    parse_program("observe(c =");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.col() == 12);
  }
  try {
    parse_program("x := 1;\n while [x]");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_program("x := y + 1"), ParseError);
  CHECK_THROWS_AS(parse_program("x := x + x"), ParseError);
  CHECK_THROWS_AS(parse_program("observe(c % 3 = 1)"), ParseError);
  CHECK_THROWS_AS(parse_program("x := uniform(4, 2)"), ParseError);
  CHECK_THROWS_AS(parse_program("skip extra"), ParseError);
}

TEST_CASE("validator findings") {
  // Missing invariant parses but is reported.
  Program noInv = parse_program("while (x = 1) { x := 0 }");
  CHECK(has_violation(validate(noInv), Violation::Kind::MissingInvariant));

  Program obsLoop = parse_program(fixture("observe_in_loop.pp"));
  CHECK(has_violation(validate(obsLoop), Violation::Kind::ObserveInsideLoop));

  Program loopInv = parse_program(
      "while (x = 1) invariant { while (x = 1) invariant { skip } { skip } } "
      "{ x := 0 }");
  CHECK(has_violation(validate(loopInv), Violation::Kind::LoopInsideInvariant));

  Program badProb = parse_program("{ x := 0 } [3/2] { x := 1 }");
  CHECK(has_violation(validate(badProb),
                      Violation::Kind::ProbabilityOutOfRange));

  Program param = parse_program(fixture("param_choice.pp"));
  CHECK(has_violation(validate(param), Violation::Kind::UndeclaredParameter));
  CHECK(validate(param, {"p"}).empty());
}

TEST_CASE("all fixtures parse") {
  for (const char* name :
       {"fig1.pp", "fig2.pp", "fig2_inv_geom13.pp", "fig2_inv_no_reset.pp",
        "divergent_skip_inv.pp", "zero_mass.pp", "poisson6.pp",
        "corpus_assign_chain.pp", "corpus_bernoulli_lt.pp",
        "corpus_uniform_not.pp", "corpus_geom_even.pp",
        "corpus_poisson_and.pp", "corpus_sampleadd.pp",
        "corpus_loop_geom23.pp", "corpus_dirac_uniform.pp",
        "corpus_ifelse_parity.pp", "corpus_choice_nested.pp"}) {
    CAPTURE(name);
    Program p = parse_program(fixture(name));
    CHECK(validate(p).empty());
  }
}

TEST_CASE("property: parse of render is identity") {
  gen::Gen g(29);
  std::vector<Symbol> vars = {program_var("a"), program_var("b")};
  for (int i = 0; i < 120; ++i) {
    Program p = g.program(vars, 2, 1 + g.pick(4), true);
    std::string text = render_program(p);
    CAPTURE(text);
    Program back = parse_program(text);
    CHECK(render_program(back) == text);
  }
}

TEST_CASE("guard and dist text parsing") {
  std::vector<Symbol> vars = {program_var("w"), program_var("c")};
  EventPtr g = parse_guard_text("w = 0", vars);
  CHECK(g->kind == Event::Kind::Eq);
  EventPtr both = parse_guard_text("not w = 1 and c < 3", vars);
  CHECK(both->kind == Event::Kind::And);
  CHECK_THROWS_AS(parse_guard_text("z = 0", vars), ParseError);

  Dist d = parse_dist_text("poisson(6)");
  CHECK(d.kind == Dist::Kind::Poisson);
  CHECK(d.param.equals(Expr::from_int(6)));
  CHECK_THROWS_AS(parse_dist_text("poisson(6) junk"), ParseError);
}
