#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "gen.hpp"
#include "pgfi/oracle.hpp"
#include "pgfi/parse.hpp"
#include "pgfi/query.hpp"
#include "pgfi/verifier.hpp"

using namespace pgfi;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(FIXTURES_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Stmt& first_loop(const Program& p) {
  for (const auto& s : p.stmts)
    if (s.kind == Stmt::Kind::While) return s;
  REQUIRE(false);
  return p.stmts.front();
}

}  // namespace

TEST_CASE("sop_input") {
  Symbol x = program_var("x"), cv = program_var("c");
  SopContext one = make_sop_context({x}, {});
  Pgf f1 = sop_input(one);
  const Symbol& u = one.pairs[0].second;
  Expr expected =
      Expr::one().div(Expr::one().sub(Expr::var(u).mul(Expr::var(x))));
  CHECK(f1.expr.equals(expected));

  SopContext two = make_sop_context({x, cv}, {});
  Pgf f2 = sop_input(two);
  const Symbol& t = two.pairs[1].second;
  Expr e2 = expected.mul(
      Expr::one().div(Expr::one().sub(Expr::var(t).mul(Expr::var(cv)))));
  CHECK(f2.expr.equals(e2));

  CHECK(sop_input(SopContext{}).expr.is_one());
}

TEST_CASE("marker freshness avoids collisions") {
  Symbol weird = program_var("_x");
  SymbolSet avoid;
  avoid.insert(weird);
  SopContext ctx = make_sop_context({program_var("x")}, avoid);
  CHECK(ctx.pairs[0].second.name != "_x");
  CHECK(ctx.pairs[0].second.kind == SymbolKind::SopMarker);
}

TEST_CASE("check_equivalence") {
  Program twoFlips = parse_program(
      "{ c := c + 1 } [1/2] { skip }; { c := c + 1 } [1/2] { skip }");
  Program binom = parse_program("c := c + binomial(2, 1/2)");
  CHECK(check_equivalence(twoFlips, binom).verified);

  Program g12 = parse_program("c := c + geometric(1/2)");
  Program g13 = parse_program("c := c + geometric(1/3)");
  Verdict v = check_equivalence(g12, g13);
  CHECK_FALSE(v.verified);
  REQUIRE(v.witness.has_value());
  REQUIRE(v.witness->size() == 1);
  CHECK(v.witness->at(0).first.name == "c");
  CHECK(v.witness->at(0).second == 0);

  Program s1 = parse_program("skip");
  Program s2 = parse_program("skip");
  CHECK(check_equivalence(s1, s2).verified);

  // Preconditions: loops and observes are refused.
  Program loop = parse_program("while (x = 1) invariant { skip } { x := 0 }");
  CHECK_THROWS_AS(check_equivalence(loop, s1), Error);
  Program obs = parse_program("observe(c = 0)");
  CHECK_THROWS_AS(check_equivalence(obs, s1), Error);
}

TEST_CASE("check_invariant on the paper loop and mutants") {
  Program fig2 = parse_program(fixture("fig2.pp"));
  CHECK(check_invariant(first_loop(fig2)).verified);

  Program geom13 = parse_program(fixture("fig2_inv_geom13.pp"));
  Verdict v13 = check_invariant(first_loop(geom13));
  CHECK_FALSE(v13.verified);
  CHECK(v13.failed == Verdict::Condition::Unrolling);
  CHECK_FALSE(v13.difference.is_zero());

  Program noReset = parse_program(fixture("fig2_inv_no_reset.pp"));
  Verdict vr = check_invariant(first_loop(noReset));
  CHECK_FALSE(vr.verified);

  Program divergent = parse_program(fixture("divergent_skip_inv.pp"));
  Verdict vd = check_invariant(first_loop(divergent));
  CHECK_FALSE(vd.verified);
  CHECK(vd.failed == Verdict::Condition::Exit);
}

TEST_CASE("verified invariant substitutes for the loop") {
  Program fig2 = parse_program(fixture("fig2.pp"));
  Pgf out = run_program(fig2, dirac_origin(fig2.variables));
  Symbol cv = program_var("c");
  Expr expected = Expr::var(cv).div(
      Expr::from_int(4).sub(Expr::var(cv).mul(Expr::var(cv))));
  CHECK(out.expr.equals(expected));

  Program geom13 = parse_program(fixture("fig2_inv_geom13.pp"));
  CHECK_THROWS_AS(run_program(geom13, dirac_origin(geom13.variables)),
                  InvariantRefutedError);
}

TEST_CASE("property: equivalence is reflexive and symmetric") {
  gen::Gen g(53);
  std::vector<Symbol> vars = {program_var("a"), program_var("b")};
  std::vector<Program> corpus;
  for (int i = 0; i < 12; ++i)
    corpus.push_back(g.program(vars, 1, 1 + g.pick(2), false));
  for (const auto& p : corpus) CHECK(check_equivalence(p, p).verified);
  for (int i = 0; i + 1 < static_cast<int>(corpus.size()); ++i) {
    Verdict ab = check_equivalence(corpus[i], corpus[i + 1]);
    Verdict ba = check_equivalence(corpus[i + 1], corpus[i]);
    CHECK(ab.verified == ba.verified);
  }
}

TEST_CASE("property: witnesses are faithful") {
  gen::Gen g(59);
  std::vector<Symbol> vars = {program_var("a"), program_var("b")};
  int refutations = 0;
  for (int i = 0; i < 60 && refutations < 20; ++i) {
    Program p1 = g.program(vars, 1, 1 + g.pick(2), false);
    Program p2 = g.program(vars, 1, 1 + g.pick(2), false);
    Verdict v = check_equivalence(p1, p2);
    if (v.verified || !v.witness) continue;
    ++refutations;
    // Feed the witness as a Dirac input to both programs; outputs differ.
    Expr in = Expr::one();
    for (const auto& [sym, n] : *v.witness)
      in = in.mul(Expr::var(sym).pow(static_cast<long>(n)));
    Pgf dirac{in, vars};
    Expr o1 = transform_program(p1, dirac).expr;
    Expr o2 = transform_program(p2, dirac).expr;
    CHECK_FALSE(o1.equals(o2));
  }
  CHECK(refutations > 0);
}

TEST_CASE("verified loops agree with the unrolling oracle") {
  for (const char* name : {"fig2.pp", "corpus_loop_geom23.pp"}) {
    CAPTURE(name);
    Program p = parse_program(fixture(name));
    Pgf out = run_program(p, dirac_origin(p.variables));
    StateMap in = dirac_state(p.variables, Valuation(p.variables.size(), 0));
    EnumerateOptions opts;
    opts.truncate = 16;
    opts.unroll_cap = 64;
    StateMap m = enumerate_program(p, in, opts);
    ComparisonReport report = compare(out, m, 16);
    CHECK(report.ok());
  }
}
