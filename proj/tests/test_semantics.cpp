#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gen.hpp"
#include "pgfi/parse.hpp"
#include "pgfi/pgf.hpp"
#include "pgfi/query.hpp"

using namespace pgfi;

namespace {

const Symbol c = program_var("c");
const Symbol w = program_var("w");
const Symbol x = program_var("x");
const Symbol z = program_var("z");

Expr I(long v) { return Expr::from_int(v); }
Expr C() { return Expr::var(c); }
Expr W() { return Expr::var(w); }

Pgf unit(std::vector<Symbol> vars) { return dirac_origin(std::move(vars)); }

}  // namespace

TEST_CASE("dist_pgf closed forms") {
  Expr pois6 = dist_pgf(Dist::poisson(I(6)), c);
  CHECK(pois6.equals(Expr::exp(I(6).mul(C()).sub(I(6)))));
  // Coefficients match the Poisson pmf e^-6 6^n / n! up to n = 8.
  Int power = 1;
  for (unsigned n = 0; n <= 8; ++n) {
    Expr expected =
        Expr::constant(Rat(power) / factorial(n)).mul(Expr::exp(I(-6)));
    CHECK(pois6.taylor_coeff(c, n).equals(expected));
    power *= 6;
  }

  Expr geom = dist_pgf(Dist::geometric(Expr::constant(Rat(1, 2))), c);
  CHECK(geom.to_string() == "1/(2 - c)");

  Symbol p = parameter("p");
  Expr bern = dist_pgf(Dist::bernoulli(Expr::var(p)), x);
  CHECK(bern.equals(I(1).sub(Expr::var(p)).add(Expr::var(p).mul(Expr::var(x)))));

  Expr binom = dist_pgf(Dist::binomial(3, Expr::constant(Rat(1, 2))), c);
  for (unsigned n = 0; n <= 3; ++n)
    CHECK(binom.taylor_coeff(c, n)
              .equals(Expr::constant(binomial_coeff(3, n) / Rat(8))));

  Expr unif = dist_pgf(Dist::uniform_int(1, 4), c);
  CHECK(unif.taylor_coeff(c, 0).is_zero());
  CHECK(unif.taylor_coeff(c, 3).equals(Expr::constant(Rat(1, 4))));

  CHECK(dist_pgf(Dist::dirac(5), c).to_string() == "c^5");
}

TEST_CASE("filter_event") {
  // Fig. 1 intermediate: branch mixture of two Poisson laws.
  Expr mix = Expr::constant(Rat(5, 7))
                 .mul(Expr::exp(I(6).mul(C()).sub(I(6))))
                 .add(Expr::constant(Rat(2, 7))
                          .mul(W())
                          .mul(Expr::exp(I(2).mul(C()).sub(I(2)))));
  Pgf f{mix, {w, c}};
  Pgf hit = filter_event(f, *Event::eq(c, 5));
  Expr expected = C().pow(5).mul(
      Expr::constant(Rat(324, 7)).mul(Expr::exp(I(-6)))
          .add(Expr::constant(Rat(8, 105)).mul(W()).mul(Expr::exp(I(-2)))));
  CHECK(hit.expr.equals(expected));

  Pgf geom{I(1).div(I(2).sub(C())), {c}};
  Pgf odd = filter_event(geom, *Event::parity_odd(c));
  CHECK(odd.expr.equals(C().div(I(4).sub(C().mul(C())))));
  CHECK(odd.expr.to_string() == "c/(4 - c^2)");

  CHECK(filter_event(f, *Event::always()).expr.equals(f.expr));

  Pgf lt = filter_event(geom, *Event::lt(c, 2));
  CHECK(lt.expr.equals(Expr::constant(Rat(1, 2))
                           .add(Expr::constant(Rat(1, 4)).mul(C()))));
  CHECK(filter_event(geom, *Event::lt(c, 0)).expr.is_zero());
}

TEST_CASE("transform_stmt table") {
  Stmt inc;
  inc.kind = Stmt::Kind::Increment;
  inc.var = c;
  inc.value = 1;
  CHECK(transform_stmt(inc, unit({c})).expr.equals(C()));

  Stmt sample;
  sample.kind = Stmt::Kind::Sample;
  sample.var = c;
  sample.dist = Dist::poisson(I(6));
  CHECK(transform_stmt(sample, unit({c}))
            .expr.equals(Expr::exp(I(6).mul(C()).sub(I(6)))));

  // Fig. 1 first line: {w:=0} [5/7] {w:=1}.
  Program p = parse_program("{ w := 0 } [5/7] { w := 1 }");
  Pgf out = transform_program(p, unit({w}));
  CHECK(out.expr.equals(Expr::constant(Rat(5, 7))
                            .add(Expr::constant(Rat(2, 7)).mul(W()))));

  Stmt assign;
  assign.kind = Stmt::Kind::AssignConst;
  assign.var = c;
  assign.value = 2;
  Pgf geo{I(1).div(I(2).sub(C())), {c}};
  CHECK(transform_stmt(assign, geo).expr.equals(C().mul(C())));

  Stmt addvar;
  addvar.kind = Stmt::Kind::AddVar;
  addvar.var = c;
  addvar.source = w;
  Pgf two{W().mul(W()), {w, c}};  // Dirac at (w=2, c=0)
  CHECK(transform_stmt(addvar, two).expr.equals(W().mul(W()).mul(C()).mul(C())));

  // While without a handler is refused.
  Stmt loop;
  loop.kind = Stmt::Kind::While;
  loop.guard = Event::eq(x, 1);
  loop.right = std::make_shared<Program>();
  CHECK_THROWS_AS(transform_stmt(loop, unit({x})), Error);
}

TEST_CASE("transform_program on the paper programs") {
  Program fig1head = parse_program(
      "{ w := 0 } [5/7] { w := 1 };"
      "if (w = 0) { c := poisson(6) } else { c := poisson(2) }");
  Pgf out = transform_program(fig1head, unit({w, c}));
  Expr expected = Expr::constant(Rat(5, 7))
                      .mul(Expr::exp(I(6).mul(C()).sub(I(6))))
                      .add(Expr::constant(Rat(2, 7))
                               .mul(W())
                               .mul(Expr::exp(I(2).mul(C()).sub(I(2)))));
  CHECK(out.expr.equals(expected));

  Program skipOnly = parse_program("skip; skip");
  Pgf f{I(1).div(I(2).sub(C())), {c}};
  CHECK(transform_program(skipOnly, f).expr.equals(f.expr));
}

TEST_CASE("observe on an impossible event yields the zero PGF") {
  Program p = parse_program("c := 0; observe(c = 5)");
  Pgf out = transform_program(p, unit({c}));
  CHECK(out.expr.is_zero());
  CHECK_THROWS_AS(normalize(out), Error);
}

TEST_CASE("property: loop-free transformer is linear") {
  gen::Gen g(31);
  std::vector<Symbol> vars = {program_var("a"), program_var("b")};
  for (int i = 0; i < 120; ++i) {
    Program p = g.program(vars, 1, 1 + g.pick(3), true);
    Pgf f = g.pgf(vars);
    Pgf h = g.pgf(vars);
    Rat a(1 + g.pick(3), 1 + g.pick(3));
    Rat b(1 + g.pick(3), 1 + g.pick(3));
    Pgf mixIn{f.expr.mul(Expr::constant(a)).add(h.expr.mul(Expr::constant(b))),
              vars};
    Expr lhs = transform_program(p, mixIn).expr;
    Expr rhs = transform_program(p, f).expr.mul(Expr::constant(a)).add(
        transform_program(p, h).expr.mul(Expr::constant(b)));
    CHECK(lhs.equals(rhs));
  }
}

TEST_CASE("property: observe-free programs preserve mass") {
  gen::Gen g(37);
  std::vector<Symbol> vars = {program_var("a"), program_var("b")};
  for (int i = 0; i < 120; ++i) {
    Program p = g.program(vars, 1, 1 + g.pick(3), false);
    Pgf f = g.pgf(vars);
    Expr in = total_mass(f);
    Expr out = total_mass(transform_program(p, f));
    CHECK(out.equals(in));
  }
}

TEST_CASE("property: observe only removes mass") {
  gen::Gen g(41);
  std::vector<Symbol> vars = {program_var("a"), program_var("b")};
  for (int i = 0; i < 120; ++i) {
    Program p = g.program(vars, 1, 1 + g.pick(3), true);
    Pgf f = g.pgf(vars);
    Expr in = total_mass(f);
    Expr out = total_mass(transform_program(p, f));
    Expr leaked = in.sub(out);
    CHECK((leaked.is_zero() || certified_sign(leaked) >= 0));
  }
}

TEST_CASE("property: filter partition, idempotence, commutation") {
  gen::Gen g(43);
  std::vector<Symbol> vars = {program_var("a"), program_var("b")};
  for (int i = 0; i < 120; ++i) {
    Pgf f = g.pgf(vars);
    EventPtr e1 = g.event(vars, 1);
    EventPtr e2 = g.event(vars, 1);
    Pgf hit = filter_event(f, *e1);
    Pgf miss = filter_event(f, *Event::negation(e1));
    CHECK(hit.expr.add(miss.expr).equals(f.expr));
    CHECK(filter_event(hit, *e1).expr.equals(hit.expr));
    Expr ab = filter_event(filter_event(f, *e1), *e2).expr;
    Expr ba = filter_event(filter_event(f, *e2), *e1).expr;
    CHECK(ab.equals(ba));
  }
}

TEST_CASE("property: untouched variables commute with marginalization") {
  gen::Gen g(47);
  std::vector<Symbol> pvars = {program_var("a"), program_var("b")};
  std::vector<Symbol> all = {program_var("a"), program_var("b"), z};
  for (int i = 0; i < 120; ++i) {
    Program p = g.program(pvars, 1, 1 + g.pick(3), true);
    Pgf f = g.pgf(all);
    Expr marginalFirst =
        transform_program(p, Pgf{f.expr.substitute(z, Expr::one()), all}).expr;
    Expr marginalAfter =
        transform_program(p, f).expr.substitute(z, Expr::one());
    CHECK(marginalAfter.equals(marginalFirst));
  }
}
