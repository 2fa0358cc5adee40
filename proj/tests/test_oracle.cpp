#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "pgfi/oracle.hpp"
#include "pgfi/parse.hpp"
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

StateMap origin_state(const Program& p) {
  return dirac_state(p.variables, Valuation(p.variables.size(), 0));
}

}  // namespace

TEST_CASE("pmf values") {
  Dist g = Dist::geometric(Expr::constant(Rat(1, 2)));
  CHECK(dist_mass(g, 0).equals(Expr::constant(Rat(1, 2))));
  CHECK(dist_mass(g, 3).equals(Expr::constant(Rat(1, 16))));

  Dist pois = Dist::poisson(Expr::from_int(2));
  Expr expected = Expr::exp(Expr::from_int(-2))
                      .mul(Expr::constant(Rat(32) / factorial(5)));
  CHECK(dist_mass(pois, 5).equals(expected));

  Dist unif = Dist::uniform_int(1, 4);
  CHECK(dist_mass(unif, 0).is_zero());
  CHECK(dist_mass(unif, 2).equals(Expr::constant(Rat(1, 4))));

  CHECK(dist_support_max(Dist::dirac(7)) == 7ul);
  CHECK_FALSE(dist_support_max(pois).has_value());
}

TEST_CASE("enumerate the odd-geometric program") {
  Program p = parse_program(fixture("fig2.pp"));
  EnumerateOptions opts;
  opts.truncate = 10;
  opts.unroll_cap = 20;
  StateMap out = enumerate_program(p, origin_state(p), opts);

  // Surviving states: x = 0, c odd, mass 2^-(n+1).
  std::size_t ci = p.variables[0].name == "c" ? 0 : 1;
  std::size_t xi = 1 - ci;
  for (unsigned long n = 1; n <= 9; n += 2) {
    Valuation v(2, 0);
    v[ci] = n;
    v[xi] = 0;
    REQUIRE(out.entries.count(v) == 1);
    CHECK(out.entries.at(v).equals(
        Expr::constant(Rat(1, Int(1) << (n + 1)))));
  }
  // Rejected mass collects the even outcomes; residual is the still-looping
  // tail, at most 2^-20.
  Rat rejected;
  REQUIRE(out.rejected.is_rational(&rejected));
  CHECK(rejected > 0);
  Rat residual;
  REQUIRE(out.residual.is_rational(&residual));
  CHECK(residual <= Rat(1, Int(1) << 20));
  CHECK(residual > 0);
}

TEST_CASE("enumerate a bare assignment") {
  Program p = parse_program("x := 1");
  StateMap out = enumerate_program(p, origin_state(p), {});
  REQUIRE(out.entries.size() == 1);
  CHECK(out.entries.begin()->first == Valuation{1});
  CHECK(out.entries.begin()->second.is_one());
  CHECK(out.residual.is_zero());
  CHECK(out.rejected.is_zero());
}

TEST_CASE("enumerate the telephone operator") {
  Program p = parse_program(fixture("fig1.pp"));
  EnumerateOptions opts;
  opts.truncate = 10;
  StateMap out = enumerate_program(p, origin_state(p), opts);
  // w first, then c in declaration order.
  Valuation weekend{1, 5};
  REQUIRE(out.entries.count(weekend) == 1);
  Expr expected = Expr::constant(Rat(8, 105)).mul(Expr::exp(Expr::from_int(-2)));
  CHECK(out.entries.at(weekend).equals(expected));
}

TEST_CASE("caps of zero are rejected") {
  Program p = parse_program("skip");
  EnumerateOptions opts;
  opts.truncate = 0;
  CHECK_THROWS_AS(enumerate_program(p, origin_state(p), opts), Error);
  try {
    enumerate_program(p, origin_state(p), opts);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapExceeded);
  }
}

TEST_CASE("compare flags the first differing coefficient") {
  Program geom13 = parse_program("c := geometric(1/3)");
  EnumerateOptions opts;
  opts.truncate = 12;
  StateMap m = enumerate_program(geom13, origin_state(geom13), opts);

  Symbol c = program_var("c");
  Pgf wrong{Expr::one().div(Expr::from_int(2).sub(Expr::var(c))), {c}};
  ComparisonReport r = compare(wrong, m, 8);
  REQUIRE_FALSE(r.ok());
  CHECK(r.mismatches.front().val == Valuation{0});
  CHECK(r.mismatches.front().exact_coeff.equals(Expr::constant(Rat(1, 2))));
  CHECK(r.mismatches.front().oracle_mass.equals(Expr::constant(Rat(1, 3))));

  Pgf right{dist_pgf(Dist::geometric(Expr::constant(Rat(1, 3))), c), {c}};
  CHECK(compare(right, m, 8).ok());
}

TEST_CASE("compare on an empty program") {
  Program p = parse_program("skip");
  StateMap m = enumerate_program(p, origin_state(p), {});
  Pgf f = dirac_origin(p.variables);
  CHECK(compare(f, m, 4).ok());
}

TEST_CASE("enumerate is deterministic") {
  Program p = parse_program(fixture("corpus_poisson_and.pp"));
  EnumerateOptions opts;
  opts.truncate = 8;
  StateMap a = enumerate_program(p, origin_state(p), opts);
  StateMap b = enumerate_program(p, origin_state(p), opts);
  REQUIRE(a.entries.size() == b.entries.size());
  auto ita = a.entries.begin();
  auto itb = b.entries.begin();
  for (; ita != a.entries.end(); ++ita, ++itb) {
    CHECK(ita->first == itb->first);
    CHECK(ita->second.equals(itb->second));
  }
  CHECK(a.residual.equals(b.residual));
  CHECK(a.rejected.equals(b.rejected));
}

TEST_CASE("conservation holds per step across the corpus") {
  for (const char* name :
       {"fig1.pp", "fig2.pp", "zero_mass.pp", "corpus_assign_chain.pp",
        "corpus_bernoulli_lt.pp", "corpus_uniform_not.pp",
        "corpus_geom_even.pp", "corpus_sampleadd.pp",
        "corpus_loop_geom23.pp", "corpus_dirac_uniform.pp",
        "corpus_ifelse_parity.pp", "corpus_choice_nested.pp"}) {
    CAPTURE(name);
    Program p = parse_program(fixture(name));
    EnumerateOptions opts;
    opts.truncate = 12;
    opts.check_conservation = true;  // throws logic_error on violation
    StateMap out = enumerate_program(p, origin_state(p), opts);
    CHECK(out.total().equals(Expr::one()));
  }
}
