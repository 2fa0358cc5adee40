#pragma once

// Deterministic random generators for property suites: expressions,
// events, loop-free programs and input PGFs.

#include <random>

#include "pgfi/pgf.hpp"

namespace pgfi::gen {

struct Gen {
  std::mt19937_64 rng;

  explicit Gen(unsigned long seed) : rng(seed) {}

  int pick(int n) {
    return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
  }
  unsigned long nat(unsigned long hi) {
    return std::uniform_int_distribution<unsigned long>(0, hi)(rng);
  }
  Rat prob() {
    static const Rat choices[] = {Rat(0),      Rat(1),      Rat(1, 2),
                                  Rat(1, 3),   Rat(2, 3),   Rat(1, 4),
                                  Rat(3, 5),   Rat(5, 7)};
    return choices[pick(8)];
  }
  Rat rat() {
    long n = static_cast<long>(nat(12)) - 6;
    long d = static_cast<long>(nat(5)) + 1;
    Rat r(n, d);
    r.canonicalize();
    return r;
  }

  SymPoly sympoly(const std::vector<Symbol>& vars) {
    SymPoly p;
    int terms = 1 + pick(3);
    for (int i = 0; i < terms; ++i) {
      Monomial m;
      int factors = pick(3);
      for (int j = 0; j < factors; ++j)
        m = m.times(Monomial::var(vars[pick(static_cast<int>(vars.size()))],
                                  1 + static_cast<unsigned>(pick(2))));
      p.add_term(m, rat());
    }
    return p;
  }

  Expr expr(const std::vector<Symbol>& vars, int depth) {
    if (depth == 0) {
      switch (pick(3)) {
        case 0:
          return Expr::constant(rat());
        case 1:
          return Expr::var(vars[pick(static_cast<int>(vars.size()))]);
        default:
          return Expr::exp(Expr::fraction(Poly::from_sym(sympoly(vars)),
                                          Poly::one()));
      }
    }
    Expr a = expr(vars, depth - 1);
    Expr b = expr(vars, depth - 1);
    switch (pick(5)) {
      case 0:
        return a.add(b);
      case 1:
        return a.sub(b);
      case 2:
        return a.mul(b);
      case 3:
        return b.is_zero() ? a : a.div(b);
      default:
        return a.pow(1 + pick(2));
    }
  }

  EventPtr event(const std::vector<Symbol>& vars, int depth) {
    auto v = [&] { return vars[pick(static_cast<int>(vars.size()))]; };
    if (depth > 0 && pick(3) == 0) {
      if (pick(2) == 0) return Event::negation(event(vars, depth - 1));
      return Event::conjunction(event(vars, depth - 1),
                                event(vars, depth - 1));
    }
    switch (pick(5)) {
      case 0:
        return Event::eq(v(), nat(3));
      case 1:
        return Event::lt(v(), 1 + nat(3));
      case 2:
        return Event::parity_odd(v());
      case 3:
        return Event::parity_even(v());
      default:
        return Event::always();
    }
  }

  Dist dist() {
    switch (pick(6)) {
      case 0:
        return Dist::bernoulli(Expr::constant(prob()));
      case 1:
        return Dist::geometric(Expr::constant(Rat(1, 2 + pick(2))));
      case 2:
        return Dist::poisson(Expr::from_int(1 + pick(2)));
      case 3:
        return Dist::binomial(2 + nat(2), Expr::constant(Rat(1, 2)));
      case 4:
        return Dist::uniform_int(nat(1), 2 + nat(2));
      default:
        return Dist::dirac(nat(2));
    }
  }

  Stmt stmt(const std::vector<Symbol>& vars, int depth, bool allow_observe) {
    auto v = [&] { return vars[pick(static_cast<int>(vars.size()))]; };
    Stmt s;
    int kinds = allow_observe ? 9 : 8;
    switch (pick(depth > 0 ? kinds : kinds - 2)) {
      case 0:
        s.kind = Stmt::Kind::Skip;
        break;
      case 1:
        s.kind = Stmt::Kind::AssignConst;
        s.var = v();
        s.value = nat(3);
        break;
      case 2:
        s.kind = Stmt::Kind::Increment;
        s.var = v();
        s.value = nat(2);
        break;
      case 3: {
        s.kind = Stmt::Kind::AddVar;
        s.var = v();
        do {
          s.source = v();
        } while (s.source.name == s.var.name);
        break;
      }
      case 4:
        s.kind = Stmt::Kind::Sample;
        s.var = v();
        s.dist = dist();
        break;
      case 5:
        s.kind = Stmt::Kind::SampleAdd;
        s.var = v();
        s.dist = dist();
        break;
      case 6:
        if (!allow_observe) {
          s.kind = Stmt::Kind::Skip;
          break;
        }
        s.kind = Stmt::Kind::Observe;
        s.guard = event(vars, 1);
        break;
      case 7: {
        s.kind = Stmt::Kind::Choice;
        s.prob = Expr::constant(prob());
        s.left = std::make_shared<Program>(program(vars, depth - 1, 1 + pick(2),
                                                   allow_observe));
        s.right = std::make_shared<Program>(
            program(vars, depth - 1, 1 + pick(2), allow_observe));
        break;
      }
      default: {
        s.kind = Stmt::Kind::IfElse;
        s.guard = event(vars, 1);
        s.left = std::make_shared<Program>(program(vars, depth - 1, 1 + pick(2),
                                                   allow_observe));
        s.right = std::make_shared<Program>(
            program(vars, depth - 1, 1 + pick(2), allow_observe));
        break;
      }
    }
    return s;
  }

  Program program(const std::vector<Symbol>& vars, int depth, int length,
                  bool allow_observe) {
    Program p;
    for (int i = 0; i < length; ++i)
      p.stmts.push_back(stmt(vars, depth, allow_observe));
    p.variables = vars;
    return p;
  }

  // Analytic-at-origin input PGF: mixture of independent products.
  Pgf pgf(const std::vector<Symbol>& vars) {
    auto component = [&] {
      Expr acc = Expr::one();
      for (const auto& v : vars) {
        switch (pick(4)) {
          case 0:
            acc = acc.mul(dist_pgf(Dist::geometric(Expr::constant(
                                       Rat(1, 2 + pick(2)))),
                                   v));
            break;
          case 1:
            acc = acc.mul(dist_pgf(Dist::poisson(Expr::from_int(1 + pick(2))),
                                   v));
            break;
          case 2:
            acc = acc.mul(Expr::var(v).pow(pick(3)));
            break;
          default:
            break;  // leave this variable at Dirac(0)
        }
      }
      return acc;
    };
    Rat a(1 + pick(3), 4);
    Expr mix = Expr::constant(a).mul(component())
                   .add(Expr::constant(1 - a).mul(component()));
    return Pgf{mix, vars};
  }
};

}  // namespace pgfi::gen
