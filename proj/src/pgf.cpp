#include "pgfi/pgf.hpp"

namespace pgfi {

Pgf dirac_origin(std::vector<Symbol> vars) {
  return Pgf{Expr::one(), std::move(vars)};
}

Expr dist_pgf(const Dist& d, const Symbol& v) {
  Expr x = Expr::var(v);
  switch (d.kind) {
    case Dist::Kind::Bernoulli:
      // 1 - p + p v
      return Expr::one().sub(d.param).add(d.param.mul(x));
    case Dist::Kind::Geometric:
      // p / (1 - (1-p) v), support {0,1,...}
      return d.param.div(
          Expr::one().sub(Expr::one().sub(d.param).mul(x)));
    case Dist::Kind::Poisson:
      // exp(rate*(v - 1))
      return Expr::exp(d.param.mul(x.sub(Expr::one())));
    case Dist::Kind::Binomial:
      return Expr::one()
          .sub(d.param)
          .add(d.param.mul(x))
          .pow(static_cast<long>(d.n));
    case Dist::Kind::UniformInt: {
      Expr sum = Expr::zero();
      for (unsigned long k = d.lo; k <= d.hi; ++k)
        sum = sum.add(x.pow(static_cast<long>(k)));
      return sum.div(Expr::from_int(static_cast<long>(d.hi - d.lo + 1)));
    }
    case Dist::Kind::Dirac:
      return x.pow(static_cast<long>(d.point));
  }
  return Expr::zero();
}

Pgf filter_event(const Pgf& f, const Event& g) {
  switch (g.kind) {
    case Event::Kind::True:
      return f;
    case Event::Kind::Eq: {
      Expr coeff = f.expr.taylor_coeff(g.var, static_cast<unsigned>(g.bound));
      Expr vk = Expr::var(g.var).pow(static_cast<long>(g.bound));
      return Pgf{vk.mul(coeff), f.vars};
    }
    case Event::Kind::Lt: {
      Expr sum = Expr::zero();
      for (unsigned long j = 0; j < g.bound; ++j) {
        Expr coeff = f.expr.taylor_coeff(g.var, static_cast<unsigned>(j));
        sum = sum.add(Expr::var(g.var).pow(static_cast<long>(j)).mul(coeff));
      }
      return Pgf{sum, f.vars};
    }
    case Event::Kind::ParityOdd:
    case Event::Kind::ParityEven: {
      // Roots-of-unity filter: (F(v) -/+ F(-v)) / 2.
      Expr mirrored =
          f.expr.substitute(g.var, Expr::var(g.var).neg());
      Expr sum = g.kind == Event::Kind::ParityOdd ? f.expr.sub(mirrored)
                                                  : f.expr.add(mirrored);
      return Pgf{sum.div(Expr::from_int(2)), f.vars};
    }
    case Event::Kind::Not: {
      Pgf pos = filter_event(f, *g.child);
      return Pgf{f.expr.sub(pos.expr), f.vars};
    }
    case Event::Kind::And:
      return filter_event(filter_event(f, *g.left), *g.right);
  }
  return f;
}

namespace {

EventPtr negated(const EventPtr& g) { return Event::negation(g); }

}  // namespace

Pgf transform_stmt(const Stmt& s, const Pgf& f, const LoopHandler& loops) {
  switch (s.kind) {
    case Stmt::Kind::Skip:
      return f;
    case Stmt::Kind::AssignConst: {
      Expr marg = f.expr.substitute(s.var, Expr::one());
      Expr vk = Expr::var(s.var).pow(static_cast<long>(s.value));
      return Pgf{vk.mul(marg), f.vars};
    }
    case Stmt::Kind::Increment: {
      Expr vk = Expr::var(s.var).pow(static_cast<long>(s.value));
      return Pgf{vk.mul(f.expr), f.vars};
    }
    case Stmt::Kind::AddVar: {
      // v := v + w shifts w's exponent onto v: F[w -> w*v].
      Expr wv = Expr::var(s.source).mul(Expr::var(s.var));
      return Pgf{f.expr.substitute(s.source, wv), f.vars};
    }
    case Stmt::Kind::Sample: {
      Expr marg = f.expr.substitute(s.var, Expr::one());
      return Pgf{dist_pgf(s.dist, s.var).mul(marg), f.vars};
    }
    case Stmt::Kind::SampleAdd:
      return Pgf{dist_pgf(s.dist, s.var).mul(f.expr), f.vars};
    case Stmt::Kind::Choice: {
      Pgf l = transform_program(*s.left, f, loops);
      Pgf r = transform_program(*s.right, f, loops);
      Expr q = Expr::one().sub(s.prob);
      return Pgf{s.prob.mul(l.expr).add(q.mul(r.expr)), f.vars};
    }
    case Stmt::Kind::IfElse: {
      Pgf thenIn = filter_event(f, *s.guard);
      Pgf elseIn = filter_event(f, *negated(s.guard));
      Pgf t = transform_program(*s.left, thenIn, loops);
      Pgf e = transform_program(*s.right, elseIn, loops);
      return Pgf{t.expr.add(e.expr), f.vars};
    }
    case Stmt::Kind::Observe:
      // Unnormalized conditioning; normalization is a query-time act.
      return filter_event(f, *s.guard);
    case Stmt::Kind::While:
      if (!loops)
        throw Error(ErrorCode::UnsupportedConstruct,
                    s.pos.str() + ": while is not allowed here");
      return loops(s, f);
  }
  return f;
}

Pgf transform_program(const Program& p, Pgf f, const LoopHandler& loops) {
  for (const auto& s : p.stmts) f = transform_stmt(s, f, loops);
  return f;
}

}  // namespace pgfi
