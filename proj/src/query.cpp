#include "pgfi/query.hpp"

namespace pgfi {

namespace {

Expr at_all_ones(const Expr& e, const std::vector<Symbol>& vars) {
  Expr out = e;
  for (const auto& v : vars) {
    try {
      out = out.substitute(v, Expr::one());
    } catch (const Error& err) {
      if (err.code() == ErrorCode::DivisionByZero)
        throw Error(ErrorCode::EvaluationPole,
                    "PGF has a pole at " + v.name + " = 1");
      throw;
    }
  }
  return out;
}

}  // namespace

QueryResult make_result(Expr exact, unsigned digits) {
  QueryResult r;
  r.digits = digits;
  r.decimal = exact.symbols().empty()
                  ? std::make_optional(approx_decimal(exact, {}, digits))
                  : std::nullopt;
  r.exact = std::move(exact);
  return r;
}

Expr total_mass(const Pgf& f) { return at_all_ones(f.expr, f.vars); }

Pgf normalize(const Pgf& f) {
  Expr mass = total_mass(f);
  if (mass.is_zero())
    throw Error(ErrorCode::ZeroMassConditioning,
                "conditioning on an impossible observation (total mass 0)");
  if (mass.is_one()) return f;
  return Pgf{f.expr.div(mass), f.vars};
}

QueryResult posterior_prob(const Pgf& f, const Event& g, unsigned digits) {
  Pgf post = normalize(f);
  Pgf hit = filter_event(post, g);
  return make_result(total_mass(hit), digits);
}

QueryResult moment(const Pgf& f, const Symbol& v, int order, unsigned digits) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("moment: order must be 1 or 2");
  Expr d1 = f.expr.differentiate(v);
  Expr mean = at_all_ones(d1, f.vars);
  if (order == 1) return make_result(mean, digits);
  Expr d2 = d1.differentiate(v);
  Expr m2 = at_all_ones(d2, f.vars);
  // Var X = F''(1) + F'(1) - F'(1)^2.
  return make_result(m2.add(mean).sub(mean.mul(mean)), digits);
}

Pgf marginal(const Pgf& f, const std::vector<Symbol>& keep) {
  auto kept = [&](const Symbol& s) {
    for (const auto& k : keep)
      if (k.name == s.name) return true;
    return false;
  };
  Pgf out{f.expr, {}};
  for (const auto& v : f.vars) {
    if (kept(v)) {
      out.vars.push_back(v);
    } else {
      out.expr = at_all_ones(out.expr, {v});
    }
  }
  return out;
}

std::vector<Expr> coefficients(const Pgf& f, const Symbol& v, unsigned upto) {
  return f.expr.taylor_coeffs(v, upto);
}

}  // namespace pgfi
