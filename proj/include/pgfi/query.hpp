#pragma once

// Posterior queries over a final Pgf. Queries normalize lazily; raw mass is
// available through total_mass.

#include <optional>

#include "pgfi/approx.hpp"
#include "pgfi/pgf.hpp"

namespace pgfi {

struct QueryResult {
  Expr exact;
  std::optional<std::string> decimal;  // present iff exact is closed
  unsigned digits = 10;
};

QueryResult make_result(Expr exact, unsigned digits);

// Substitutes 1 for every program variable.
Expr total_mass(const Pgf& f);

// Divides by the total mass; errors with ZeroMassConditioning on mass 0.
Pgf normalize(const Pgf& f);

QueryResult posterior_prob(const Pgf& f, const Event& g, unsigned digits);

// order 1: mean; order 2: variance (F'' + F' - F'^2 at the all-ones point).
QueryResult moment(const Pgf& f, const Symbol& v, int order, unsigned digits);

Pgf marginal(const Pgf& f, const std::vector<Symbol>& keep);

std::vector<Expr> coefficients(const Pgf& f, const Symbol& v, unsigned upto);

}  // namespace pgfi
