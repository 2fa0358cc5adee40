#pragma once

// Independent truncated interpreter used to cross-validate the exact engine.
// Distributions over concrete states with exact symbolic masses; sampling
// truncation and loop caps route the discarded mass into an explicit
// residual, observe failures into a separate rejected pool, so that
//   entries + residual + rejected == initial mass
// holds as a canonical equality after every statement.

#include <map>

#include "pgfi/pgf.hpp"

namespace pgfi {

using Valuation = std::vector<unsigned long>;  // aligned with StateMap::vars

struct StateMap {
  std::vector<Symbol> vars;
  std::map<Valuation, Expr> entries;
  Expr residual = Expr::zero();
  Expr rejected = Expr::zero();

  Expr entry_mass() const;
  Expr total() const;  // entries + residual + rejected
};

StateMap dirac_state(std::vector<Symbol> vars, Valuation v);

struct EnumerateOptions {
  unsigned long truncate = 32;   // sampling support cap N
  unsigned long unroll_cap = 64;  // loop iteration cap K
  bool check_conservation = true;
};

// Runs the program on the finite map. Throws CapExceeded if either cap is 0;
// throws logic_error if conservation checking is on and a step leaks mass.
StateMap enumerate_program(const Program& p, StateMap input,
                           const EnumerateOptions& opts);

// Probability mass P(D = n), exact.
Expr dist_mass(const Dist& d, unsigned long n);
// Largest support point, or nullopt for infinite support.
std::optional<unsigned long> dist_support_max(const Dist& d);

struct Mismatch {
  Valuation val;
  Expr exact_coeff;
  Expr oracle_mass;
};

struct ComparisonReport {
  std::vector<Mismatch> mismatches;
  bool ok() const { return mismatches.empty(); }
};

// Compares every multivariate Taylor coefficient of f with coordinates all
// <= upto against the oracle masses (absent entry = 0). The caller passes
// the unnormalized filtered PGF so conditioning is treated identically.
ComparisonReport compare(const Pgf& f, const StateMap& m, unsigned long upto);

}  // namespace pgfi
