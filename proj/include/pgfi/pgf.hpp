#pragma once

// Distribution-transformer semantics over probability generating functions.
// A Pgf pairs an expression with the ordered set of program variables it
// ranges over; transforming a statement rewrites the expression exactly.

#include <functional>

#include "pgfi/ast.hpp"

namespace pgfi {

struct Pgf {
  Expr expr;
  std::vector<Symbol> vars;

  bool mentions(const Symbol& v) const {
    for (const auto& s : vars)
      if (s.name == v.name) return true;
    return false;
  }
};

// Point mass at the all-zero state: PGF 1.
Pgf dirac_origin(std::vector<Symbol> vars);

// Closed-form PGF of a distribution in the indeterminate v.
Expr dist_pgf(const Dist& d, const Symbol& v);

// Sub-PGF carrying exactly the mass that satisfies g.
Pgf filter_event(const Pgf& f, const Event& g);

// Loop handler: invoked for While statements; the default transform refuses
// them. The verifier module supplies a handler that substitutes verified
// invariants.
using LoopHandler = std::function<Pgf(const Stmt&, const Pgf&)>;

// Non-loop statement transformer.
Pgf transform_stmt(const Stmt& s, const Pgf& f, const LoopHandler& loops = {});

Pgf transform_program(const Program& p, Pgf f, const LoopHandler& loops = {});

}  // namespace pgfi
