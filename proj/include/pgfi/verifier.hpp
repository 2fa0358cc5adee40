#pragma once

// Loop-free program equivalence and loop-invariant verification via the
// second-order PGF technique: one generic input whose marker coefficients
// enumerate every Dirac input simultaneously.

#include <optional>
#include <utility>

#include "pgfi/pgf.hpp"

namespace pgfi {

struct SopContext {
  // (program variable, fresh marker) pairs.
  std::vector<std::pair<Symbol, Symbol>> pairs;
};

// Fresh markers for the given variables; marker names avoid the given set.
SopContext make_sop_context(const std::vector<Symbol>& vars,
                            const SymbolSet& avoid);

// Product of 1/(1 - u_i v_i): the coefficient of prod u_i^{n_i} is the Dirac
// input at state (n_1, ..., n_d).
Pgf sop_input(const SopContext& ctx);

using Witness = std::vector<std::pair<Symbol, unsigned long>>;

struct Verdict {
  enum class Condition { None, Unrolling, Exit };

  bool verified = false;
  Condition failed = Condition::None;
  Expr difference;               // canonically nonzero when refuted
  std::optional<Witness> witness;  // Dirac input on which outputs differ

  static Verdict ok() { return Verdict{true, Condition::None, Expr(), {}}; }
};

// Marker-degree budget for witness extraction.
inline constexpr unsigned kWitnessDegreeBound = 8;

// Both programs must be loop- and observe-free.
Verdict check_equivalence(const Program& p1, const Program& p2);

// Verifies While(g, I, body): (i) unrolling identity I == if (g) { body; I },
// (ii) exit condition: the invariant's output puts no mass on guard-true
// states. Requires I and body loop-free, I observe-free.
Verdict check_invariant(const Stmt& loop);

// Thrown by the verifying loop handler when a loop's invariant is refuted.
class InvariantRefutedError : public Error {
 public:
  InvariantRefutedError(SourcePos pos, Verdict verdict)
      : Error(ErrorCode::InvariantRefuted,
              pos.str() + ": loop invariant refuted"),
        pos_(pos),
        verdict_(std::move(verdict)) {}
  const SourcePos& pos() const { return pos_; }
  const Verdict& verdict() const { return verdict_; }

 private:
  SourcePos pos_;
  Verdict verdict_;
};

// Loop handler that verifies each While's invariant and substitutes it.
LoopHandler verifying_loop_handler();
// As above but trusts annotations (used after a separate verification pass).
LoopHandler trusting_loop_handler();

// Transform with invariant verification on every loop.
Pgf run_program(const Program& p, Pgf input);

}  // namespace pgfi
