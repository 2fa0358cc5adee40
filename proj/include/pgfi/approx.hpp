#pragma once

// Certified decimal evaluation. Everything is exact rational interval
// arithmetic; exponentials are evaluated by Taylor series with an explicit
// remainder bound after halving the argument into [-1/2, 1/2]. The printed
// digits are certified: the enclosing interval rounds to a unique string
// before anything is emitted.

#include <map>
#include <string>

#include "pgfi/expr.hpp"

namespace pgfi {

using Assignment = std::map<Symbol, Rat, SymbolNameLess>;

// Decimal string with `digits` significant digits, round-to-nearest.
// Errors: MissingAssignment if a symbol is left free, EvaluationPole if the
// denominator vanishes at the assignment.
std::string approx_decimal(const Expr& e, const Assignment& assignment,
                           unsigned digits);

// Certified sign of a closed expression (no free symbols): -1, 0 or +1.
int certified_sign(const Expr& e);

}  // namespace pgfi
