#pragma once

#include <string>
#include <vector>

#include "pgfi/ast.hpp"

namespace pgfi {

// Parses a complete program; throws ParseError with line/column and the
// expected-token set. The returned Program has variables/parameters filled.
Program parse_program(const std::string& source);

// Parses a guard in isolation (query strings); identifiers must name one of
// the given program variables.
EventPtr parse_guard_text(const std::string& text,
                          const std::vector<Symbol>& vars);

// Parses a distribution literal in isolation (prior flags).
Dist parse_dist_text(const std::string& text);

}  // namespace pgfi
