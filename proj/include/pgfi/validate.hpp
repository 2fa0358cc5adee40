#pragma once

#include <set>
#include <string>
#include <vector>

#include "pgfi/ast.hpp"

namespace pgfi {

struct Violation {
  enum class Kind {
    ObserveInsideLoop,
    MissingInvariant,
    LoopInsideInvariant,
    ProbabilityOutOfRange,
    UndeclaredParameter
  };
  Kind kind;
  SourcePos pos;
  std::string detail;

  std::string str() const;
};

using ValidationReport = std::vector<Violation>;

// Empty report means the program is accepted. declared_parameters holds the
// parameter names the caller declared (CLI --param flags).
ValidationReport validate(const Program& p,
                          const std::set<std::string>& declared_parameters = {});

}  // namespace pgfi
