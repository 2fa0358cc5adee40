#pragma once

#include <string>

#include "pgfi/ast.hpp"

namespace pgfi {

// Canonical pretty-printer; parse(render(p)) reproduces p structurally.
std::string render_program(const Program& p, int indent = 0);
std::string render_stmt(const Stmt& s, int indent = 0);

}  // namespace pgfi
