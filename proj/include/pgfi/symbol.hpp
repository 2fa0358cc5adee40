#pragma once

#include <set>
#include <string>

namespace pgfi {

// ProgramVar symbols are PGF indeterminates; Parameter symbols stand for
// unknown rational constants and never get coefficients extracted; SopMarker
// symbols index Dirac inputs in second-order PGF checks.
enum class SymbolKind { ProgramVar, Parameter, SopMarker };

struct Symbol {
  std::string name;
  SymbolKind kind = SymbolKind::ProgramVar;

  friend bool operator==(const Symbol& a, const Symbol& b) {
    return a.name == b.name && a.kind == b.kind;
  }
  friend bool operator!=(const Symbol& a, const Symbol& b) { return !(a == b); }
};

inline Symbol program_var(std::string name) {
  return Symbol{std::move(name), SymbolKind::ProgramVar};
}
inline Symbol parameter(std::string name) {
  return Symbol{std::move(name), SymbolKind::Parameter};
}
inline Symbol sop_marker(std::string name) {
  return Symbol{std::move(name), SymbolKind::SopMarker};
}

// Names are unique within one expression regardless of kind, so ordering by
// name alone is total in every context that mixes kinds.
struct SymbolNameLess {
  bool operator()(const Symbol& a, const Symbol& b) const {
    return a.name < b.name;
  }
};

using SymbolSet = std::set<Symbol, SymbolNameLess>;

}  // namespace pgfi
