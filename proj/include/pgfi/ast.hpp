#pragma once

// Abstract syntax of the probabilistic language. Immutable after parsing;
// sub-programs are shared through shared_ptr so statements stay copyable.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pgfi/expr.hpp"

namespace pgfi {

struct SourcePos {
  int line = 0;
  int col = 0;
  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(col);
  }
};

// ---------------------------------------------------------------------------
// Events: predicates over program variables.

struct Event;
using EventPtr = std::shared_ptr<const Event>;

struct Event {
  enum class Kind { Eq, Lt, ParityOdd, ParityEven, Not, And, True };

  Kind kind = Kind::True;
  Symbol var;             // Eq, Lt, ParityOdd, ParityEven
  unsigned long bound = 0;  // Eq, Lt
  EventPtr child;         // Not
  EventPtr left, right;   // And

  static EventPtr eq(Symbol v, unsigned long k);
  static EventPtr lt(Symbol v, unsigned long k);
  static EventPtr parity_odd(Symbol v);
  static EventPtr parity_even(Symbol v);
  static EventPtr negation(EventPtr e);
  static EventPtr conjunction(EventPtr a, EventPtr b);
  static EventPtr always();

  void collect_vars(SymbolSet& out) const;
  std::string str() const;
  // Truth on a concrete valuation, via a lookup function.
  bool eval(const std::function<unsigned long(const Symbol&)>& value) const;
};

// ---------------------------------------------------------------------------
// Distributions.

struct Dist {
  enum class Kind { Bernoulli, Geometric, Poisson, Binomial, UniformInt, Dirac };

  Kind kind = Kind::Dirac;
  Expr param;             // p or rate (Bernoulli, Geometric, Poisson, Binomial)
  unsigned long n = 0;    // Binomial trials
  unsigned long lo = 0, hi = 0;  // UniformInt bounds
  unsigned long point = 0;       // Dirac

  static Dist bernoulli(Expr p);
  static Dist geometric(Expr p);
  static Dist poisson(Expr rate);
  static Dist binomial(unsigned long n, Expr p);
  static Dist uniform_int(unsigned long a, unsigned long b);
  static Dist dirac(unsigned long k);

  std::string str() const;
};

// ---------------------------------------------------------------------------
// Statements and programs.

struct Program;
using ProgramPtr = std::shared_ptr<const Program>;

struct Stmt {
  enum class Kind {
    Skip,
    AssignConst,   // v := k
    Increment,     // v := v + k
    AddVar,        // v := v + w
    Sample,        // v := D
    SampleAdd,     // v := v + D
    Choice,        // { L } [p] { R }
    IfElse,
    While,
    Observe
  };

  Kind kind = Kind::Skip;
  SourcePos pos;

  Symbol var;          // target of assignments/samples
  Symbol source;       // AddVar right-hand variable
  unsigned long value = 0;  // AssignConst / Increment constant
  Dist dist;           // Sample / SampleAdd
  Expr prob;           // Choice probability
  EventPtr guard;      // IfElse / While / Observe
  ProgramPtr left;     // Choice left, IfElse then
  ProgramPtr right;    // Choice right, IfElse else, While body
  ProgramPtr invariant;  // While annotation; null when missing
};

struct Program {
  std::vector<Stmt> stmts;
  // Program variables in first-occurrence order and parameters referenced in
  // probability expressions; filled by the parser on the top-level program.
  std::vector<Symbol> variables;
  std::vector<Symbol> parameters;
};

// First-occurrence scan (targets, guard variables, AddVar sources).
std::vector<Symbol> collect_variables(const Program& p);
std::vector<Symbol> collect_parameters(const Program& p);
bool contains_observe(const Program& p);
bool contains_while(const Program& p);

}  // namespace pgfi
