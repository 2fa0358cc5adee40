#include "pgfi/validate.hpp"

namespace pgfi {

std::string Violation::str() const {
  std::string name;
  switch (kind) {
    case Kind::ObserveInsideLoop: name = "ObserveInsideLoop"; break;
    case Kind::MissingInvariant: name = "MissingInvariant"; break;
    case Kind::LoopInsideInvariant: name = "LoopInsideInvariant"; break;
    case Kind::ProbabilityOutOfRange: name = "ProbabilityOutOfRange"; break;
    case Kind::UndeclaredParameter: name = "UndeclaredParameter"; break;
  }
  std::string out = pos.str() + ": " + name;
  if (!detail.empty()) out += ": " + detail;
  return out;
}

namespace {

struct Validator {
  const std::set<std::string>& declared;
  ValidationReport report;

  void check_prob_expr(const Expr& e, const SourcePos& pos,
                       bool must_be_probability, const char* what) {
    for (const auto& s : e.symbols()) {
      if (s.kind == SymbolKind::Parameter && !declared.count(s.name))
        report.push_back({Violation::Kind::UndeclaredParameter, pos,
                          "parameter '" + s.name + "' in " + what});
    }
    Rat v;
    if (e.is_rational(&v)) {
      bool bad = must_be_probability ? (v < 0 || v > 1) : (v < 0);
      if (bad)
        report.push_back({Violation::Kind::ProbabilityOutOfRange, pos,
                          std::string(what) + " is " + e.to_string()});
    }
  }

  void check_dist(const Dist& d, const SourcePos& pos) {
    switch (d.kind) {
      case Dist::Kind::Bernoulli:
      case Dist::Kind::Geometric:
      case Dist::Kind::Binomial:
        check_prob_expr(d.param, pos, true, "distribution probability");
        break;
      case Dist::Kind::Poisson:
        check_prob_expr(d.param, pos, false, "poisson rate");
        break;
      case Dist::Kind::UniformInt:
      case Dist::Kind::Dirac:
        break;
    }
  }

  void walk(const Program& p, bool in_loop, bool in_invariant) {
    for (const auto& s : p.stmts) walk_stmt(s, in_loop, in_invariant);
  }

  void walk_stmt(const Stmt& s, bool in_loop, bool in_invariant) {
    switch (s.kind) {
      case Stmt::Kind::Sample:
      case Stmt::Kind::SampleAdd:
        check_dist(s.dist, s.pos);
        break;
      case Stmt::Kind::Choice:
        check_prob_expr(s.prob, s.pos, true, "choice probability");
        walk(*s.left, in_loop, in_invariant);
        walk(*s.right, in_loop, in_invariant);
        break;
      case Stmt::Kind::IfElse:
        walk(*s.left, in_loop, in_invariant);
        walk(*s.right, in_loop, in_invariant);
        break;
      case Stmt::Kind::While:
        if (in_invariant)
          report.push_back({Violation::Kind::LoopInsideInvariant, s.pos, ""});
        if (!s.invariant)
          report.push_back({Violation::Kind::MissingInvariant, s.pos, ""});
        else
          walk(*s.invariant, true, true);
        walk(*s.right, true, in_invariant);
        break;
      case Stmt::Kind::Observe:
        if (in_loop)
          report.push_back({Violation::Kind::ObserveInsideLoop, s.pos,
                            "observe(" + s.guard->str() + ")"});
        break;
      default:
        break;
    }
  }
};

}  // namespace

ValidationReport validate(const Program& p,
                          const std::set<std::string>& declared_parameters) {
  Validator v{declared_parameters, {}};
  v.walk(p, false, false);
  return std::move(v.report);
}

}  // namespace pgfi
