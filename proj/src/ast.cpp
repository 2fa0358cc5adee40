#include "pgfi/ast.hpp"

#include <functional>

namespace pgfi {

EventPtr Event::eq(Symbol v, unsigned long k) {
  auto e = std::make_shared<Event>();
  e->kind = Kind::Eq;
  e->var = std::move(v);
  e->bound = k;
  return e;
}

EventPtr Event::lt(Symbol v, unsigned long k) {
  auto e = std::make_shared<Event>();
  e->kind = Kind::Lt;
  e->var = std::move(v);
  e->bound = k;
  return e;
}

EventPtr Event::parity_odd(Symbol v) {
  auto e = std::make_shared<Event>();
  e->kind = Kind::ParityOdd;
  e->var = std::move(v);
  return e;
}

EventPtr Event::parity_even(Symbol v) {
  auto e = std::make_shared<Event>();
  e->kind = Kind::ParityEven;
  e->var = std::move(v);
  return e;
}

EventPtr Event::negation(EventPtr inner) {
  auto e = std::make_shared<Event>();
  e->kind = Kind::Not;
  e->child = std::move(inner);
  return e;
}

EventPtr Event::conjunction(EventPtr a, EventPtr b) {
  auto e = std::make_shared<Event>();
  e->kind = Kind::And;
  e->left = std::move(a);
  e->right = std::move(b);
  return e;
}

EventPtr Event::always() { return std::make_shared<Event>(); }

void Event::collect_vars(SymbolSet& out) const {
  switch (kind) {
    case Kind::Eq:
    case Kind::Lt:
    case Kind::ParityOdd:
    case Kind::ParityEven:
      out.insert(var);
      break;
    case Kind::Not:
      child->collect_vars(out);
      break;
    case Kind::And:
      left->collect_vars(out);
      right->collect_vars(out);
      break;
    case Kind::True:
      break;
  }
}

std::string Event::str() const {
  switch (kind) {
    case Kind::Eq:
      return var.name + " = " + std::to_string(bound);
    case Kind::Lt:
      return var.name + " < " + std::to_string(bound);
    case Kind::ParityOdd:
      return var.name + " % 2 = 1";
    case Kind::ParityEven:
      return var.name + " % 2 = 0";
    case Kind::Not:
      return "not (" + child->str() + ")";
    case Kind::And:
      return "(" + left->str() + ") and (" + right->str() + ")";
    case Kind::True:
      return "true";
  }
  return "";
}

bool Event::eval(
    const std::function<unsigned long(const Symbol&)>& value) const {
  switch (kind) {
    case Kind::Eq:
      return value(var) == bound;
    case Kind::Lt:
      return value(var) < bound;
    case Kind::ParityOdd:
      return value(var) % 2 == 1;
    case Kind::ParityEven:
      return value(var) % 2 == 0;
    case Kind::Not:
      return !child->eval(value);
    case Kind::And:
      return left->eval(value) && right->eval(value);
    case Kind::True:
      return true;
  }
  return true;
}

Dist Dist::bernoulli(Expr p) {
  Dist d;
  d.kind = Kind::Bernoulli;
  d.param = std::move(p);
  return d;
}
Dist Dist::geometric(Expr p) {
  Dist d;
  d.kind = Kind::Geometric;
  d.param = std::move(p);
  return d;
}
Dist Dist::poisson(Expr rate) {
  Dist d;
  d.kind = Kind::Poisson;
  d.param = std::move(rate);
  return d;
}
Dist Dist::binomial(unsigned long n, Expr p) {
  Dist d;
  d.kind = Kind::Binomial;
  d.n = n;
  d.param = std::move(p);
  return d;
}
Dist Dist::uniform_int(unsigned long a, unsigned long b) {
  Dist d;
  d.kind = Kind::UniformInt;
  d.lo = a;
  d.hi = b;
  return d;
}
Dist Dist::dirac(unsigned long k) {
  Dist d;
  d.kind = Kind::Dirac;
  d.point = k;
  return d;
}

std::string Dist::str() const {
  switch (kind) {
    case Kind::Bernoulli:
      return "bernoulli(" + param.to_string() + ")";
    case Kind::Geometric:
      return "geometric(" + param.to_string() + ")";
    case Kind::Poisson:
      return "poisson(" + param.to_string() + ")";
    case Kind::Binomial:
      return "binomial(" + std::to_string(n) + ", " + param.to_string() + ")";
    case Kind::UniformInt:
      return "uniform(" + std::to_string(lo) + ", " + std::to_string(hi) + ")";
    case Kind::Dirac:
      return "dirac(" + std::to_string(point) + ")";
  }
  return "";
}

namespace {

void add_var(std::vector<Symbol>& order, const Symbol& s) {
  for (const auto& v : order)
    if (v.name == s.name) return;
  order.push_back(s);
}

void add_event_vars(std::vector<Symbol>& order, const Event& e) {
  SymbolSet set;
  e.collect_vars(set);
  // SymbolSet is name-ordered; first-occurrence order inside one event is
  // immaterial, only cross-statement order is.
  for (const auto& s : set) add_var(order, s);
}

void scan_program(const Program& p, std::vector<Symbol>& vars,
                  std::vector<Symbol>& params);

void scan_stmt(const Stmt& s, std::vector<Symbol>& vars,
               std::vector<Symbol>& params) {
  auto add_params_from = [&](const Expr& e) {
    for (const auto& sym : e.symbols())
      if (sym.kind == SymbolKind::Parameter) add_var(params, sym);
  };
  switch (s.kind) {
    case Stmt::Kind::Skip:
      break;
    case Stmt::Kind::AssignConst:
    case Stmt::Kind::Increment:
      add_var(vars, s.var);
      break;
    case Stmt::Kind::AddVar:
      add_var(vars, s.var);
      add_var(vars, s.source);
      break;
    case Stmt::Kind::Sample:
    case Stmt::Kind::SampleAdd:
      add_var(vars, s.var);
      add_params_from(s.dist.param);
      break;
    case Stmt::Kind::Choice:
      add_params_from(s.prob);
      scan_program(*s.left, vars, params);
      scan_program(*s.right, vars, params);
      break;
    case Stmt::Kind::IfElse:
      add_event_vars(vars, *s.guard);
      scan_program(*s.left, vars, params);
      scan_program(*s.right, vars, params);
      break;
    case Stmt::Kind::While:
      add_event_vars(vars, *s.guard);
      if (s.invariant) scan_program(*s.invariant, vars, params);
      scan_program(*s.right, vars, params);
      break;
    case Stmt::Kind::Observe:
      add_event_vars(vars, *s.guard);
      break;
  }
}

void scan_program(const Program& p, std::vector<Symbol>& vars,
                  std::vector<Symbol>& params) {
  for (const auto& s : p.stmts) scan_stmt(s, vars, params);
}

}  // namespace

std::vector<Symbol> collect_variables(const Program& p) {
  std::vector<Symbol> vars, params;
  scan_program(p, vars, params);
  return vars;
}

std::vector<Symbol> collect_parameters(const Program& p) {
  std::vector<Symbol> vars, params;
  scan_program(p, vars, params);
  return params;
}

bool contains_observe(const Program& p) {
  for (const auto& s : p.stmts) {
    switch (s.kind) {
      case Stmt::Kind::Observe:
        return true;
      case Stmt::Kind::Choice:
      case Stmt::Kind::IfElse:
        if (contains_observe(*s.left) || contains_observe(*s.right))
          return true;
        break;
      case Stmt::Kind::While:
        if (contains_observe(*s.right)) return true;
        if (s.invariant && contains_observe(*s.invariant)) return true;
        break;
      default:
        break;
    }
  }
  return false;
}

bool contains_while(const Program& p) {
  for (const auto& s : p.stmts) {
    switch (s.kind) {
      case Stmt::Kind::While:
        return true;
      case Stmt::Kind::Choice:
      case Stmt::Kind::IfElse:
        if (contains_while(*s.left) || contains_while(*s.right)) return true;
        break;
      default:
        break;
    }
  }
  return false;
}

}  // namespace pgfi
