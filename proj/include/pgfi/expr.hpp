#pragma once

// Expr: exact symbolic scalar — a canonical rational function over Q in
// program variables, parameters and markers, extended with exponential
// atoms exp(P) for polynomial P. Immutable value type; all operations are
// pure and total up to the documented errors.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pgfi/poly.hpp"

namespace pgfi {

class Expr {
 public:
  Expr() : num_(Poly::zero()), den_(Poly::one()) {}

  static Expr zero() { return Expr(); }
  static Expr one() { return from_int(1); }
  static Expr from_int(long v) { return constant(Rat(v)); }
  static Expr constant(const Rat& c) {
    return Expr(Poly::constant(c), Poly::one(), true);
  }
  static Expr var(const Symbol& s) {
    return Expr(Poly::variable(s), Poly::one(), true);
  }
  // exp(arg); arg must be a polynomial free of exponentials.
  static Expr exp(const Expr& arg);
  // Builds n/d with full canonicalization.
  static Expr fraction(Poly n, Poly d);

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_rational(Rat* out = nullptr) const {
    Rat n;
    if (!den_.is_one() || !num_.is_constant(&n)) return false;
    if (out) *out = n;
    return true;
  }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  Expr add(const Expr& o) const;
  Expr sub(const Expr& o) const;
  Expr mul(const Expr& o) const;
  Expr div(const Expr& o) const;  // throws DivisionByZero
  Expr neg() const;
  Expr pow(long k) const;  // negative k requires a nonzero base

  Expr operator+(const Expr& o) const { return add(o); }
  Expr operator-(const Expr& o) const { return sub(o); }
  Expr operator*(const Expr& o) const { return mul(o); }
  Expr operator/(const Expr& o) const { return div(o); }
  Expr operator-() const { return neg(); }

  // Replaces every occurrence of v, including inside exp arguments; the
  // replacement must stay polynomial wherever it lands in an exp argument.
  Expr substitute(const Symbol& v, const Expr& replacement) const;
  Expr differentiate(const Symbol& v) const;
  // Coefficient of v^k in the Taylor expansion at v = 0 (k-fold
  // differentiation); requires the denominator nonzero at v = 0.
  Expr taylor_coeff(const Symbol& v, unsigned k) const;
  // [coeff 0, ..., coeff upto], sharing one derivative chain.
  std::vector<Expr> taylor_coeffs(const Symbol& v, unsigned upto) const;

  bool equals(const Expr& o) const;
  bool depends_on(const Symbol& v) const {
    return num_.depends_on(v) || den_.depends_on(v);
  }
  SymbolSet symbols() const {
    SymbolSet s;
    num_.collect_symbols(s);
    den_.collect_symbols(s);
    return s;
  }

  // Stable infix rendering; order_hint fixes the display order of variables
  // inside monomials (unlisted symbols follow in name order).
  std::string to_string(const std::vector<Symbol>* order_hint = nullptr) const;

  // Parses the rendering grammar: + - * / ^, integers, exp(...), idents.
  // The resolver maps identifiers to symbols (and is how callers pin kinds).
  using SymbolResolver = std::function<Symbol(const std::string&)>;
  static Expr parse(const std::string& text, const SymbolResolver& resolver);

 private:
  Expr(Poly n, Poly d, bool already_canonical);

  Poly num_;
  Poly den_;
};

Rat factorial(unsigned n);
Rat binomial_coeff(unsigned long n, unsigned long k);

}  // namespace pgfi
