#pragma once

// Sparse multivariate polynomials over Q, extended with exponential atoms.
//
// Two layers:
//   SymPoly — polynomial in plain symbols; also serves as the argument of an
//             exponential atom (exp arguments are always exp-free).
//   Poly    — polynomial whose terms are  coeff * monomial * exp(arg); the
//             exponential law exp(P)*exp(Q) = exp(P+Q) is enforced
//             structurally because each term carries at most one exp
//             argument and multiplication adds arguments.
//
// Rational-function canonicalization (gcd over opaque atoms, exponent
// shifting, content normalization) lives in poly.cpp / expr.cpp.

#include <gmpxx.h>

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pgfi/errors.hpp"
#include "pgfi/symbol.hpp"

namespace pgfi {

using Int = mpz_class;
using Rat = mpq_class;

// ---------------------------------------------------------------------------
// Monomial: product of symbol^exponent, exponents >= 1, sorted by name.

class Monomial {
 public:
  using Factor = std::pair<Symbol, unsigned>;

  Monomial() = default;
  static Monomial var(const Symbol& s, unsigned e = 1) {
    Monomial m;
    if (e > 0) m.factors_.emplace_back(s, e);
    return m;
  }

  bool is_one() const { return factors_.empty(); }
  unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [s, e] : factors_) d += e;
    return d;
  }
  unsigned exponent_of(const Symbol& s) const {
    for (const auto& [t, e] : factors_)
      if (t.name == s.name) return e;
    return 0;
  }
  const std::vector<Factor>& factors() const { return factors_; }

  Monomial times(const Monomial& o) const;
  // Lowers the exponent of v by one; v must occur.
  Monomial lowered(const Symbol& v) const;
  // Erases v entirely (used when substituting for v).
  Monomial without(const Symbol& v) const;

  // Graded order, then lexicographic on the (name, exponent) factor list.
  int compare(const Monomial& o) const;
  bool operator<(const Monomial& o) const { return compare(o) < 0; }
  bool operator==(const Monomial& o) const { return compare(o) == 0; }

  void collect_symbols(SymbolSet& out) const {
    for (const auto& [s, e] : factors_) out.insert(s);
  }

 private:
  std::vector<Factor> factors_;
};

// ---------------------------------------------------------------------------
// SymPoly: exp-free polynomial over symbols with rational coefficients.

class SymPoly {
 public:
  SymPoly() = default;
  static SymPoly constant(Rat c) {
    c.canonicalize();  // two-argument mpq_class construction skips this
    SymPoly p;
    if (c != 0) p.terms_[Monomial()] = c;
    return p;
  }
  static SymPoly variable(const Symbol& s) {
    SymPoly p;
    p.terms_[Monomial::var(s)] = 1;
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant(Rat* out = nullptr) const {
    if (terms_.empty()) {
      if (out) *out = 0;
      return true;
    }
    if (terms_.size() == 1 && terms_.begin()->first.is_one()) {
      if (out) *out = terms_.begin()->second;
      return true;
    }
    return false;
  }

  const std::map<Monomial, Rat>& terms() const { return terms_; }
  Rat coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rat(0) : it->second;
  }

  SymPoly plus(const SymPoly& o) const;
  SymPoly minus(const SymPoly& o) const;
  SymPoly negated() const;
  SymPoly times(const SymPoly& o) const;
  SymPoly scaled(const Rat& c) const;
  SymPoly derivative(const Symbol& v) const;
  SymPoly substituted(const Symbol& v, const SymPoly& replacement) const;
  bool depends_on(const Symbol& v) const;

  int compare(const SymPoly& o) const;
  bool operator<(const SymPoly& o) const { return compare(o) < 0; }
  bool operator==(const SymPoly& o) const { return compare(o) == 0; }

  void collect_symbols(SymbolSet& out) const {
    for (const auto& [m, c] : terms_) m.collect_symbols(out);
  }

  void add_term(const Monomial& m, const Rat& c);

 private:
  std::map<Monomial, Rat> terms_;
};

// ---------------------------------------------------------------------------
// Poly: terms are coeff * monomial * exp(arg); arg == zero poly means no
// exponential factor.

struct TermKey {
  Monomial mono;
  SymPoly exparg;

  int compare(const TermKey& o) const {
    int c = mono.compare(o.mono);
    if (c != 0) return c;
    return exparg.compare(o.exparg);
  }
  bool operator<(const TermKey& o) const { return compare(o) < 0; }
};

class Poly {
 public:
  Poly() = default;
  static Poly zero() { return Poly(); }
  static Poly one() { return constant(1); }
  static Poly constant(const Rat& c) {
    Poly p;
    if (c != 0) p.terms_[TermKey{}] = c;
    return p;
  }
  static Poly variable(const Symbol& s) {
    Poly p;
    p.terms_[TermKey{Monomial::var(s), SymPoly()}] = 1;
    return p;
  }
  static Poly from_sym(const SymPoly& sp) {
    Poly p;
    for (const auto& [m, c] : sp.terms()) p.terms_[TermKey{m, SymPoly()}] = c;
    return p;
  }
  // exp(arg) as a polynomial; exp(0) collapses to 1.
  static Poly exp_term(const SymPoly& arg) {
    Poly p;
    p.terms_[TermKey{Monomial(), arg}] = 1;
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant(Rat* out = nullptr) const {
    if (terms_.empty()) {
      if (out) *out = 0;
      return true;
    }
    if (terms_.size() == 1) {
      const auto& [k, c] = *terms_.begin();
      if (k.mono.is_one() && k.exparg.is_zero()) {
        if (out) *out = c;
        return true;
      }
    }
    return false;
  }
  bool is_one() const {
    Rat c;
    return is_constant(&c) && c == 1;
  }
  bool is_exp_free() const {
    for (const auto& [k, c] : terms_)
      if (!k.exparg.is_zero()) return false;
    return true;
  }
  std::optional<SymPoly> as_sym_poly() const {
    SymPoly out;
    for (const auto& [k, c] : terms_) {
      if (!k.exparg.is_zero()) return std::nullopt;
      out.add_term(k.mono, c);
    }
    return out;
  }

  const std::map<TermKey, Rat>& terms() const { return terms_; }

  Poly plus(const Poly& o) const;
  Poly minus(const Poly& o) const;
  Poly negated() const;
  Poly times(const Poly& o) const;
  Poly scaled(const Rat& c) const;
  Poly pow(unsigned k) const;
  Poly derivative(const Symbol& v) const;
  // Substitutes v := 0 (drops v-carrying monomials, evaluates exp args).
  Poly at_zero(const Symbol& v) const;
  bool depends_on(const Symbol& v) const;
  bool depends_on_in_exparg(const Symbol& v) const;

  // Coefficient-wise minimum of all exp arguments (absent monomial = 0).
  // The canonical-form shift for denominators; zero when any term is
  // exp-free in every monomial direction.
  SymPoly common_exp_part() const;
  // Subtracts q from every term's exp argument (divides by exp(q)).
  Poly exp_shifted(const SymPoly& q) const;

  bool operator==(const Poly& o) const;

  void collect_symbols(SymbolSet& out) const {
    for (const auto& [k, c] : terms_) {
      k.mono.collect_symbols(out);
      k.exparg.collect_symbols(out);
    }
  }

  void add_term(const TermKey& k, const Rat& c);

 private:
  std::map<TermKey, Rat> terms_;
};

// Reduces the fraction n/d: exponent shift, gcd over opaque atoms, and
// content/sign normalization of the denominator. Requires d != 0.
void reduce_fraction(Poly& n, Poly& d);

}  // namespace pgfi
