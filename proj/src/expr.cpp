#include "pgfi/expr.hpp"

#include <cassert>
#include <cctype>
#include <sstream>

namespace pgfi {

Expr::Expr(Poly n, Poly d, bool already_canonical)
    : num_(std::move(n)), den_(std::move(d)) {
  if (!already_canonical) reduce_fraction(num_, den_);
}

Expr Expr::fraction(Poly n, Poly d) {
  return Expr(std::move(n), std::move(d), false);
}

Expr Expr::exp(const Expr& arg) {
  if (!arg.den_.is_one())
    throw Error(ErrorCode::NonPolynomialExpArgument,
                "exp argument must be a polynomial: " + arg.to_string());
  auto sym = arg.num_.as_sym_poly();
  if (!sym)
    throw Error(ErrorCode::NonPolynomialExpArgument,
                "exp argument must be free of exponentials: " +
                    arg.to_string());
  if (sym->is_zero()) return one();
  return Expr(Poly::exp_term(*sym), Poly::one(), true);
}

Expr Expr::add(const Expr& o) const {
  if (den_.is_one() && o.den_.is_one())
    return Expr(num_.plus(o.num_), Poly::one(), true);
  return fraction(num_.times(o.den_).plus(o.num_.times(den_)),
                  den_.times(o.den_));
}

Expr Expr::sub(const Expr& o) const {
  if (den_.is_one() && o.den_.is_one())
    return Expr(num_.minus(o.num_), Poly::one(), true);
  return fraction(num_.times(o.den_).minus(o.num_.times(den_)),
                  den_.times(o.den_));
}

Expr Expr::neg() const { return Expr(num_.negated(), den_, true); }

Expr Expr::mul(const Expr& o) const {
  if (is_zero() || o.is_zero()) return zero();
  if (den_.is_one() && o.den_.is_one()) {
    Rat c;
    if (o.num_.is_constant(&c)) return Expr(num_.scaled(c), Poly::one(), true);
    if (num_.is_constant(&c)) return Expr(o.num_.scaled(c), Poly::one(), true);
    return Expr(num_.times(o.num_), Poly::one(), true);
  }
  return fraction(num_.times(o.num_), den_.times(o.den_));
}

Expr Expr::div(const Expr& o) const {
  if (o.is_zero())
    throw Error(ErrorCode::DivisionByZero, "division by zero expression");
  return fraction(num_.times(o.den_), den_.times(o.num_));
}

Expr Expr::pow(long k) const {
  if (k == 0) return one();
  bool invert = k < 0;
  unsigned long e = invert ? static_cast<unsigned long>(-k)
                           : static_cast<unsigned long>(k);
  if (invert && is_zero())
    throw Error(ErrorCode::DivisionByZero, "zero to a negative power");
  Poly n = num_.pow(static_cast<unsigned>(e));
  Poly d = den_.pow(static_cast<unsigned>(e));
  if (invert) std::swap(n, d);
  return fraction(std::move(n), std::move(d));
}

namespace {

// Accumulates a sum of fractions without canonicalizing intermediates.
struct FractionSum {
  Poly num = Poly::zero();
  Poly den = Poly::one();

  void add(const Poly& n, const Poly& d) {
    if (n.is_zero()) return;
    if (d.is_one()) {
      num = num.plus(n.times(den));
    } else {
      num = num.times(d).plus(n.times(den));
      den = den.times(d);
    }
  }
};

// Substitutes v in a single polynomial; the result is a fraction because the
// replacement may be one.
void subst_poly(const Poly& p, const Symbol& v, const Expr& r,
                const SymPoly* rsym, FractionSum& out) {
  for (const auto& [key, coeff] : p.terms()) {
    unsigned e = key.mono.exponent_of(v);
    SymPoly arg = key.exparg;
    if (arg.depends_on(v)) {
      assert(rsym != nullptr);
      arg = arg.substituted(v, *rsym);
    }
    Poly base;
    base.add_term(TermKey{key.mono.without(v), arg}, coeff);
    if (e == 0) {
      out.add(base, Poly::one());
      continue;
    }
    Expr re = r.pow(static_cast<long>(e));
    out.add(base.times(re.num()), re.den());
  }
}

}  // namespace

Expr Expr::substitute(const Symbol& v, const Expr& r) const {
  if (!depends_on(v)) return *this;

  std::optional<SymPoly> rsym;
  if (num_.depends_on_in_exparg(v) || den_.depends_on_in_exparg(v)) {
    if (!r.den_.is_one())
      throw Error(ErrorCode::NonPolynomialExpArgument,
                  "substituting a non-polynomial into an exp argument");
    rsym = r.num_.as_sym_poly();
    if (!rsym)
      throw Error(ErrorCode::NonPolynomialExpArgument,
                  "substituting an exponential into an exp argument");
  }

  FractionSum n, d;
  subst_poly(num_, v, r, rsym ? &*rsym : nullptr, n);
  subst_poly(den_, v, r, rsym ? &*rsym : nullptr, d);
  if (d.num.is_zero())
    throw Error(ErrorCode::DivisionByZero,
                "denominator vanishes under substitution");
  return fraction(n.num.times(d.den), n.den.times(d.num));
}

Expr Expr::differentiate(const Symbol& v) const {
  Poly dn = num_.derivative(v);
  Poly dd = den_.derivative(v);
  if (dd.is_zero()) return fraction(std::move(dn), den_);
  return fraction(dn.times(den_).minus(num_.times(dd)), den_.times(den_));
}

namespace {

// Slices p by the exponent of v: result[k] collects the terms with v^k,
// v removed. Valid only when v does not occur in exp arguments.
std::vector<Poly> slice_by_var(const Poly& p, const Symbol& v) {
  std::vector<Poly> out(1);
  for (const auto& [key, coeff] : p.terms()) {
    unsigned e = key.mono.exponent_of(v);
    if (e >= out.size()) out.resize(e + 1);
    out[e].add_term(TermKey{key.mono.without(v), key.exparg}, coeff);
  }
  return out;
}

}  // namespace

Expr Expr::taylor_coeff(const Symbol& v, unsigned k) const {
  if (den_.at_zero(v).is_zero())
    throw Error(ErrorCode::PoleAtOrigin,
                "denominator vanishes at " + v.name + " = 0");
  if (!num_.depends_on_in_exparg(v) && !den_.depends_on_in_exparg(v))
    return taylor_coeffs(v, k).back();
  Expr g = *this;
  for (unsigned i = 0; i < k; ++i) g = g.differentiate(v);
  g = g.substitute(v, zero());
  return g.mul(constant(1 / factorial(k)));
}

std::vector<Expr> Expr::taylor_coeffs(const Symbol& v, unsigned upto) const {
  if (den_.at_zero(v).is_zero())
    throw Error(ErrorCode::PoleAtOrigin,
                "denominator vanishes at " + v.name + " = 0");
  std::vector<Expr> out;
  out.reserve(upto + 1);

  if (!num_.depends_on_in_exparg(v) && !den_.depends_on_in_exparg(v)) {
    // v occurs only polynomially: expand N/D by the series recurrence
    //   c_k = (N_k - sum_{j>=1} D_j c_{k-j}) / D_0.
    std::vector<Poly> numSlices = slice_by_var(num_, v);
    std::vector<Poly> denSlices = slice_by_var(den_, v);
    Expr d0(denSlices[0], Poly::one(), false);
    for (unsigned k = 0; k <= upto; ++k) {
      Expr acc = k < numSlices.size() ? Expr(numSlices[k], Poly::one(), false)
                                      : zero();
      for (unsigned j = 1; j < denSlices.size() && j <= k; ++j) {
        if (denSlices[j].is_zero()) continue;
        acc = acc.sub(
            Expr(denSlices[j], Poly::one(), false).mul(out[k - j]));
      }
      out.push_back(acc.div(d0));
    }
    return out;
  }

  // exp arguments carry v: fall back to the derivative chain.
  Expr g = *this;
  for (unsigned k = 0;; ++k) {
    out.push_back(g.substitute(v, zero()).mul(constant(1 / factorial(k))));
    if (k == upto) break;
    g = g.differentiate(v);
  }
  return out;
}

bool Expr::equals(const Expr& o) const {
  if (num_ == o.num_ && den_ == o.den_) return true;
  return num_.times(o.den_) == o.num_.times(den_);
}

Rat factorial(unsigned n) {
  Int f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return Rat(f);
}

Rat binomial_coeff(unsigned long n, unsigned long k) {
  if (k > n) return Rat(0);
  Int num = 1, den = 1;
  for (unsigned long i = 0; i < k; ++i) {
    num *= Int(n - i);
    den *= Int(i + 1);
  }
  return Rat(num) / Rat(den);
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

struct SymbolOrder {
  const std::vector<Symbol>* hint;
  bool operator()(const Symbol& a, const Symbol& b) const {
    if (hint) {
      auto pos = [&](const Symbol& s) {
        for (std::size_t i = 0; i < hint->size(); ++i)
          if ((*hint)[i].name == s.name) return i;
        return hint->size();
      };
      std::size_t pa = pos(a), pb = pos(b);
      if (pa != pb) return pa < pb;
    }
    return a.name < b.name;
  }
};

std::string render_rat(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

std::string render_mono(const Monomial& m, const SymbolOrder& ord) {
  std::vector<Monomial::Factor> fs = m.factors();
  std::stable_sort(fs.begin(), fs.end(),
                   [&](const auto& a, const auto& b) {
                     return ord(a.first, b.first);
                   });
  std::string out;
  for (const auto& [s, e] : fs) {
    if (!out.empty()) out += "*";
    out += s.name;
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

std::string render_sympoly(const SymPoly& p, const SymbolOrder& ord);

// One term, without its sign; coefficient magnitude |c|.
std::string render_term(const Rat& c, const Monomial& m, const SymPoly& arg,
                        const SymbolOrder& ord) {
  std::string factors = render_mono(m, ord);
  if (!arg.is_zero()) {
    if (!factors.empty()) factors += "*";
    factors += "exp(" + render_sympoly(arg, ord) + ")";
  }
  Rat a = abs(c);
  if (factors.empty()) return render_rat(a);
  if (a == 1) return factors;
  std::string cs = render_rat(a);
  if (a.get_den() != 1) cs = "(" + cs + ")";
  return cs + "*" + factors;
}

// Exp arguments render descending by degree (6*c - 6); sums of terms in the
// main polynomial render ascending (series convention).
std::string render_sympoly(const SymPoly& p, const SymbolOrder& ord) {
  if (p.is_zero()) return "0";
  std::string out;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    bool neg = c < 0;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    out += render_term(c, m, SymPoly(), ord);
  }
  return out;
}

std::string render_poly(const Poly& p, const SymbolOrder& ord) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [k, c] : p.terms()) {
    bool neg = c < 0;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    out += render_term(c, k.mono, k.exparg, ord);
  }
  return out;
}

bool needs_parens_as_denominator(const Poly& p) {
  if (p.terms().size() != 1) return true;
  const auto& [k, c] = *p.terms().begin();
  if (c != 1) return true;
  unsigned pieces = k.mono.factors().size() + (k.exparg.is_zero() ? 0 : 1);
  if (pieces != 1) return true;
  if (!k.mono.factors().empty() && k.mono.factors()[0].second > 1)
    return false;  // single power like c^2 binds tighter than '/'
  return false;
}

}  // namespace

std::string Expr::to_string(const std::vector<Symbol>* order_hint) const {
  SymbolOrder ord{order_hint};
  std::string n = render_poly(num_, ord);
  if (den_.is_one()) return n;
  if (num_.terms().size() > 1) n = "(" + n + ")";
  std::string d = render_poly(den_, ord);
  if (needs_parens_as_denominator(den_)) d = "(" + d + ")";
  return n + "/" + d;
}

// ---------------------------------------------------------------------------
// Parsing: expr := term (('+'|'-') term)*
//          term := factor (('*'|'/') factor)*
//          factor := ('-')* base ('^' ('-')? integer)?
//          base := integer | ident | 'exp' '(' expr ')' | '(' expr ')'

namespace {

struct ExprParser {
  const std::string& s;
  std::size_t pos = 0;
  const Expr::SymbolResolver& resolve;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(1, static_cast<int>(pos) + 1, "expression: " + msg);
  }

  Expr parse_expr() {
    Expr acc = parse_term();
    while (true) {
      skip_ws();
      if (eat('+'))
        acc = acc.add(parse_term());
      else if (eat('-'))
        acc = acc.sub(parse_term());
      else
        return acc;
    }
  }

  Expr parse_term() {
    Expr acc = parse_factor();
    while (true) {
      skip_ws();
      if (eat('*'))
        acc = acc.mul(parse_factor());
      else if (eat('/'))
        acc = acc.div(parse_factor());
      else
        return acc;
    }
  }

  Expr parse_factor() {
    skip_ws();
    if (eat('-')) return parse_factor().neg();
    Expr base = parse_base();
    skip_ws();
    if (eat('^')) {
      skip_ws();
      bool negexp = eat('-');
      long k = parse_integer();
      return base.pow(negexp ? -k : k);
    }
    return base;
  }

  long parse_integer() {
    skip_ws();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      fail("expected integer");
    long v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      v = v * 10 + (s[pos++] - '0');
    return v;
  }

  Expr parse_base() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of expression");
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      while (pos < s.size() &&
             std::isdigit(static_cast<unsigned char>(s[pos])))
        ++pos;
      return Expr::constant(Rat(s.substr(start, pos - start)));
    }
    if (c == '(') {
      ++pos;
      Expr e = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      while (pos < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos])) ||
              s[pos] == '_'))
        ++pos;
      std::string name = s.substr(start, pos - start);
      if (name == "exp") {
        if (!eat('(')) fail("expected '(' after exp");
        Expr arg = parse_expr();
        if (!eat(')')) fail("expected ')'");
        return Expr::exp(arg);
      }
      return Expr::var(resolve(name));
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Expr Expr::parse(const std::string& text, const SymbolResolver& resolver) {
  ExprParser p{text, 0, resolver};
  Expr e = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return e;
}

}  // namespace pgfi
