#include "pgfi/poly.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace pgfi {

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::times(const Monomial& o) const {
  Monomial out;
  auto a = factors_.begin(), ae = factors_.end();
  auto b = o.factors_.begin(), be = o.factors_.end();
  while (a != ae || b != be) {
    if (b == be || (a != ae && a->first.name < b->first.name)) {
      out.factors_.push_back(*a++);
    } else if (a == ae || b->first.name < a->first.name) {
      out.factors_.push_back(*b++);
    } else {
      if (a->first.kind != b->first.kind)
        throw std::logic_error("symbol '" + a->first.name +
                               "' used with two kinds");
      out.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  return out;
}

Monomial Monomial::lowered(const Symbol& v) const {
  Monomial out;
  for (const auto& [s, e] : factors_) {
    if (s.name == v.name) {
      if (e > 1) out.factors_.emplace_back(s, e - 1);
    } else {
      out.factors_.emplace_back(s, e);
    }
  }
  return out;
}

Monomial Monomial::without(const Symbol& v) const {
  Monomial out;
  for (const auto& [s, e] : factors_)
    if (s.name != v.name) out.factors_.emplace_back(s, e);
  return out;
}

int Monomial::compare(const Monomial& o) const {
  unsigned da = total_degree(), db = o.total_degree();
  if (da != db) return da < db ? -1 : 1;
  auto a = factors_.begin(), ae = factors_.end();
  auto b = o.factors_.begin(), be = o.factors_.end();
  while (a != ae && b != be) {
    if (a->first.name != b->first.name)
      return a->first.name < b->first.name ? -1 : 1;
    if (a->second != b->second) return a->second < b->second ? -1 : 1;
    ++a;
    ++b;
  }
  if (a != ae) return 1;
  if (b != be) return -1;
  return 0;
}

// ---------------------------------------------------------------------------
// SymPoly

void SymPoly::add_term(const Monomial& m, const Rat& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

SymPoly SymPoly::plus(const SymPoly& o) const {
  SymPoly out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, c);
  return out;
}

SymPoly SymPoly::minus(const SymPoly& o) const {
  SymPoly out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, -c);
  return out;
}

SymPoly SymPoly::negated() const {
  SymPoly out;
  for (const auto& [m, c] : terms_) out.terms_[m] = -c;
  return out;
}

SymPoly SymPoly::times(const SymPoly& o) const {
  SymPoly out;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) out.add_term(ma.times(mb), ca * cb);
  return out;
}

SymPoly SymPoly::scaled(const Rat& c) const {
  SymPoly out;
  if (c == 0) return out;
  for (const auto& [m, k] : terms_) out.terms_[m] = k * c;
  return out;
}

SymPoly SymPoly::derivative(const Symbol& v) const {
  SymPoly out;
  for (const auto& [m, c] : terms_) {
    unsigned e = m.exponent_of(v);
    if (e > 0) out.add_term(m.lowered(v), c * Rat(e));
  }
  return out;
}

SymPoly SymPoly::substituted(const Symbol& v, const SymPoly& r) const {
  SymPoly out;
  for (const auto& [m, c] : terms_) {
    unsigned e = m.exponent_of(v);
    if (e == 0) {
      out.add_term(m, c);
      continue;
    }
    SymPoly part;
    part.add_term(m.without(v), c);
    for (unsigned i = 0; i < e; ++i) part = part.times(r);
    out = out.plus(part);
  }
  return out;
}

bool SymPoly::depends_on(const Symbol& v) const {
  for (const auto& [m, c] : terms_)
    if (m.exponent_of(v) > 0) return true;
  return false;
}

int SymPoly::compare(const SymPoly& o) const {
  auto a = terms_.begin(), ae = terms_.end();
  auto b = o.terms_.begin(), be = o.terms_.end();
  while (a != ae && b != be) {
    int c = a->first.compare(b->first);
    if (c != 0) return c;
    if (a->second != b->second) return a->second < b->second ? -1 : 1;
    ++a;
    ++b;
  }
  if (a != ae) return 1;
  if (b != be) return -1;
  return 0;
}

// ---------------------------------------------------------------------------
// Poly

void Poly::add_term(const TermKey& k, const Rat& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly Poly::plus(const Poly& o) const {
  Poly out = *this;
  for (const auto& [k, c] : o.terms_) out.add_term(k, c);
  return out;
}

Poly Poly::minus(const Poly& o) const {
  Poly out = *this;
  for (const auto& [k, c] : o.terms_) out.add_term(k, -c);
  return out;
}

Poly Poly::negated() const {
  Poly out;
  for (const auto& [k, c] : terms_) out.terms_[k] = -c;
  return out;
}

Poly Poly::times(const Poly& o) const {
  Poly out;
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_)
      out.add_term(TermKey{ka.mono.times(kb.mono), ka.exparg.plus(kb.exparg)},
                   ca * cb);
  return out;
}

Poly Poly::scaled(const Rat& c) const {
  Poly out;
  if (c == 0) return out;
  for (const auto& [k, r] : terms_) out.terms_[k] = r * c;
  return out;
}

Poly Poly::pow(unsigned k) const {
  Poly acc = Poly::one();
  Poly base = *this;
  while (k > 0) {
    if (k & 1u) acc = acc.times(base);
    k >>= 1u;
    if (k > 0) base = base.times(base);
  }
  return acc;
}

Poly Poly::derivative(const Symbol& v) const {
  Poly out;
  for (const auto& [k, c] : terms_) {
    unsigned e = k.mono.exponent_of(v);
    if (e > 0)
      out.add_term(TermKey{k.mono.lowered(v), k.exparg}, c * Rat(e));
    SymPoly dArg = k.exparg.derivative(v);
    for (const auto& [m2, c2] : dArg.terms())
      out.add_term(TermKey{k.mono.times(m2), k.exparg}, c * c2);
  }
  return out;
}

Poly Poly::at_zero(const Symbol& v) const {
  Poly out;
  SymPoly zero;
  for (const auto& [k, c] : terms_) {
    if (k.mono.exponent_of(v) > 0) continue;
    SymPoly arg = k.exparg.depends_on(v) ? k.exparg.substituted(v, zero)
                                         : k.exparg;
    out.add_term(TermKey{k.mono, arg}, c);
  }
  return out;
}

bool Poly::depends_on(const Symbol& v) const {
  for (const auto& [k, c] : terms_)
    if (k.mono.exponent_of(v) > 0 || k.exparg.depends_on(v)) return true;
  return false;
}

bool Poly::depends_on_in_exparg(const Symbol& v) const {
  for (const auto& [k, c] : terms_)
    if (k.exparg.depends_on(v)) return true;
  return false;
}

SymPoly Poly::common_exp_part() const {
  if (terms_.empty()) return SymPoly();
  // Union of monomials occurring in any exp argument.
  std::map<Monomial, Rat> mins;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (first) {
      for (const auto& [m, q] : k.exparg.terms()) mins[m] = q;
      first = false;
      continue;
    }
    // Entries absent from this term's argument drop to min(prev, 0).
    for (auto it = mins.begin(); it != mins.end();) {
      Rat q = k.exparg.coefficient(it->first);
      if (q < it->second) it->second = q;
      if (it->second == 0)
        it = mins.erase(it);
      else
        ++it;
    }
    for (const auto& [m, q] : k.exparg.terms()) {
      if (mins.count(m)) continue;
      if (q < 0) mins[m] = q;  // previous terms all had coefficient 0
    }
  }
  SymPoly out;
  for (const auto& [m, q] : mins) out.add_term(m, q);
  return out;
}

Poly Poly::exp_shifted(const SymPoly& q) const {
  if (q.is_zero()) return *this;
  Poly out;
  for (const auto& [k, c] : terms_)
    out.add_term(TermKey{k.mono, k.exparg.minus(q)}, c);
  return out;
}

bool Poly::operator==(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  for (; a != terms_.end(); ++a, ++b) {
    if (a->first.compare(b->first) != 0 || a->second != b->second)
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Fraction reduction: flattened integer polynomials and multivariate gcd.
//
// Symbols and distinct exp arguments become indexed variables; terms become
// dense exponent vectors with mpz coefficients (coefficients cleared of
// denominators by the caller). gcd is the subresultant PRS, recursing through
// contents. Exp atoms enter with exponent 1 (multiplicity lives in the
// argument polynomial), so gcd can cancel only syntactically shared atoms —
// the intended opaque treatment.

namespace {

using FlatMono = std::vector<unsigned>;

struct FlatMonoLess {
  bool operator()(const FlatMono& a, const FlatMono& b) const {
    unsigned da = 0, db = 0;
    for (unsigned e : a) da += e;
    for (unsigned e : b) db += e;
    if (da != db) return da < db;
    return a < b;  // lexicographic
  }
};

using FlatPoly = std::map<FlatMono, Int, FlatMonoLess>;

struct FlatContext {
  std::vector<Symbol> syms;
  std::vector<SymPoly> atoms;
  std::size_t nvars() const { return syms.size() + atoms.size(); }

  std::size_t sym_index(const Symbol& s) const {
    for (std::size_t i = 0; i < syms.size(); ++i)
      if (syms[i].name == s.name) return i;
    throw std::logic_error("flatten: unknown symbol");
  }
  std::size_t atom_index(const SymPoly& a) const {
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (atoms[i].compare(a) == 0) return syms.size() + i;
    throw std::logic_error("flatten: unknown atom");
  }
};

FlatContext build_context(const Poly& a, const Poly& b) {
  FlatContext ctx;
  SymbolSet syms;
  a.collect_symbols(syms);
  b.collect_symbols(syms);
  ctx.syms.assign(syms.begin(), syms.end());
  std::vector<SymPoly> atoms;
  auto add_atoms = [&](const Poly& p) {
    for (const auto& [k, c] : p.terms()) {
      if (k.exparg.is_zero()) continue;
      bool seen = false;
      for (const auto& q : atoms)
        if (q.compare(k.exparg) == 0) {
          seen = true;
          break;
        }
      if (!seen) atoms.push_back(k.exparg);
    }
  };
  add_atoms(a);
  add_atoms(b);
  std::sort(atoms.begin(), atoms.end(),
            [](const SymPoly& x, const SymPoly& y) { return x.compare(y) < 0; });
  ctx.atoms = std::move(atoms);
  return ctx;
}

// Clears denominators; returns the integer polynomial and the scale factor
// such that flat == poly * scale.
FlatPoly flatten(const Poly& p, const FlatContext& ctx, Int& scale) {
  scale = 1;
  for (const auto& [k, c] : p.terms()) {
    Int den = c.get_den();
    Int g;
    mpz_gcd(g.get_mpz_t(), scale.get_mpz_t(), den.get_mpz_t());
    scale = scale / g * den;
  }
  FlatPoly out;
  for (const auto& [k, c] : p.terms()) {
    FlatMono mono(ctx.nvars(), 0);
    for (const auto& [s, e] : k.mono.factors()) mono[ctx.sym_index(s)] = e;
    if (!k.exparg.is_zero()) mono[ctx.atom_index(k.exparg)] = 1;
    Rat scaled = c * Rat(scale);
    assert(scaled.get_den() == 1);
    out[mono] = scaled.get_num();
  }
  return out;
}

Poly unflatten(const FlatPoly& f, const FlatContext& ctx, const Rat& scale) {
  Poly out;
  for (const auto& [mono, c] : f) {
    Monomial m;
    SymPoly arg;
    for (std::size_t i = 0; i < mono.size(); ++i) {
      if (mono[i] == 0) continue;
      if (i < ctx.syms.size()) {
        m = m.times(Monomial::var(ctx.syms[i], mono[i]));
      } else {
        arg = arg.plus(ctx.atoms[i - ctx.syms.size()].scaled(Rat(mono[i])));
      }
    }
    out.add_term(TermKey{m, arg}, Rat(c) * scale);
  }
  return out;
}

bool flat_is_zero(const FlatPoly& p) { return p.empty(); }

bool flat_is_constant(const FlatPoly& p) {
  if (p.empty()) return true;
  if (p.size() != 1) return false;
  for (unsigned e : p.begin()->first)
    if (e != 0) return false;
  return true;
}

void flat_add_term(FlatPoly& p, const FlatMono& m, const Int& c) {
  if (c == 0) return;
  auto [it, inserted] = p.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

FlatPoly flat_sub(const FlatPoly& a, const FlatPoly& b) {
  FlatPoly out = a;
  for (const auto& [m, c] : b) flat_add_term(out, m, -c);
  return out;
}

FlatPoly flat_mul(const FlatPoly& a, const FlatPoly& b) {
  FlatPoly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      FlatMono m(ma.size());
      for (std::size_t i = 0; i < ma.size(); ++i) m[i] = ma[i] + mb[i];
      flat_add_term(out, m, ca * cb);
    }
  return out;
}

FlatPoly flat_mul_int(const FlatPoly& a, const Int& c) {
  FlatPoly out;
  if (c == 0) return out;
  for (const auto& [m, k] : a) out[m] = k * c;
  return out;
}

FlatPoly flat_pow(const FlatPoly& a, unsigned k) {
  FlatPoly acc;
  acc[FlatMono(a.empty() ? 0 : a.begin()->first.size(), 0)] = 1;
  if (a.empty() && k > 0) return FlatPoly();
  FlatPoly base = a;
  while (k > 0) {
    if (k & 1u) acc = flat_mul(acc, base);
    k >>= 1u;
    if (k > 0) base = flat_mul(base, base);
  }
  return acc;
}

unsigned flat_degree(const FlatPoly& p, std::size_t var) {
  unsigned d = 0;
  for (const auto& [m, c] : p) d = std::max(d, m[var]);
  return d;
}

// Coefficient of var^deg, as a polynomial with var zeroed out.
FlatPoly flat_coeff(const FlatPoly& p, std::size_t var, unsigned deg) {
  FlatPoly out;
  for (const auto& [m, c] : p) {
    if (m[var] != deg) continue;
    FlatMono m2 = m;
    m2[var] = 0;
    out[m2] = c;
  }
  return out;
}

FlatPoly flat_shift(const FlatPoly& p, std::size_t var, unsigned deg) {
  FlatPoly out;
  for (const auto& [m, c] : p) {
    FlatMono m2 = m;
    m2[var] += deg;
    out[m2] = c;
  }
  return out;
}

// Exact division; throws if not divisible (callers rely on UFD theory).
FlatPoly flat_divide_exact(const FlatPoly& a, const FlatPoly& b) {
  if (flat_is_zero(b)) throw std::logic_error("flat division by zero");
  FlatPoly rem = a;
  FlatPoly quot;
  const auto& [lbm, lbc] = *b.rbegin();
  while (!rem.empty()) {
    const auto& [lam, lac] = *rem.rbegin();
    FlatMono qm(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) {
      if (lam[i] < lbm[i]) throw std::logic_error("inexact poly division");
      qm[i] = lam[i] - lbm[i];
    }
    Int qc, r;
    mpz_tdiv_qr(qc.get_mpz_t(), r.get_mpz_t(), lac.get_mpz_t(),
                lbc.get_mpz_t());
    if (r != 0) throw std::logic_error("inexact poly division");
    flat_add_term(quot, qm, qc);
    FlatPoly sub;
    sub[qm] = qc;
    rem = flat_sub(rem, flat_mul(sub, b));
  }
  return quot;
}

Int flat_int_content(const FlatPoly& p) {
  Int g = 0;
  for (const auto& [m, c] : p) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

FlatPoly gcd_flat(const FlatPoly& a, const FlatPoly& b);

// gcd of all coefficients of p viewed as univariate in var.
FlatPoly flat_content(const FlatPoly& p, std::size_t var) {
  FlatPoly acc;
  for (unsigned d = 0; d <= flat_degree(p, var); ++d) {
    FlatPoly c = flat_coeff(p, var, d);
    if (flat_is_zero(c)) continue;
    acc = flat_is_zero(acc) ? c : gcd_flat(acc, c);
    if (flat_is_constant(acc) && acc.begin()->second == 1) break;
  }
  return acc;
}

// Pseudo-remainder prem(a, b) w.r.t. var: lc(b)^(deg a - deg b + 1) * a mod b.
FlatPoly flat_prem(const FlatPoly& a, const FlatPoly& b, std::size_t var) {
  unsigned db = flat_degree(b, var);
  FlatPoly lcb = flat_coeff(b, var, db);
  FlatPoly r = a;
  long need = static_cast<long>(flat_degree(a, var)) - db + 1;
  long used = 0;
  while (!flat_is_zero(r) && flat_degree(r, var) >= db) {
    unsigned dr = flat_degree(r, var);
    FlatPoly lead = flat_coeff(r, var, dr);
    r = flat_sub(flat_mul(r, lcb),
                 flat_mul(flat_shift(lead, var, dr - db), b));
    ++used;
  }
  for (; used < need; ++used) r = flat_mul(r, lcb);
  return r;
}

FlatPoly flat_constant(const Int& c, std::size_t nvars) {
  FlatPoly p;
  if (c != 0) p[FlatMono(nvars, 0)] = c;
  return p;
}

// Normalizes sign so the leading (graded-lex greatest) coefficient is
// positive.
FlatPoly flat_sign_normalized(FlatPoly p) {
  if (p.empty()) return p;
  if (p.rbegin()->second < 0) return flat_mul_int(p, Int(-1));
  return p;
}

FlatPoly gcd_flat(const FlatPoly& a, const FlatPoly& b) {
  if (flat_is_zero(a)) return flat_sign_normalized(b);
  if (flat_is_zero(b)) return flat_sign_normalized(a);
  std::size_t nv = a.begin()->first.size();
  if (flat_is_constant(a) || flat_is_constant(b)) {
    Int g;
    Int ca = flat_int_content(a), cb = flat_int_content(b);
    mpz_gcd(g.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    return flat_constant(g, nv);
  }

  // Collapse variables that occur on one side only: gcd(a, b) = gcd of the
  // content of a w.r.t. such a variable with b.
  for (std::size_t v = 0; v < nv; ++v) {
    bool ina = flat_degree(a, v) > 0, inb = flat_degree(b, v) > 0;
    if (ina && !inb) return gcd_flat(flat_content(a, v), b);
    if (inb && !ina) return gcd_flat(a, flat_content(b, v));
  }

  // Main variable: common variable of least maximal degree.
  std::size_t var = nv;
  unsigned best = 0;
  for (std::size_t v = 0; v < nv; ++v) {
    unsigned da = flat_degree(a, v), db = flat_degree(b, v);
    if (da == 0 || db == 0) continue;
    unsigned m = std::max(da, db);
    if (var == nv || m < best) {
      var = v;
      best = m;
    }
  }
  assert(var != nv);

  FlatPoly ca = flat_content(a, var), cb = flat_content(b, var);
  FlatPoly pa = flat_divide_exact(a, ca), pb = flat_divide_exact(b, cb);
  FlatPoly cg = gcd_flat(ca, cb);

  FlatPoly r0 = pa, r1 = pb;
  if (flat_degree(r0, var) < flat_degree(r1, var)) std::swap(r0, r1);
  FlatPoly g = flat_constant(1, nv), h = flat_constant(1, nv);
  while (true) {
    unsigned d0 = flat_degree(r0, var), d1 = flat_degree(r1, var);
    if (d1 == 0) {
      // Nonzero remainder of degree 0 in var: primitive parts are coprime.
      return flat_sign_normalized(cg);
    }
    unsigned delta = d0 - d1;
    FlatPoly rem = flat_prem(r0, r1, var);
    if (flat_is_zero(rem)) {
      FlatPoly gp = flat_divide_exact(r1, flat_content(r1, var));
      return flat_sign_normalized(flat_mul(cg, gp));
    }
    rem = flat_divide_exact(rem, flat_mul(g, flat_pow(h, delta)));
    g = flat_coeff(r1, var, d1);
    if (delta > 0) {
      FlatPoly gd = flat_pow(g, delta);
      h = (delta == 1) ? g : flat_divide_exact(gd, flat_pow(h, delta - 1));
    }
    r0 = std::move(r1);
    r1 = std::move(rem);
  }
}

}  // namespace

void reduce_fraction(Poly& n, Poly& d) {
  if (d.is_zero()) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  if (n.is_zero()) {
    d = Poly::one();
    return;
  }

  // Cancel the denominator's termwise-common exponential factor.
  SymPoly shift = d.common_exp_part();
  if (!shift.is_zero()) {
    d = d.exp_shifted(shift);
    n = n.exp_shifted(shift);
  }

  Rat dc;
  if (d.is_constant(&dc)) {
    if (dc != 1) n = n.scaled(1 / dc);
    d = Poly::one();
    return;
  }

  FlatContext ctx = build_context(n, d);
  Int sn, sd;
  FlatPoly fn = flatten(n, ctx, sn);
  FlatPoly fd = flatten(d, ctx, sd);

  FlatPoly g = gcd_flat(fn, fd);
  if (!(flat_is_constant(g) && g.begin()->second == 1)) {
    fn = flat_divide_exact(fn, g);
    fd = flat_divide_exact(fd, g);
  }

  // Denominator becomes integer-primitive with positive lowest-order term.
  Int cd = flat_int_content(fd);
  if (fd.begin()->second < 0) cd = -cd;
  fd = flat_divide_exact(fd, flat_constant(cd, ctx.nvars()));

  Rat numScale = Rat(sd) / (Rat(sn) * Rat(cd));
  n = unflatten(fn, ctx, numScale);
  d = unflatten(fd, ctx, Rat(1));

  // gcd quotients can, in rare exp-heavy cases, re-expose a common
  // exponential factor in the denominator; shift once more if so.
  SymPoly again = d.common_exp_part();
  if (!again.is_zero()) {
    d = d.exp_shifted(again);
    n = n.exp_shifted(again);
  }
}

}  // namespace pgfi
