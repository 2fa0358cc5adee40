#include "pgfi/approx.hpp"

#include <algorithm>
#include <cassert>
#include <vector>

namespace pgfi {

namespace {

struct QInterval {
  Rat lo, hi;

  static QInterval point(const Rat& v) { return {v, v}; }
  QInterval plus(const QInterval& o) const { return {lo + o.lo, hi + o.hi}; }
  QInterval times(const QInterval& o) const {
    Rat a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    return {std::min(std::min(a, b), std::min(c, d)),
            std::max(std::max(a, b), std::max(c, d))};
  }
  QInterval scaled(const Rat& c) const {
    if (c >= 0) return {lo * c, hi * c};
    return {hi * c, lo * c};
  }
  bool contains_zero() const { return lo <= 0 && hi >= 0; }
  QInterval reciprocal() const {
    assert(!contains_zero());
    return {1 / hi, 1 / lo};
  }
  QInterval squared_positive() const {
    assert(lo > 0);
    return {lo * lo, hi * hi};
  }
};

// exp(q) for rational q; `terms` controls the series length (precision).
QInterval exp_interval(const Rat& q, unsigned terms) {
  if (q == 0) return QInterval::point(1);
  bool negate = q < 0;
  Rat r = abs(q);
  unsigned halvings = 0;
  while (r > Rat(1, 2)) {
    r /= 2;
    ++halvings;
  }
  // S = sum_{i<=terms} r^i/i!; tail <= 2 * r^(terms+1)/(terms+1)! for r<=1/2.
  Rat term = 1, sum = 1;
  for (unsigned i = 1; i <= terms; ++i) {
    term = term * r / Rat(i);
    sum += term;
  }
  Rat tail = 2 * term * r / Rat(terms + 1);
  QInterval v{sum, sum + tail};
  for (unsigned i = 0; i < halvings; ++i) v = v.squared_positive();
  if (negate) v = v.reciprocal();
  return v;
}

// A closed polynomial: constant terms paired with constant exp arguments.
struct ClosedTerm {
  Rat coeff;
  Rat exparg;  // 0 means no exponential
};

std::vector<ClosedTerm> close_poly(const Poly& p) {
  std::vector<ClosedTerm> out;
  for (const auto& [k, c] : p.terms()) {
    if (!k.mono.is_one())
      throw Error(ErrorCode::MissingAssignment,
                  "no value assigned to symbol '" +
                      k.mono.factors()[0].first.name + "'");
    Rat arg;
    if (!k.exparg.is_constant(&arg)) {
      SymbolSet syms;
      k.exparg.collect_symbols(syms);
      throw Error(ErrorCode::MissingAssignment,
                  "no value assigned to symbol '" + syms.begin()->name + "'");
    }
    out.push_back({c, arg});
  }
  return out;
}

bool poly_is_exact(const std::vector<ClosedTerm>& ts, Rat* value) {
  Rat v = 0;
  for (const auto& t : ts) {
    if (t.exparg != 0) return false;
    v += t.coeff;
  }
  *value = v;
  return true;
}

QInterval eval_interval(const std::vector<ClosedTerm>& ts, unsigned terms) {
  QInterval acc = QInterval::point(0);
  for (const auto& t : ts) {
    if (t.exparg == 0)
      acc = acc.plus(QInterval::point(t.coeff));
    else
      acc = acc.plus(exp_interval(t.exparg, terms).scaled(t.coeff));
  }
  return acc;
}

Int pow10(unsigned e) {
  Int v = 1;
  for (unsigned i = 0; i < e; ++i) v *= 10;
  return v;
}

// floor(log10(v)) for v > 0, by exact comparison against powers of ten.
long floor_log10(const Rat& v) {
  assert(v > 0);
  if (v >= 1) {
    long e = 0;
    while (v >= Rat(pow10(static_cast<unsigned>(e + 1)))) ++e;
    return e;
  }
  long e = -1;
  while (v < Rat(1) / Rat(pow10(static_cast<unsigned>(-e)))) --e;
  return e;
}

// Round-to-nearest integer, halves away from zero; v >= 0.
Int round_half_away(const Rat& v) {
  Int fl = v.get_num() / v.get_den();  // truncation; v >= 0 so this is floor
  Rat frac = v - Rat(fl);
  if (frac * 2 >= 1) fl += 1;
  return fl;
}

std::string format_digits(bool negative, const Int& n, long pointexp,
                          unsigned digits) {
  std::string ds = n.get_str();
  assert(ds.size() == digits);
  std::string body;
  if (pointexp >= 0 && pointexp < static_cast<long>(digits)) {
    body = ds.substr(0, pointexp + 1);
    if (pointexp + 1 < static_cast<long>(digits))
      body += "." + ds.substr(pointexp + 1);
  } else if (pointexp < 0 && pointexp >= -4) {
    body = "0." + std::string(-pointexp - 1, '0') + ds;
  } else {
    body = ds.substr(0, 1);
    if (digits > 1) body += "." + ds.substr(1);
    body += "e" + std::string(pointexp >= 0 ? "+" : "-") +
            std::to_string(pointexp >= 0 ? pointexp : -pointexp);
  }
  return (negative ? "-" : "") + body;
}

// Rounds |v| to `digits` significant digits; returns (digit string, exp).
std::pair<Int, long> round_significant(const Rat& v, unsigned digits) {
  long e = floor_log10(v);
  long shift = static_cast<long>(digits) - 1 - e;
  Rat scaled = shift >= 0 ? Rat(v * Rat(pow10(static_cast<unsigned>(shift))))
                          : Rat(v / Rat(pow10(static_cast<unsigned>(-shift))));
  Int n = round_half_away(scaled);
  if (n == pow10(digits)) {
    n = pow10(digits - 1);
    ++e;
  }
  return {n, e};
}

}  // namespace

std::string approx_decimal(const Expr& e, const Assignment& assignment,
                           unsigned digits) {
  if (digits == 0)
    throw std::invalid_argument("approx_decimal: digits must be >= 1");

  Expr closed = e;
  for (const auto& [sym, val] : assignment) {
    try {
      closed = closed.substitute(sym, Expr::constant(val));
    } catch (const Error& err) {
      if (err.code() == ErrorCode::DivisionByZero)
        throw Error(ErrorCode::EvaluationPole,
                    "denominator vanishes at the assignment");
      throw;
    }
  }

  if (closed.is_zero()) return "0";

  std::vector<ClosedTerm> nts = close_poly(closed.num());
  std::vector<ClosedTerm> dts = close_poly(closed.den());

  Rat nExact, dExact;
  bool exact =
      poly_is_exact(nts, &nExact) && poly_is_exact(dts, &dExact);
  if (exact) {
    if (dExact == 0)
      throw Error(ErrorCode::EvaluationPole, "denominator evaluates to zero");
    Rat v = nExact / dExact;
    if (v == 0) return "0";
    bool neg = v < 0;
    auto [n, pe] = round_significant(abs(v), digits);
    return format_digits(neg, n, pe, digits);
  }

  for (unsigned work = 24; work <= 3072; work *= 2) {
    QInterval nv = eval_interval(nts, work);
    QInterval dv = eval_interval(dts, work);
    if (dv.contains_zero()) continue;  // refine; true zero is impossible here
    QInterval v = nv.times(dv.reciprocal());
    if (v.contains_zero()) continue;
    bool neg = v.hi < 0;
    QInterval a = neg ? QInterval{-v.hi, -v.lo} : v;
    auto [nlo, elo] = round_significant(a.lo, digits);
    auto [nhi, ehi] = round_significant(a.hi, digits);
    if (nlo == nhi && elo == ehi) return format_digits(neg, nlo, elo, digits);
  }
  throw std::logic_error("approx_decimal: failed to certify digits");
}

int certified_sign(const Expr& e) {
  if (e.is_zero()) return 0;
  if (!e.symbols().empty())
    throw Error(ErrorCode::MissingAssignment,
                "certified_sign needs a closed expression");
  Rat r;
  if (e.is_rational(&r)) return r > 0 ? 1 : -1;
  std::vector<ClosedTerm> nts = close_poly(e.num());
  std::vector<ClosedTerm> dts = close_poly(e.den());
  for (unsigned work = 24; work <= 3072; work *= 2) {
    QInterval nv = eval_interval(nts, work);
    QInterval dv = eval_interval(dts, work);
    if (nv.contains_zero() || dv.contains_zero()) continue;
    int sn = nv.lo > 0 ? 1 : -1;
    int sd = dv.lo > 0 ? 1 : -1;
    return sn * sd;
  }
  throw std::logic_error("certified_sign: failed to separate from zero");
}

}  // namespace pgfi
