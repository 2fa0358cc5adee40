#include "pgfi/oracle.hpp"

#include <cassert>

namespace pgfi {

Expr StateMap::entry_mass() const {
  Expr sum = Expr::zero();
  for (const auto& [v, m] : entries) sum = sum.add(m);
  return sum;
}

Expr StateMap::total() const { return entry_mass().add(residual).add(rejected); }

StateMap dirac_state(std::vector<Symbol> vars, Valuation v) {
  StateMap m;
  m.vars = std::move(vars);
  v.resize(m.vars.size(), 0);
  m.entries[v] = Expr::one();
  return m;
}

Expr dist_mass(const Dist& d, unsigned long n) {
  switch (d.kind) {
    case Dist::Kind::Bernoulli:
      if (n == 0) return Expr::one().sub(d.param);
      if (n == 1) return d.param;
      return Expr::zero();
    case Dist::Kind::Geometric: {
      // p (1-p)^n
      return d.param.mul(
          Expr::one().sub(d.param).pow(static_cast<long>(n)));
    }
    case Dist::Kind::Poisson: {
      // exp(-rate) rate^n / n!
      Expr e = Expr::exp(d.param.neg());
      return e.mul(d.param.pow(static_cast<long>(n)))
          .mul(Expr::constant(1 / factorial(static_cast<unsigned>(n))));
    }
    case Dist::Kind::Binomial: {
      if (n > d.n) return Expr::zero();
      Expr p = d.param;
      Expr q = Expr::one().sub(p);
      return Expr::constant(binomial_coeff(d.n, n))
          .mul(p.pow(static_cast<long>(n)))
          .mul(q.pow(static_cast<long>(d.n - n)));
    }
    case Dist::Kind::UniformInt:
      if (n < d.lo || n > d.hi) return Expr::zero();
      return Expr::constant(Rat(1, d.hi - d.lo + 1));
    case Dist::Kind::Dirac:
      return n == d.point ? Expr::one() : Expr::zero();
  }
  return Expr::zero();
}

std::optional<unsigned long> dist_support_max(const Dist& d) {
  switch (d.kind) {
    case Dist::Kind::Bernoulli: return 1;
    case Dist::Kind::Binomial: return d.n;
    case Dist::Kind::UniformInt: return d.hi;
    case Dist::Kind::Dirac: return d.point;
    case Dist::Kind::Geometric:
    case Dist::Kind::Poisson: return std::nullopt;
  }
  return std::nullopt;
}

namespace {

struct Interp {
  const EnumerateOptions& opts;
  std::vector<Symbol> vars;

  std::size_t index_of(const Symbol& s) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i].name == s.name) return i;
    throw std::logic_error("oracle: unknown variable " + s.name);
  }

  bool guard_holds(const Event& g, const Valuation& val) const {
    return g.eval([&](const Symbol& s) { return val[index_of(s)]; });
  }

  void add_entry(StateMap& m, const Valuation& v, const Expr& mass) const {
    if (mass.is_zero()) return;
    auto [it, inserted] = m.entries.emplace(v, mass);
    if (!inserted) it->second = it->second.add(mass);
  }

  StateMap run_program(const Program& p, StateMap m) const {
    for (const auto& s : p.stmts) {
      Expr before;
      if (opts.check_conservation) before = m.total();
      m = run_stmt(s, std::move(m));
      if (opts.check_conservation && !m.total().equals(before))
        throw std::logic_error("oracle: mass not conserved at " +
                               s.pos.str());
    }
    return m;
  }

  StateMap base_like(const StateMap& m) const {
    StateMap out;
    out.vars = m.vars;
    out.residual = m.residual;
    out.rejected = m.rejected;
    return out;
  }

  StateMap run_stmt(const Stmt& s, StateMap m) const {
    switch (s.kind) {
      case Stmt::Kind::Skip:
        return m;
      case Stmt::Kind::AssignConst: {
        StateMap out = base_like(m);
        std::size_t i = index_of(s.var);
        for (const auto& [val, mass] : m.entries) {
          Valuation v = val;
          v[i] = s.value;
          add_entry(out, v, mass);
        }
        return out;
      }
      case Stmt::Kind::Increment: {
        StateMap out = base_like(m);
        std::size_t i = index_of(s.var);
        for (const auto& [val, mass] : m.entries) {
          Valuation v = val;
          v[i] += s.value;
          add_entry(out, v, mass);
        }
        return out;
      }
      case Stmt::Kind::AddVar: {
        StateMap out = base_like(m);
        std::size_t i = index_of(s.var), j = index_of(s.source);
        for (const auto& [val, mass] : m.entries) {
          Valuation v = val;
          v[i] += v[j];
          add_entry(out, v, mass);
        }
        return out;
      }
      case Stmt::Kind::Sample:
      case Stmt::Kind::SampleAdd: {
        StateMap out = base_like(m);
        std::size_t i = index_of(s.var);
        auto smax = dist_support_max(s.dist);
        unsigned long cap = smax ? std::min(*smax, opts.truncate)
                                 : opts.truncate;
        for (const auto& [val, mass] : m.entries) {
          Expr placed = Expr::zero();
          for (unsigned long n = 0; n <= cap; ++n) {
            Expr pn = dist_mass(s.dist, n);
            if (pn.is_zero()) continue;
            Valuation v = val;
            v[i] = (s.kind == Stmt::Kind::SampleAdd ? v[i] : 0ul) + n;
            add_entry(out, v, mass.mul(pn));
            placed = placed.add(pn);
          }
          // Exact truncation remainder: mass * (1 - sum of placed pmf).
          Expr tail = Expr::one().sub(placed);
          if (!tail.is_zero())
            out.residual = out.residual.add(mass.mul(tail));
        }
        return out;
      }
      case Stmt::Kind::Choice: {
        StateMap left = base_like(m), right;
        right.vars = m.vars;  // residual/rejected carried on the left copy
        for (const auto& [val, mass] : m.entries) {
          add_entry(left, val, mass.mul(s.prob));
          add_entry(right, val, mass.mul(Expr::one().sub(s.prob)));
        }
        StateMap lo = run_program(*s.left, std::move(left));
        StateMap ro = run_program(*s.right, std::move(right));
        for (const auto& [val, mass] : ro.entries) add_entry(lo, val, mass);
        lo.residual = lo.residual.add(ro.residual);
        lo.rejected = lo.rejected.add(ro.rejected);
        return lo;
      }
      case Stmt::Kind::IfElse: {
        StateMap thenIn = base_like(m), elseIn;
        elseIn.vars = m.vars;
        for (const auto& [val, mass] : m.entries) {
          if (guard_holds(*s.guard, val))
            add_entry(thenIn, val, mass);
          else
            add_entry(elseIn, val, mass);
        }
        StateMap to = run_program(*s.left, std::move(thenIn));
        StateMap eo = run_program(*s.right, std::move(elseIn));
        for (const auto& [val, mass] : eo.entries) add_entry(to, val, mass);
        to.residual = to.residual.add(eo.residual);
        to.rejected = to.rejected.add(eo.rejected);
        return to;
      }
      case Stmt::Kind::While: {
        StateMap done = base_like(m);
        StateMap looping;
        looping.vars = m.vars;
        for (const auto& [val, mass] : m.entries) {
          if (guard_holds(*s.guard, val))
            add_entry(looping, val, mass);
          else
            add_entry(done, val, mass);
        }
        for (unsigned long it = 0;
             it < opts.unroll_cap && !looping.entries.empty(); ++it) {
          StateMap next = run_program(*s.right, std::move(looping));
          looping = StateMap{};
          looping.vars = m.vars;
          done.residual = done.residual.add(next.residual);
          done.rejected = done.rejected.add(next.rejected);
          for (const auto& [val, mass] : next.entries) {
            if (guard_holds(*s.guard, val))
              add_entry(looping, val, mass);
            else
              add_entry(done, val, mass);
          }
        }
        // Mass still looping after the cap is unresolved.
        done.residual = done.residual.add(looping.entry_mass());
        return done;
      }
      case Stmt::Kind::Observe: {
        StateMap out = base_like(m);
        for (const auto& [val, mass] : m.entries) {
          if (guard_holds(*s.guard, val))
            add_entry(out, val, mass);
          else
            out.rejected = out.rejected.add(mass);
        }
        return out;
      }
    }
    return m;
  }
};

void collect_block(const Expr& f, const std::vector<Symbol>& vars,
                   std::size_t index, unsigned long upto, Valuation& prefix,
                   std::map<Valuation, Expr>& out) {
  if (index == vars.size()) {
    if (!f.is_zero()) out[prefix] = f;
    return;
  }
  std::vector<Expr> coeffs =
      f.taylor_coeffs(vars[index], static_cast<unsigned>(upto));
  for (unsigned long n = 0; n <= upto; ++n) {
    prefix.push_back(n);
    collect_block(coeffs[n], vars, index + 1, upto, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

StateMap enumerate_program(const Program& p, StateMap input,
                           const EnumerateOptions& opts) {
  if (opts.truncate == 0 || opts.unroll_cap == 0)
    throw Error(ErrorCode::CapExceeded,
                "truncation and unroll caps must be positive");
  Interp interp{opts, input.vars};
  return interp.run_program(p, std::move(input));
}

ComparisonReport compare(const Pgf& f, const StateMap& m, unsigned long upto) {
  ComparisonReport report;
  std::map<Valuation, Expr> coeffs;
  Valuation prefix;
  collect_block(f.expr, m.vars, 0, upto, prefix, coeffs);

  auto in_range = [&](const Valuation& v) {
    for (unsigned long x : v)
      if (x > upto) return false;
    return true;
  };

  for (const auto& [val, mass] : m.entries) {
    if (!in_range(val)) continue;
    auto it = coeffs.find(val);
    Expr exact = it == coeffs.end() ? Expr::zero() : it->second;
    if (!exact.equals(mass)) report.mismatches.push_back({val, exact, mass});
  }
  for (const auto& [val, exact] : coeffs) {
    if (m.entries.count(val)) continue;
    if (!exact.is_zero()) report.mismatches.push_back({val, exact, Expr::zero()});
  }
  std::sort(report.mismatches.begin(), report.mismatches.end(),
            [](const Mismatch& a, const Mismatch& b) { return a.val < b.val; });
  return report;
}

}  // namespace pgfi
