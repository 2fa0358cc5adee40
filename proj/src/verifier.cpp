#include "pgfi/verifier.hpp"

namespace pgfi {

namespace {

void require_loop_free(const Program& p, const char* what) {
  if (contains_while(p))
    throw Error(ErrorCode::UnsupportedConstruct,
                std::string(what) + " must be loop-free");
}

void require_observe_free(const Program& p, const char* what) {
  if (contains_observe(p))
    throw Error(ErrorCode::UnsupportedConstruct,
                std::string(what) + " must be observe-free");
}

// Depth-first search for the first marker monomial (total degree <= budget)
// whose coefficient in `diff` is nonzero.
std::optional<Witness> find_witness(const Expr& diff,
                                    const std::vector<std::pair<Symbol, Symbol>>& pairs,
                                    std::size_t index, unsigned budget) {
  if (index == pairs.size())
    return diff.is_zero() ? std::nullopt
                          : std::make_optional<Witness>();
  const Symbol& marker = pairs[index].second;
  std::vector<Expr> coeffs = diff.taylor_coeffs(marker, budget);
  for (unsigned n = 0; n <= budget; ++n) {
    auto rest = find_witness(coeffs[n], pairs, index + 1, budget - n);
    if (rest) {
      rest->insert(rest->begin(), {pairs[index].first, n});
      return rest;
    }
  }
  return std::nullopt;
}

Verdict refute(Verdict::Condition cond, const Expr& difference,
               const SopContext& ctx) {
  Verdict v;
  v.verified = false;
  v.failed = cond;
  v.difference = difference;
  v.witness = find_witness(difference, ctx.pairs, 0, kWitnessDegreeBound);
  return v;
}

std::vector<Symbol> union_vars(const std::vector<Symbol>& a,
                               const std::vector<Symbol>& b) {
  std::vector<Symbol> out = a;
  for (const auto& s : b) {
    bool seen = false;
    for (const auto& t : out)
      if (t.name == s.name) seen = true;
    if (!seen) out.push_back(s);
  }
  return out;
}

SymbolSet program_symbols(const Program& p) {
  SymbolSet out;
  for (const auto& v : collect_variables(p)) out.insert(v);
  for (const auto& v : collect_parameters(p)) out.insert(v);
  return out;
}

}  // namespace

SopContext make_sop_context(const std::vector<Symbol>& vars,
                            const SymbolSet& avoid) {
  SopContext ctx;
  for (const auto& v : vars) {
    std::string name = "_" + v.name;
    auto taken = [&](const std::string& n) {
      if (avoid.count(Symbol{n, SymbolKind::ProgramVar})) return true;
      for (const auto& [pv, m] : ctx.pairs)
        if (m.name == n) return true;
      return false;
    };
    while (taken(name)) name += "_";
    ctx.pairs.emplace_back(v, sop_marker(name));
  }
  return ctx;
}

Pgf sop_input(const SopContext& ctx) {
  Expr acc = Expr::one();
  std::vector<Symbol> vars;
  for (const auto& [v, u] : ctx.pairs) {
    vars.push_back(v);
    acc = acc.mul(
        Expr::one().div(Expr::one().sub(Expr::var(u).mul(Expr::var(v)))));
  }
  return Pgf{acc, std::move(vars)};
}

Verdict check_equivalence(const Program& p1, const Program& p2) {
  require_loop_free(p1, "equivalence operand");
  require_loop_free(p2, "equivalence operand");
  require_observe_free(p1, "equivalence operand");
  require_observe_free(p2, "equivalence operand");

  std::vector<Symbol> vars =
      union_vars(collect_variables(p1), collect_variables(p2));
  SymbolSet avoid = program_symbols(p1);
  for (const auto& s : program_symbols(p2)) avoid.insert(s);
  SopContext ctx = make_sop_context(vars, avoid);
  Pgf generic = sop_input(ctx);
  generic.vars = vars;

  Pgf out1 = transform_program(p1, generic);
  Pgf out2 = transform_program(p2, generic);
  Expr diff = out1.expr.sub(out2.expr);
  if (diff.is_zero()) return Verdict::ok();
  return refute(Verdict::Condition::Unrolling, diff, ctx);
}

Verdict check_invariant(const Stmt& loop) {
  if (loop.kind != Stmt::Kind::While)
    throw std::logic_error("check_invariant: not a while statement");
  if (!loop.invariant)
    throw Error(ErrorCode::UnsupportedConstruct,
                loop.pos.str() + ": loop has no invariant annotation");
  const Program& inv = *loop.invariant;
  const Program& body = *loop.right;
  require_loop_free(inv, "invariant");
  require_observe_free(inv, "invariant");
  require_loop_free(body, "loop body");
  require_observe_free(body, "loop body");

  // Unrolling identity: I == if (g) { body; I } else { skip }.
  Program unrolled;
  {
    Stmt ite;
    ite.kind = Stmt::Kind::IfElse;
    ite.pos = loop.pos;
    ite.guard = loop.guard;
    Program seq = body;
    for (const auto& s : inv.stmts) seq.stmts.push_back(s);
    ite.left = std::make_shared<Program>(std::move(seq));
    Program skipOnly;
    Stmt sk;
    sk.kind = Stmt::Kind::Skip;
    sk.pos = loop.pos;
    skipOnly.stmts.push_back(sk);
    ite.right = std::make_shared<Program>(std::move(skipOnly));
    unrolled.stmts.push_back(std::move(ite));
  }

  std::vector<Symbol> vars = collect_variables(unrolled);
  SymbolSet guardVars;
  loop.guard->collect_vars(guardVars);
  for (const auto& v : guardVars) {
    bool seen = false;
    for (const auto& t : vars)
      if (t.name == v.name) seen = true;
    if (!seen) vars.push_back(v);
  }
  SymbolSet avoid = program_symbols(unrolled);
  SopContext ctx = make_sop_context(vars, avoid);
  Pgf generic = sop_input(ctx);
  generic.vars = vars;

  Pgf lhs = transform_program(inv, generic);
  Pgf rhs = transform_program(unrolled, generic);
  Expr diff = lhs.expr.sub(rhs.expr);
  if (!diff.is_zero()) return refute(Verdict::Condition::Unrolling, diff, ctx);

  // Exit condition: the invariant's output has no guard-true mass; rules out
  // divergence-absorbing fixed points of the unrolling identity.
  Pgf stuck = filter_event(lhs, *loop.guard);
  if (!stuck.expr.is_zero())
    return refute(Verdict::Condition::Exit, stuck.expr, ctx);

  return Verdict::ok();
}

LoopHandler verifying_loop_handler() {
  return [](const Stmt& loop, const Pgf& f) -> Pgf {
    if (contains_while(*loop.right))
      throw Error(ErrorCode::UnsupportedConstruct,
                  loop.pos.str() + ": nested loops are not supported");
    Verdict v = check_invariant(loop);
    if (!v.verified) throw InvariantRefutedError(loop.pos, v);
    return transform_program(*loop.invariant, f, verifying_loop_handler());
  };
}

LoopHandler trusting_loop_handler() {
  return [](const Stmt& loop, const Pgf& f) -> Pgf {
    if (!loop.invariant)
      throw Error(ErrorCode::UnsupportedConstruct,
                  loop.pos.str() + ": loop has no invariant annotation");
    return transform_program(*loop.invariant, f, trusting_loop_handler());
  };
}

Pgf run_program(const Program& p, Pgf input) {
  return transform_program(p, std::move(input), verifying_loop_handler());
}

}  // namespace pgfi
