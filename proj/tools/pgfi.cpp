// pgfi — exact inference for discrete probabilistic programs.
//
// Subcommands: infer, check-invariant, equiv, oracle-check. Exit codes are a
// stable contract: 0 ok, 1 refuted/mismatch, 2 parse error, 3 unsupported or
// invalid construct, 4 zero-mass conditioning.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pgfi/oracle.hpp"
#include "pgfi/parse.hpp"
#include "pgfi/printer.hpp"
#include "pgfi/query.hpp"
#include "pgfi/validate.hpp"
#include "pgfi/verifier.hpp"

using json = nlohmann::ordered_json;

namespace pgfi {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitRefuted = 1;
constexpr int kExitParse = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitZeroMass = 4;

struct Options {
  std::vector<std::string> files;
  std::vector<std::string> priors;      // v=dist
  std::string prior_pgf;
  std::vector<std::string> queries;
  std::vector<std::string> params;
  unsigned digits = 10;
  unsigned long truncate = 32;
  unsigned long unroll_cap = 64;
  bool json_out = false;
};

int error_code_to_exit(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse:
      return kExitParse;
    case ErrorCode::InvariantRefuted:
      return kExitRefuted;
    case ErrorCode::ZeroMassConditioning:
      return kExitZeroMass;
    default:
      return kExitUnsupported;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError(0, 0, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::set<std::string> declared_params(const Options& o) {
  return {o.params.begin(), o.params.end()};
}

Program load_program(const std::string& path, const Options& o) {
  Program p = parse_program(read_file(path));
  ValidationReport report = validate(p, declared_params(o));
  if (!report.empty()) {
    std::ostringstream msg;
    msg << path << ": program rejected:";
    for (const auto& v : report) msg << "\n  " << v.str();
    throw Error(ErrorCode::UnsupportedConstruct, msg.str());
  }
  return p;
}

// Walks top-level and branch-nested loops (not loops inside invariants,
// which the validator already rejects).
void collect_loops(const Program& p, std::vector<const Stmt*>& out) {
  for (const auto& s : p.stmts) {
    switch (s.kind) {
      case Stmt::Kind::While:
        out.push_back(&s);
        break;
      case Stmt::Kind::Choice:
      case Stmt::Kind::IfElse:
        collect_loops(*s.left, out);
        collect_loops(*s.right, out);
        break;
      default:
        break;
    }
  }
}

Expr::SymbolResolver make_resolver(const Program& p, const Options& o) {
  auto declared = declared_params(o);
  return [&p, declared](const std::string& name) -> Symbol {
    for (const auto& v : p.variables)
      if (v.name == name) return v;
    if (declared.count(name)) return parameter(name);
    throw ParseError(1, 1, "unknown identifier '" + name + "'");
  };
}

Pgf build_prior(const Program& p, const Options& o) {
  if (!o.prior_pgf.empty()) {
    Expr e = Expr::parse(o.prior_pgf, make_resolver(p, o));
    Pgf prior{e, p.variables};
    Expr mass = total_mass(prior);
    if (mass.symbols().empty() && !mass.is_one())
      throw ParseError(1, 1, "prior PGF must have total mass 1, has " +
                                 mass.to_string());
    return prior;
  }
  Pgf prior = dirac_origin(p.variables);
  for (const auto& spec : o.priors) {
    auto eq = spec.find('=');
    if (eq == std::string::npos)
      throw ParseError(1, 1, "prior must look like v=dist: '" + spec + "'");
    std::string name = spec.substr(0, eq);
    Symbol var;
    bool known = false;
    for (const auto& v : p.variables)
      if (v.name == name) {
        var = v;
        known = true;
      }
    if (!known)
      throw ParseError(1, 1, "prior names unknown variable '" + name + "'");
    Dist d = parse_dist_text(spec.substr(eq + 1));
    prior.expr = prior.expr.mul(dist_pgf(d, var));
  }
  return prior;
}

std::string witness_str(const Witness& w) {
  std::string out;
  for (const auto& [v, n] : w) {
    if (!out.empty()) out += ", ";
    out += v.name + " = " + std::to_string(n);
  }
  return out.empty() ? "empty input" : out;
}

json verdict_json(const SourcePos& pos, const Verdict& v,
                  const std::vector<Symbol>& order) {
  json j;
  j["loop"] = pos.str();
  j["verdict"] = v.verified ? "verified" : "refuted";
  if (v.verified) {
    j["condition"] = nullptr;
    j["difference"] = nullptr;
  } else {
    j["condition"] =
        v.failed == Verdict::Condition::Exit ? "exit" : "unrolling";
    j["difference"] = v.difference.to_string(&order);
  }
  return j;
}

void print_verdict(const SourcePos& pos, const Verdict& v,
                   const std::vector<Symbol>& order) {
  std::cout << "loop at " << pos.str() << ": ";
  if (v.verified) {
    std::cout << "Verified\n";
    return;
  }
  std::cout << "Refuted ("
            << (v.failed == Verdict::Condition::Exit ? "exit" : "unrolling")
            << " condition)\n"
            << "  difference: " << v.difference.to_string(&order) << "\n";
  if (v.witness)
    std::cout << "  witness: Dirac input at " << witness_str(*v.witness)
              << "\n";
}

struct QueryOutput {
  std::string descriptor;
  std::string exact;
  std::optional<std::string> decimal;
};

QueryOutput run_query(const std::string& descriptor, const Pgf& raw,
                      const Pgf& posterior, const Program& p,
                      const Options& o) {
  std::istringstream in(descriptor);
  std::string head;
  in >> head;
  std::string rest;
  std::getline(in, rest);
  while (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());

  const std::vector<Symbol>& order = p.variables;
  auto var_of = [&](const std::string& name) -> Symbol {
    for (const auto& v : p.variables)
      if (v.name == name) return v;
    throw ParseError(1, 1, "query names unknown variable '" + name + "'");
  };

  QueryOutput out;
  out.descriptor = descriptor;
  if (head == "mass") {
    QueryResult r = make_result(total_mass(raw), o.digits);
    out.exact = r.exact.to_string(&order);
    out.decimal = r.decimal;
  } else if (head == "prob") {
    EventPtr g = parse_guard_text(rest, p.variables);
    QueryResult r = posterior_prob(raw, *g, o.digits);
    out.exact = r.exact.to_string(&order);
    out.decimal = r.decimal;
  } else if (head == "mean" || head == "var") {
    std::istringstream args(rest);
    std::string name;
    if (!(args >> name)) throw ParseError(1, 1, head + " needs a variable");
    QueryResult r = moment(posterior, var_of(name), head == "mean" ? 1 : 2,
                           o.digits);
    out.exact = r.exact.to_string(&order);
    out.decimal = r.decimal;
  } else if (head == "marginal") {
    std::istringstream args(rest);
    std::vector<Symbol> keep;
    std::string name;
    while (args >> name) {
      if (!name.empty() && name.back() == ',') name.pop_back();
      keep.push_back(var_of(name));
    }
    Pgf m = marginal(posterior, keep);
    out.exact = m.expr.to_string(&order);
    out.decimal = std::nullopt;
  } else if (head == "coeffs") {
    std::istringstream args(rest);
    std::string name;
    unsigned long upto = 0;
    if (!(args >> name >> upto))
      throw ParseError(1, 1, "coeffs needs a variable and a bound");
    std::vector<Expr> cs =
        coefficients(posterior, var_of(name), static_cast<unsigned>(upto));
    std::string exact = "[";
    std::string decimal = "[";
    bool closed = true;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (i) {
        exact += ", ";
        decimal += ", ";
      }
      exact += cs[i].to_string(&order);
      if (cs[i].symbols().empty())
        decimal += approx_decimal(cs[i], {}, o.digits);
      else
        closed = false;
    }
    out.exact = exact + "]";
    out.decimal = closed ? std::make_optional(decimal + "]") : std::nullopt;
  } else {
    throw ParseError(1, 1, "unknown query '" + head + "'");
  }
  return out;
}

int cmd_infer(const Options& o) {
  Program p = load_program(o.files.at(0), o);

  std::vector<const Stmt*> loops;
  collect_loops(p, loops);
  std::vector<std::pair<SourcePos, Verdict>> verdicts;
  bool refuted = false;
  for (const Stmt* loop : loops) {
    if (contains_while(*loop->right))
      throw Error(ErrorCode::UnsupportedConstruct,
                  loop->pos.str() + ": nested loops are not supported");
    Verdict v = check_invariant(*loop);
    refuted = refuted || !v.verified;
    verdicts.emplace_back(loop->pos, v);
  }

  json j;
  if (refuted) {
    if (o.json_out) {
      j["posterior"] = nullptr;
      j["mass"] = nullptr;
      j["queries"] = json::array();
      j["invariants"] = json::array();
      for (const auto& [pos, v] : verdicts)
        j["invariants"].push_back(verdict_json(pos, v, p.variables));
      std::cout << j.dump(2) << "\n";
    } else {
      for (const auto& [pos, v] : verdicts) print_verdict(pos, v, p.variables);
    }
    return kExitRefuted;
  }

  Pgf raw = transform_program(p, build_prior(p, o), trusting_loop_handler());
  Pgf posterior = normalize(raw);
  Expr mass = total_mass(raw);

  std::vector<QueryOutput> results;
  for (const auto& q : o.queries)
    results.push_back(run_query(q, raw, posterior, p, o));

  if (o.json_out) {
    j["posterior"] = posterior.expr.to_string(&p.variables);
    j["mass"] = mass.to_string(&p.variables);
    j["queries"] = json::array();
    for (const auto& r : results) {
      json q;
      q["query"] = r.descriptor;
      q["exact"] = r.exact;
      q["decimal"] = r.decimal ? json(*r.decimal) : json(nullptr);
      j["queries"].push_back(q);
    }
    j["invariants"] = json::array();
    for (const auto& [pos, v] : verdicts)
      j["invariants"].push_back(verdict_json(pos, v, p.variables));
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& [pos, v] : verdicts) print_verdict(pos, v, p.variables);
    std::cout << "posterior: " << posterior.expr.to_string(&p.variables)
              << "\n";
    std::cout << "mass: " << mass.to_string(&p.variables) << "\n";
    for (const auto& r : results) {
      std::cout << "query " << r.descriptor << ": exact = " << r.exact;
      if (r.decimal) std::cout << ", decimal = " << *r.decimal;
      std::cout << "\n";
    }
  }
  return kExitOk;
}

int cmd_check_invariant(const Options& o) {
  Program p = load_program(o.files.at(0), o);
  std::vector<const Stmt*> loops;
  collect_loops(p, loops);
  if (loops.empty()) {
    std::cerr << "no loops in " << o.files.at(0) << "\n";
    return kExitOk;
  }
  bool allOk = true;
  json arr = json::array();
  for (const Stmt* loop : loops) {
    Verdict v = check_invariant(*loop);
    allOk = allOk && v.verified;
    if (o.json_out)
      arr.push_back(verdict_json(loop->pos, v, p.variables));
    else
      print_verdict(loop->pos, v, p.variables);
  }
  if (o.json_out) {
    json j;
    j["invariants"] = arr;
    std::cout << j.dump(2) << "\n";
  }
  return allOk ? kExitOk : kExitRefuted;
}

int cmd_equiv(const Options& o) {
  Program p1 = load_program(o.files.at(0), o);
  Program p2 = load_program(o.files.at(1), o);
  Verdict v = check_equivalence(p1, p2);
  std::vector<Symbol> order = p1.variables;
  for (const auto& s : p2.variables) {
    bool seen = false;
    for (const auto& t : order)
      if (t.name == s.name) seen = true;
    if (!seen) order.push_back(s);
  }
  if (o.json_out) {
    json j;
    j["verdict"] = v.verified ? "verified" : "refuted";
    j["difference"] = v.verified ? json(nullptr)
                                 : json(v.difference.to_string(&order));
    if (!v.verified && v.witness) {
      json w;
      for (const auto& [sym, n] : *v.witness) w[sym.name] = n;
      j["witness"] = w;
    } else {
      j["witness"] = nullptr;
    }
    std::cout << j.dump(2) << "\n";
  } else if (v.verified) {
    std::cout << "Verified: programs are equivalent\n";
  } else {
    std::cout << "Refuted\n  difference: " << v.difference.to_string(&order)
              << "\n";
    if (v.witness)
      std::cout << "  witness: Dirac input at " << witness_str(*v.witness)
                << "\n";
  }
  return v.verified ? kExitOk : kExitRefuted;
}

int cmd_oracle_check(const Options& o) {
  Program p = load_program(o.files.at(0), o);

  std::vector<const Stmt*> loops;
  collect_loops(p, loops);
  for (const Stmt* loop : loops) {
    Verdict v = check_invariant(*loop);
    if (!v.verified) {
      print_verdict(loop->pos, v, p.variables);
      return kExitRefuted;
    }
  }

  Pgf raw = transform_program(p, build_prior(p, o), trusting_loop_handler());

  StateMap input = dirac_state(p.variables, Valuation(p.variables.size(), 0));
  if (!o.priors.empty() || !o.prior_pgf.empty())
    throw Error(ErrorCode::UnsupportedConstruct,
                "oracle-check runs from the all-zero Dirac input");
  EnumerateOptions eopts;
  eopts.truncate = o.truncate;
  eopts.unroll_cap = o.unroll_cap;
  eopts.check_conservation = true;
  StateMap out = enumerate_program(p, input, eopts);
  ComparisonReport report = compare(raw, out, o.truncate);

  if (o.json_out) {
    json j;
    j["mismatches"] = json::array();
    for (const auto& mm : report.mismatches) {
      json e;
      json state;
      for (std::size_t i = 0; i < p.variables.size(); ++i)
        state[p.variables[i].name] = mm.val[i];
      e["state"] = state;
      e["exact"] = mm.exact_coeff.to_string(&p.variables);
      e["oracle"] = mm.oracle_mass.to_string(&p.variables);
      j["mismatches"].push_back(e);
    }
    j["states"] = out.entries.size();
    j["residual"] = out.residual.to_string(&p.variables);
    j["rejected"] = out.rejected.to_string(&p.variables);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "oracle states: " << out.entries.size()
              << ", residual: " << out.residual.to_string(&p.variables)
              << ", rejected: " << out.rejected.to_string(&p.variables)
              << "\n";
    if (report.ok()) {
      std::cout << "agreement up to " << o.truncate << ": OK\n";
    } else {
      for (const auto& mm : report.mismatches) {
        std::cout << "mismatch at (";
        for (std::size_t i = 0; i < p.variables.size(); ++i)
          std::cout << (i ? ", " : "") << p.variables[i].name << "="
                    << mm.val[i];
        std::cout << "): exact " << mm.exact_coeff.to_string(&p.variables)
                  << " vs oracle " << mm.oracle_mass.to_string(&p.variables)
                  << "\n";
      }
    }
  }
  return report.ok() ? kExitOk : kExitRefuted;
}

int run(int argc, char** argv) {
  CLI::App app{"pgfi — exact PGF-based inference for probabilistic programs"};
  app.require_subcommand(1);

  Options o;
  auto add_common = [&](CLI::App* c, std::size_t nfiles) {
    c->add_option("program", o.files, "program file(s)")
        ->required()
        ->expected(static_cast<int>(nfiles));
    c->add_option("--param", o.params, "declare a symbolic parameter");
    c->add_flag("--json", o.json_out, "machine-readable output");
  };

  CLI::App* infer = app.add_subcommand("infer", "run exact inference");
  add_common(infer, 1);
  infer->add_option("--prior", o.priors,
                    "prior distribution per variable, e.g. c=poisson(6)");
  infer->add_option("--prior-pgf", o.prior_pgf, "prior as a PGF expression");
  infer->add_option("--query", o.queries,
                    "query: mass | prob <guard> | mean <v> | var <v> | "
                    "marginal <vars> | coeffs <v> <n>");
  infer->add_option("--digits", o.digits, "significant digits")
      ->check(CLI::PositiveNumber);

  CLI::App* chk =
      app.add_subcommand("check-invariant", "verify loop invariants");
  add_common(chk, 1);

  CLI::App* equiv =
      app.add_subcommand("equiv", "decide equivalence of two programs");
  add_common(equiv, 2);

  CLI::App* oracle = app.add_subcommand(
      "oracle-check", "cross-validate against the truncated interpreter");
  add_common(oracle, 1);
  oracle->add_option("--truncate", o.truncate, "sampling truncation bound")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--unroll-cap", o.unroll_cap, "loop unrolling cap")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitParse;
  }

  try {
    if (infer->parsed()) return cmd_infer(o);
    if (chk->parsed()) return cmd_check_invariant(o);
    if (equiv->parsed()) return cmd_equiv(o);
    if (oracle->parsed()) return cmd_oracle_check(o);
  } catch (const InvariantRefutedError& e) {
    std::cerr << e.what() << "\n";
    return kExitRefuted;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return error_code_to_exit(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitUnsupported;
  }
  return kExitOk;
}

}  // namespace
}  // namespace pgfi

int main(int argc, char** argv) { return pgfi::run(argc, argv); }
