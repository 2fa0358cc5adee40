#include "pgfi/parse.hpp"

#include <cctype>
#include <map>
#include <set>

namespace pgfi {

namespace {

enum class Tok {
  Ident,
  Nat,
  Assign,   // :=
  Semi,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Plus,
  Minus,
  Star,
  Slash,
  Percent,
  Eq,
  Lt,
  Comma,
  End
};

struct Token {
  Tok kind;
  std::string text;
  unsigned long value = 0;
  int line = 1, col = 1;
};

const std::set<std::string> kKeywords = {
    "skip",    "if",      "else",    "while",   "invariant", "observe",
    "not",     "and",     "true",    "bernoulli", "geometric", "poisson",
    "binomial", "uniform", "dirac"};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string text, int l, int c) {
    Token t;
    t.kind = k;
    t.text = std::move(text);
    t.line = l;
    t.col = c;
    out.push_back(std::move(t));
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    int l = line, co = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i])))
        ++i;
      std::string text = src.substr(start, i - start);
      Token t;
      t.kind = Tok::Nat;
      t.text = text;
      t.value = std::stoul(text);
      t.line = l;
      t.col = co;
      out.push_back(std::move(t));
      col += static_cast<int>(text.size());
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) ||
              src[i] == '_'))
        ++i;
      std::string text = src.substr(start, i - start);
      push(Tok::Ident, text, l, co);
      col += static_cast<int>(text.size());
      continue;
    }
    if (c == ':' && i + 1 < src.size() && src[i + 1] == '=') {
      push(Tok::Assign, ":=", l, co);
      i += 2;
      col += 2;
      continue;
    }
    Tok k;
    switch (c) {
      case ';': k = Tok::Semi; break;
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '%': k = Tok::Percent; break;
      case '=': k = Tok::Eq; break;
      case '<': k = Tok::Lt; break;
      case ',': k = Tok::Comma; break;
      default:
        throw ParseError(l, co, std::string("unexpected character '") + c +
                                    "'");
    }
    push(k, std::string(1, c), l, co);
    ++i;
    ++col;
  }
  Token end;
  end.kind = Tok::End;
  end.text = "<end of input>";
  end.line = line;
  end.col = col;
  out.push_back(std::move(end));
  return out;
}

struct Parser {
  std::vector<Token> toks;
  std::size_t pos = 0;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos + ahead;
    return i < toks.size() ? toks[i] : toks.back();
  }
  const Token& advance() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(const std::string& s) const {
    return at(Tok::Ident) && peek().text == s;
  }
  bool accept(Tok k) {
    if (at(k)) {
      ++pos;
      return true;
    }
    return false;
  }
  bool accept_ident(const std::string& s) {
    if (at_ident(s)) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    throw ParseError(t.line, t.col,
                     "expected " + expected + ", found '" + t.text + "'");
  }
  void expect(Tok k, const std::string& what) {
    if (!accept(k)) fail(what);
  }

  bool is_dist_name(const std::string& s) const {
    return s == "bernoulli" || s == "geometric" || s == "poisson" ||
           s == "binomial" || s == "uniform" || s == "dirac";
  }
  bool is_keyword(const std::string& s) const { return kKeywords.count(s) > 0; }

  Symbol prog_var() {
    if (!at(Tok::Ident) || is_keyword(peek().text))
      fail("a variable name");
    return program_var(advance().text);
  }

  unsigned long nat() {
    if (!at(Tok::Nat)) fail("a natural number");
    return advance().value;
  }

  // pexpr: +,-,*,/ and parentheses over naturals and parameter identifiers.
  Expr pexpr() { return pexpr_sum(); }
  Expr pexpr_sum() {
    Expr acc = pexpr_term();
    while (true) {
      if (accept(Tok::Plus))
        acc = acc.add(pexpr_term());
      else if (accept(Tok::Minus))
        acc = acc.sub(pexpr_term());
      else
        return acc;
    }
  }
  Expr pexpr_term() {
    Expr acc = pexpr_factor();
    while (true) {
      if (accept(Tok::Star))
        acc = acc.mul(pexpr_factor());
      else if (accept(Tok::Slash)) {
        const Token& t = peek();
        Expr d = pexpr_factor();
        if (d.is_zero()) throw ParseError(t.line, t.col, "division by zero");
        acc = acc.div(d);
      } else
        return acc;
    }
  }
  Expr pexpr_factor() {
    if (accept(Tok::Minus)) return pexpr_factor().neg();
    if (at(Tok::Nat)) return Expr::from_int(static_cast<long>(nat()));
    if (accept(Tok::LParen)) {
      Expr e = pexpr();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (at(Tok::Ident) && !is_keyword(peek().text))
      return Expr::var(parameter(advance().text));
    fail("a probability expression");
  }

  Dist dist() {
    const Token& t = peek();
    if (!at(Tok::Ident) || !is_dist_name(t.text)) fail("a distribution");
    std::string name = advance().text;
    expect(Tok::LParen, "'('");
    Dist d;
    if (name == "bernoulli" || name == "geometric" || name == "poisson") {
      Expr p = pexpr();
      d = name == "bernoulli"
              ? Dist::bernoulli(p)
              : name == "geometric" ? Dist::geometric(p) : Dist::poisson(p);
    } else if (name == "binomial") {
      unsigned long trials = nat();
      expect(Tok::Comma, "','");
      d = Dist::binomial(trials, pexpr());
    } else if (name == "uniform") {
      unsigned long a = nat();
      expect(Tok::Comma, "','");
      unsigned long b = nat();
      if (b < a)
        throw ParseError(t.line, t.col, "uniform upper bound below lower");
      d = Dist::uniform_int(a, b);
    } else {  // dirac
      d = Dist::dirac(nat());
    }
    expect(Tok::RParen, "')'");
    return d;
  }

  EventPtr guard() {
    EventPtr acc = guard_atom();
    while (accept_ident("and")) acc = Event::conjunction(acc, guard_atom());
    return acc;
  }

  EventPtr guard_atom() {
    if (accept_ident("not")) return Event::negation(guard_atom());
    if (accept_ident("true")) return Event::always();
    if (accept(Tok::LParen)) {
      EventPtr g = guard();
      expect(Tok::RParen, "')'");
      return g;
    }
    Symbol v = prog_var();
    if (accept(Tok::Eq)) return Event::eq(v, nat());
    if (accept(Tok::Lt)) return Event::lt(v, nat());
    if (accept(Tok::Percent)) {
      const Token& t = peek();
      if (nat() != 2)
        throw ParseError(t.line, t.col, "only modulus 2 is supported");
      expect(Tok::Eq, "'='");
      unsigned long r = nat();
      if (r > 1) fail("'0' or '1'");
      return r == 1 ? Event::parity_odd(v) : Event::parity_even(v);
    }
    fail("'=', '<' or '%'");
  }

  Program block() {
    expect(Tok::LBrace, "'{'");
    Program p = program();
    expect(Tok::RBrace, "'}'");
    return p;
  }

  Stmt stmt() {
    Stmt s;
    s.pos = {peek().line, peek().col};
    if (accept_ident("skip")) {
      s.kind = Stmt::Kind::Skip;
      return s;
    }
    if (at(Tok::LBrace)) {
      s.kind = Stmt::Kind::Choice;
      s.left = std::make_shared<Program>(block());
      expect(Tok::LBracket, "'['");
      s.prob = pexpr();
      expect(Tok::RBracket, "']'");
      s.right = std::make_shared<Program>(block());
      return s;
    }
    if (accept_ident("if")) {
      s.kind = Stmt::Kind::IfElse;
      expect(Tok::LParen, "'('");
      s.guard = guard();
      expect(Tok::RParen, "')'");
      s.left = std::make_shared<Program>(block());
      if (accept_ident("else")) {
        s.right = std::make_shared<Program>(block());
      } else {
        Program empty;
        Stmt sk;
        sk.kind = Stmt::Kind::Skip;
        sk.pos = s.pos;
        empty.stmts.push_back(sk);
        s.right = std::make_shared<Program>(std::move(empty));
      }
      return s;
    }
    if (accept_ident("while")) {
      s.kind = Stmt::Kind::While;
      expect(Tok::LParen, "'('");
      s.guard = guard();
      expect(Tok::RParen, "')'");
      // The invariant clause is syntactically optional so that its absence is
      // a validation finding rather than a parse failure.
      if (accept_ident("invariant"))
        s.invariant = std::make_shared<Program>(block());
      s.right = std::make_shared<Program>(block());
      return s;
    }
    if (accept_ident("observe")) {
      s.kind = Stmt::Kind::Observe;
      expect(Tok::LParen, "'('");
      s.guard = guard();
      expect(Tok::RParen, "')'");
      return s;
    }
    // Assignment forms.
    Symbol v = prog_var();
    expect(Tok::Assign, "':='");
    s.var = v;
    if (at(Tok::Nat)) {
      s.kind = Stmt::Kind::AssignConst;
      s.value = nat();
      return s;
    }
    if (at(Tok::Ident) && is_dist_name(peek().text)) {
      s.kind = Stmt::Kind::Sample;
      s.dist = dist();
      return s;
    }
    const Token& rhsTok = peek();
    Symbol r = prog_var();
    if (r.name != v.name)
      throw ParseError(rhsTok.line, rhsTok.col,
                       "right-hand side must be a constant, a distribution, "
                       "or start with '" +
                           v.name + " +'");
    expect(Tok::Plus, "'+'");
    if (at(Tok::Nat)) {
      s.kind = Stmt::Kind::Increment;
      s.value = nat();
      return s;
    }
    if (at(Tok::Ident) && is_dist_name(peek().text)) {
      s.kind = Stmt::Kind::SampleAdd;
      s.dist = dist();
      return s;
    }
    const Token& srcTok = peek();
    Symbol w = prog_var();
    if (w.name == v.name)
      throw ParseError(srcTok.line, srcTok.col,
                       "'" + v.name + " := " + v.name + " + " + v.name +
                           "' is not supported; the added variable must "
                           "differ from the target");
    s.kind = Stmt::Kind::AddVar;
    s.source = w;
    return s;
  }

  Program program() {
    Program p;
    p.stmts.push_back(stmt());
    while (accept(Tok::Semi)) {
      // Tolerate a trailing separator before '}' or end of input.
      if (at(Tok::RBrace) || at(Tok::End)) break;
      p.stmts.push_back(stmt());
    }
    return p;
  }
};

}  // namespace

Program parse_program(const std::string& source) {
  Parser p{lex(source)};
  Program prog = p.program();
  if (!p.at(Tok::End)) p.fail("';' or end of input");
  prog.variables = collect_variables(prog);
  prog.parameters = collect_parameters(prog);
  return prog;
}

EventPtr parse_guard_text(const std::string& text,
                          const std::vector<Symbol>& vars) {
  Parser p{lex(text)};
  EventPtr g = p.guard();
  if (!p.at(Tok::End)) p.fail("end of guard");
  SymbolSet used;
  g->collect_vars(used);
  for (const auto& s : used) {
    bool known = false;
    for (const auto& v : vars)
      if (v.name == s.name) known = true;
    if (!known)
      throw ParseError(1, 1, "unknown program variable '" + s.name + "'");
  }
  return g;
}

Dist parse_dist_text(const std::string& text) {
  Parser p{lex(text)};
  Dist d = p.dist();
  if (!p.at(Tok::End)) p.fail("end of distribution");
  return d;
}

}  // namespace pgfi
