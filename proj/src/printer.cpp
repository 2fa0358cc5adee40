#include "pgfi/printer.hpp"

namespace pgfi {

namespace {

std::string pad(int indent) { return std::string(indent * 2, ' '); }

std::string render_block(const Program& p, int indent) {
  return "{\n" + render_program(p, indent + 1) + "\n" + pad(indent) + "}";
}

}  // namespace

std::string render_stmt(const Stmt& s, int indent) {
  std::string out = pad(indent);
  switch (s.kind) {
    case Stmt::Kind::Skip:
      return out + "skip";
    case Stmt::Kind::AssignConst:
      return out + s.var.name + " := " + std::to_string(s.value);
    case Stmt::Kind::Increment:
      return out + s.var.name + " := " + s.var.name + " + " +
             std::to_string(s.value);
    case Stmt::Kind::AddVar:
      return out + s.var.name + " := " + s.var.name + " + " + s.source.name;
    case Stmt::Kind::Sample:
      return out + s.var.name + " := " + s.dist.str();
    case Stmt::Kind::SampleAdd:
      return out + s.var.name + " := " + s.var.name + " + " + s.dist.str();
    case Stmt::Kind::Choice:
      return out + render_block(*s.left, indent) + " [" + s.prob.to_string() +
             "] " + render_block(*s.right, indent);
    case Stmt::Kind::IfElse:
      return out + "if (" + s.guard->str() + ") " +
             render_block(*s.left, indent) + " else " +
             render_block(*s.right, indent);
    case Stmt::Kind::While: {
      std::string w = out + "while (" + s.guard->str() + ")";
      if (s.invariant) w += " invariant " + render_block(*s.invariant, indent);
      return w + " " + render_block(*s.right, indent);
    }
    case Stmt::Kind::Observe:
      return out + "observe(" + s.guard->str() + ")";
  }
  return out;
}

std::string render_program(const Program& p, int indent) {
  std::string out;
  for (std::size_t i = 0; i < p.stmts.size(); ++i) {
    if (i > 0) out += ";\n";
    out += render_stmt(p.stmts[i], indent);
  }
  return out;
}

}  // namespace pgfi
