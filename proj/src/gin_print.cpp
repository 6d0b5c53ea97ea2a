#include "gcv/gin.hpp"

namespace gcv {

namespace {

// Binding strength, loosest to tightest. A node is parenthesized when its
// own level is below what the context requires.
enum Level : int { kChoice = 0, kSequence = 1, kSelector = 2, kPostfix = 3, kAtom = 4 };

int levelOf(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Choice:
      return kChoice;
    case ExprKind::Sequence:
      return kSequence;
    case ExprKind::Selector:
      return kSelector;
    case ExprKind::Optional:
    case ExprKind::Star:
    case ExprKind::Plus:
      return kPostfix;
    default:
      return kAtom;
  }
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void render(const Expr& e, int need, std::string& out) {
  bool parens = levelOf(e) < need;
  if (parens) out.push_back('(');
  switch (e.kind()) {
    case ExprKind::Epsilon:
      out += "eps";
      break;
    case ExprKind::Terminal:
      out += quote(e.atom());
      break;
    case ExprKind::Nonterminal:
      out += e.atom();
      break;
    case ExprKind::Sequence:
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i) out.push_back(' ');
        render(e.children()[i], kSelector, out);
      }
      break;
    case ExprKind::Choice:
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i) out += " | ";
        render(e.children()[i], kSequence, out);
      }
      break;
    case ExprKind::Selector:
      out += e.atom();
      out += "::";
      render(e.children().front(), kPostfix, out);
      break;
    case ExprKind::Optional:
      render(e.children().front(), kAtom, out);
      out.push_back('?');
      break;
    case ExprKind::Star:
      render(e.children().front(), kAtom, out);
      out.push_back('*');
      break;
    case ExprKind::Plus:
      render(e.children().front(), kAtom, out);
      out.push_back('+');
      break;
    case ExprKind::SepListPlus:
    case ExprKind::SepListStar:
      out += "{ ";
      render(e.children()[0], kSelector, out);
      out.push_back(' ');
      render(e.children()[1], kSelector, out);
      out += " }";
      out.push_back(e.kind() == ExprKind::SepListPlus ? '+' : '*');
      break;
  }
  if (parens) out.push_back(')');
}

}  // namespace

std::string printExpr(const Expr& e) {
  std::string out;
  render(e, kChoice, out);
  return out;
}

std::string printGrammar(const Grammar& g) {
  std::string out;
  for (const auto& r : g.roots()) {
    out += "root ";
    out += r;
    out.push_back('\n');
  }
  for (const auto& p : g.productions()) {
    if (p.label) {
      out.push_back('[');
      out += *p.label;
      out += "] ";
    }
    out += p.lhs;
    out += " ::= ";
    render(p.rhs, kChoice, out);
    out += " ;\n";
  }
  return out;
}

}  // namespace gcv
