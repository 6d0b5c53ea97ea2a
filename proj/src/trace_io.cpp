#include "gcv/trace_io.hpp"

#include <sstream>

#include "expr_parser.hpp"
#include "lexer.hpp"

namespace gcv {

using detail::Lexer;
using detail::Tok;
using detail::Token;

namespace {

// ---- reading ---------------------------------------------------------

struct Args {
  Lexer& lx;
  std::string op;
  bool first = true;

  // Consumes the comma before every argument but the first. Returns false
  // when the closing paren has been reached (and consumes it).
  bool more() {
    if (lx.peek().type == Tok::RParen) {
      lx.next();
      return false;
    }
    if (!first) {
      if (lx.peek().type != Tok::Comma)
        lx.fail("expected ',' or ')' in " + op);
      lx.next();
    }
    first = false;
    return true;
  }

  void expectMore() {
    if (!more()) lx.fail(op + ": too few arguments");
  }

  void close() {
    if (more()) lx.fail(op + ": too many arguments");
  }

  std::string ident() {
    expectMore();
    if (lx.peek().type != Tok::Ident)
      lx.fail(op + ": expected a name, got " + describe(lx.peek()));
    return lx.next().text;
  }

  int intArg() {
    expectMore();
    if (lx.peek().type != Tok::Int)
      lx.fail(op + ": expected an integer, got " + describe(lx.peek()));
    return static_cast<int>(lx.next().value);
  }

  std::size_t posArg() {
    int v = intArg();
    if (v < 0) lx.fail(op + ": position must not be negative");
    return static_cast<std::size_t>(v);
  }

  std::optional<std::string> labelArg() {
    expectMore();
    if (lx.peek().type == Tok::Dash) {
      lx.next();
      return std::nullopt;
    }
    if (lx.peek().type != Tok::Ident)
      lx.fail(op + ": expected a label or '-', got " + describe(lx.peek()));
    return lx.next().text;
  }

  Path path() {
    expectMore();
    return pathHere();
  }

  // A bracketed path at the current token, comma handling already done.
  Path pathHere() {
    if (lx.peek().type != Tok::LBracket)
      lx.fail(op + ": expected a [path], got " + describe(lx.peek()));
    lx.next();
    Path p;
    while (lx.peek().type == Tok::Int) {
      long v = lx.next().value;
      if (v < 0) lx.fail(op + ": path steps must not be negative");
      p.push_back(static_cast<int>(v));
    }
    if (lx.peek().type != Tok::RBracket)
      lx.fail(op + ": expected ']' to close the path");
    lx.next();
    return p;
  }

  std::vector<std::string> names() {
    expectMore();
    return namesHere();
  }

  std::vector<std::string> namesHere() {
    if (lx.peek().type != Tok::LBracket)
      lx.fail(op + ": expected a [name list], got " + describe(lx.peek()));
    lx.next();
    std::vector<std::string> out;
    while (lx.peek().type == Tok::Ident) out.push_back(lx.next().text);
    if (lx.peek().type != Tok::RBracket)
      lx.fail(op + ": expected ']' to close the name list");
    lx.next();
    return out;
  }

  Expr expr() {
    expectMore();
    return exprHere();
  }

  Expr exprHere() {
    if (lx.peek().type != Tok::LAngle)
      lx.fail(op + ": expected an <expression>, got " + describe(lx.peek()));
    lx.next();
    Expr e = detail::parseExpr(lx);
    if (lx.peek().type != Tok::RAngle)
      lx.fail(op + ": expected '>' after the expression");
    lx.next();
    return e;
  }

  std::string literal() {
    if (lx.peek().type != Tok::String)
      lx.fail(op + ": expected a \"literal\", got " + describe(lx.peek()));
    return lx.next().text;
  }

  bool atEnd() { return lx.peek().type == Tok::RParen; }
};

Step readStep(Lexer& lx) {
  if (lx.peek().type != Tok::Ident)
    lx.fail("expected an operator name, got " + describe(lx.peek()));
  Token head = lx.next();
  const std::string& op = head.text;
  if (lx.peek().type != Tok::LParen)
    lx.fail("expected '(' after '" + op + "'");
  lx.next();
  Args a{lx, op};

  Step step;
  if (op == "rename") {
    RenameStep s;
    s.from = a.ident();
    s.to = a.ident();
    a.close();
    step = std::move(s);
  } else if (op == "unlabel") {
    UnlabelStep s;
    s.lhs = a.ident();
    s.index = a.intArg();
    s.label = a.ident();
    a.close();
    step = std::move(s);
  } else if (op == "unselect") {
    UnselectStep s;
    s.lhs = a.ident();
    s.index = a.intArg();
    s.path = a.path();
    s.name = a.ident();
    if (a.more()) {
      s.original = a.exprHere();
      a.close();
    }
    step = std::move(s);
  } else if (op == "abstract") {
    AbstractStep s;
    s.lhs = a.ident();
    s.index = a.intArg();
    while (a.more()) {
      if (lx.peek().type == Tok::LAngle) {
        s.original = a.exprHere();
        a.close();
        break;
      }
      AbstractRemoval r;
      r.path = a.pathHere();
      r.literal = a.literal();
      s.removals.push_back(std::move(r));
    }
    if (s.removals.empty())
      lx.fail("abstract: at least one [path] \"literal\" removal is needed");
    step = std::move(s);
  } else if (op == "desugarSepPlus" || op == "desugarSepStar") {
    DesugarSepStep s;
    s.plusList = op == "desugarSepPlus";
    s.lhs = a.ident();
    s.index = a.intArg();
    s.path = a.path();
    if (a.more()) {
      s.separator = a.exprHere();
      s.original = a.expr();
      a.close();
    }
    step = std::move(s);
  } else if (op == "extract") {
    ExtractStep s;
    s.name = a.ident();
    s.body = a.expr();
    s.scope = a.names();
    a.close();
    step = std::move(s);
  } else if (op == "inline") {
    InlineStep s;
    s.name = a.ident();
    if (a.more()) {
      s.recorded = true;
      if (lx.peek().type != Tok::Int)
        lx.fail("inline: expected the recorded position");
      s.position = static_cast<std::size_t>(lx.next().value);
      s.label = a.labelArg();
      s.rhs = a.expr();
      while (a.more()) {
        InlineRestore r;
        if (lx.peek().type != Tok::Int)
          lx.fail("inline: expected a production position");
        r.index = static_cast<std::size_t>(lx.next().value);
        r.rhs = a.expr();
        s.restores.push_back(std::move(r));
      }
    }
    step = std::move(s);
  } else if (op == "vertical") {
    VerticalStep s;
    s.name = a.ident();
    if (a.more()) {
      s.recorded = true;
      if (lx.peek().type == Tok::Dash) {
        lx.next();
      } else if (lx.peek().type == Tok::Ident) {
        s.label = lx.next().text;
      } else {
        lx.fail("vertical: expected a label or '-'");
      }
      a.close();
    }
    step = std::move(s);
  } else if (op == "widen" || op == "narrow") {
    WidenStep s;
    s.widen = op == "widen";
    s.name = a.ident();
    s.index = a.intArg();
    if (a.more()) {
      s.path = a.pathHere();
      a.close();
    }
    step = std::move(s);
  } else if (op == "permute") {
    PermuteStep s;
    s.name = a.ident();
    Path order = a.path();
    s.order.assign(order.begin(), order.end());
    a.close();
    step = std::move(s);
  } else if (op == "deyaccify") {
    DeyaccifyStep s;
    s.name = a.ident();
    std::string side = a.ident();
    if (side == "left") {
      s.leftRecursive = true;
    } else if (side == "right") {
      s.leftRecursive = false;
    } else {
      lx.fail("deyaccify: recursion side must be 'left' or 'right'");
    }
    if (a.more()) {
      s.recorded = true;
      if (lx.peek().type != Tok::Int)
        lx.fail("deyaccify: expected the recorded base position");
      s.basePosition = static_cast<std::size_t>(lx.next().value);
      s.recPosition = a.posArg();
      s.baseLabel = a.labelArg();
      s.recLabel = a.labelArg();
      a.close();
    }
    step = std::move(s);
  } else if (op == "removeUnreachable") {
    RemoveUnreachableStep s;
    s.name = a.ident();
    while (a.more()) {
      s.recorded = true;
      RemovedProduction r;
      if (lx.peek().type != Tok::Int)
        lx.fail("removeUnreachable: expected a production position");
      r.position = static_cast<std::size_t>(lx.next().value);
      r.label = a.labelArg();
      r.rhs = a.expr();
      s.removed.push_back(std::move(r));
    }
    step = std::move(s);
  } else if (op == "reroot") {
    RerootStep s;
    s.newRoots = a.names();
    if (a.more()) {
      s.oldRoots = a.namesHere();
      a.close();
    }
    step = std::move(s);
  } else if (op == "eliminateEpsilon") {
    EliminateEpsilonStep s;
    s.name = a.ident();
    if (a.more()) {
      s.recorded = true;
      if (lx.peek().type != Tok::Int)
        lx.fail("eliminateEpsilon: expected the recorded position");
      s.position = static_cast<std::size_t>(lx.next().value);
      while (a.more()) {
        EpsOccurrence occ;
        if (lx.peek().type != Tok::Int)
          lx.fail("eliminateEpsilon: expected a production position");
        occ.production = static_cast<std::size_t>(lx.next().value);
        occ.path = a.path();
        s.occurrences.push_back(std::move(occ));
      }
    }
    step = std::move(s);
  } else {
    detail::Lexer::failAt("unknown operator '" + op + "'", head.span);
  }

  if (lx.peek().type != Tok::Semi)
    lx.fail("expected ';' after the " + op + " step");
  lx.next();
  return step;
}

// ---- writing ---------------------------------------------------------

std::string quoteLiteral(const std::string& s) {
  return printExpr(Expr::terminal(s));
}

std::string pathArg(const Path& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(p[i]);
  }
  out += ']';
  return out;
}

std::string nameList(const std::vector<std::string>& names) {
  std::string out = "[";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ' ';
    out += names[i];
  }
  out += ']';
  return out;
}

std::string angled(const Expr& e) { return "<" + printExpr(e) + ">"; }

std::string labelArg(const std::optional<std::string>& label) {
  return label ? *label : "-";
}

struct Writer {
  std::ostringstream out;
  bool first = true;

  void arg(const std::string& s) {
    out << (first ? "" : ", ") << s;
    first = false;
  }
};

std::string renderStep(const Step& step) {
  Writer w;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RenameStep>) {
          w.arg(s.from);
          w.arg(s.to);
        } else if constexpr (std::is_same_v<T, UnlabelStep>) {
          w.arg(s.lhs);
          w.arg(std::to_string(s.index));
          w.arg(s.label);
        } else if constexpr (std::is_same_v<T, UnselectStep>) {
          w.arg(s.lhs);
          w.arg(std::to_string(s.index));
          w.arg(pathArg(s.path));
          w.arg(s.name);
          if (s.original) w.arg(angled(*s.original));
        } else if constexpr (std::is_same_v<T, AbstractStep>) {
          w.arg(s.lhs);
          w.arg(std::to_string(s.index));
          for (const auto& r : s.removals)
            w.arg(pathArg(r.path) + " " + quoteLiteral(r.literal));
          if (s.original) w.arg(angled(*s.original));
        } else if constexpr (std::is_same_v<T, DesugarSepStep>) {
          w.arg(s.lhs);
          w.arg(std::to_string(s.index));
          w.arg(pathArg(s.path));
          if (s.original) {
            w.arg(angled(*s.separator));
            w.arg(angled(*s.original));
          }
        } else if constexpr (std::is_same_v<T, ExtractStep>) {
          w.arg(s.name);
          w.arg(angled(s.body));
          w.arg(nameList(s.scope));
        } else if constexpr (std::is_same_v<T, InlineStep>) {
          w.arg(s.name);
          if (s.recorded) {
            w.arg(std::to_string(s.position));
            w.arg(labelArg(s.label));
            w.arg(angled(s.rhs));
            for (const auto& r : s.restores) {
              w.arg(std::to_string(r.index));
              w.arg(angled(r.rhs));
            }
          }
        } else if constexpr (std::is_same_v<T, VerticalStep>) {
          w.arg(s.name);
          if (s.recorded) w.arg(labelArg(s.label));
        } else if constexpr (std::is_same_v<T, WidenStep>) {
          w.arg(s.name);
          w.arg(std::to_string(s.index));
          if (s.path) w.arg(pathArg(*s.path));
        } else if constexpr (std::is_same_v<T, PermuteStep>) {
          w.arg(s.name);
          Path p(s.order.begin(), s.order.end());
          w.arg(pathArg(p));
        } else if constexpr (std::is_same_v<T, DeyaccifyStep>) {
          w.arg(s.name);
          w.arg(s.leftRecursive ? "left" : "right");
          if (s.recorded) {
            w.arg(std::to_string(s.basePosition));
            w.arg(std::to_string(s.recPosition));
            w.arg(labelArg(s.baseLabel));
            w.arg(labelArg(s.recLabel));
          }
        } else if constexpr (std::is_same_v<T, RemoveUnreachableStep>) {
          w.arg(s.name);
          if (s.recorded) {
            for (const auto& r : s.removed) {
              w.arg(std::to_string(r.position));
              w.arg(labelArg(r.label));
              w.arg(angled(r.rhs));
            }
          }
        } else if constexpr (std::is_same_v<T, RerootStep>) {
          w.arg(nameList(s.newRoots));
          if (s.oldRoots) w.arg(nameList(*s.oldRoots));
        } else if constexpr (std::is_same_v<T, EliminateEpsilonStep>) {
          w.arg(s.name);
          if (s.recorded) {
            w.arg(std::to_string(s.position));
            for (const auto& occ : s.occurrences) {
              w.arg(std::to_string(occ.production));
              w.arg(pathArg(occ.path));
            }
          }
        }
      },
      step);
  return opName(step) + "(" + w.out.str() + ") ;";
}

}  // namespace

Trace parseTrace(std::string_view text) {
  Lexer lx(text);
  Trace trace;
  while (lx.peek().type != Tok::End) trace.push_back(readStep(lx));
  return trace;
}

std::string printStep(const Step& step) { return renderStep(step); }

std::string printTrace(const Trace& trace) {
  std::string out;
  for (const auto& step : trace) {
    out += renderStep(step);
    out += '\n';
  }
  return out;
}

}  // namespace gcv
