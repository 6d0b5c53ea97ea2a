#include <algorithm>

#include "expr_parser.hpp"
#include "gcv/gin.hpp"
#include "lexer.hpp"

namespace gcv {
namespace detail {

namespace {

bool startsAtom(const Token& t) {
  switch (t.type) {
    case Tok::Ident:
    case Tok::String:
    case Tok::LParen:
    case Tok::LBrace:
      return true;
    default:
      return false;
  }
}

Expr parseUnit(Lexer& lx);

Expr parseAtom(Lexer& lx) {
  Token t = lx.next();
  switch (t.type) {
    case Tok::Ident:
      if (t.text == "eps") return Expr::epsilon();
      return Expr::nonterminal(t.text);
    case Tok::String:
      return Expr::terminal(t.text);
    case Tok::LParen: {
      Expr inner = parseExpr(lx);
      Token close = lx.next();
      if (close.type != Tok::RParen)
        Lexer::failAt("expected ')', got " + describe(close), close.span);
      return inner;
    }
    case Tok::LBrace: {
      Expr element = parseUnit(lx);
      Expr separator = parseUnit(lx);
      Token close = lx.next();
      if (close.type != Tok::RBrace)
        Lexer::failAt("expected '}' after separator list, got " +
                          describe(close),
                      close.span);
      Token mark = lx.next();
      if (mark.type == Tok::Plus)
        return Expr::sepListPlus(std::move(element), std::move(separator));
      if (mark.type == Tok::Star)
        return Expr::sepListStar(std::move(element), std::move(separator));
      Lexer::failAt("separator list needs '+' or '*', got " + describe(mark),
                    mark.span);
    }
    default:
      Lexer::failAt("expected expression, got " + describe(t), t.span);
  }
}

Expr parsePostfix(Lexer& lx) {
  Expr e = parseAtom(lx);
  while (true) {
    switch (lx.peek().type) {
      case Tok::Quest:
        lx.next();
        e = Expr::optional(std::move(e));
        break;
      case Tok::Star:
        lx.next();
        e = Expr::star(std::move(e));
        break;
      case Tok::Plus:
        lx.next();
        e = Expr::plus(std::move(e));
        break;
      default:
        return e;
    }
  }
}

// selector level: name::factor, or a plain postfix expression
Expr parseUnit(Lexer& lx) {
  if (lx.peek(0).type == Tok::Ident && lx.peek(1).type == Tok::Select) {
    Token name = lx.next();
    lx.next();  // ::
    return Expr::selector(name.text, parsePostfix(lx));
  }
  return parsePostfix(lx);
}

Expr parseSequence(Lexer& lx) {
  std::vector<Expr> parts;
  parts.push_back(parseUnit(lx));
  while (startsAtom(lx.peek())) {
    // `name ::=` starts the next production, not a sequence element
    if (lx.peek(0).type == Tok::Ident && lx.peek(1).type == Tok::Define) break;
    parts.push_back(parseUnit(lx));
  }
  return Expr::sequence(std::move(parts));
}

}  // namespace

Expr parseExpr(Lexer& lx) {
  std::vector<Expr> alts;
  alts.push_back(parseSequence(lx));
  while (lx.peek().type == Tok::Pipe) {
    lx.next();
    alts.push_back(parseSequence(lx));
  }
  return Expr::choice(std::move(alts));
}

}  // namespace detail

Grammar parseGrammar(std::string_view text) {
  detail::Lexer lx(text);
  using detail::Tok;

  std::vector<std::string> roots;
  // header: root lines, at least one, before any production
  while (lx.peek(0).type == Tok::Ident && lx.peek(0).text == "root" &&
         lx.peek(1).type == Tok::Ident) {
    detail::Token kw = lx.next();
    detail::Token name = lx.next();
    if (std::find(roots.begin(), roots.end(), name.text) != roots.end())
      detail::Lexer::failAt("duplicate root declaration '" + name.text + "'",
                            name.span);
    (void)kw;
    roots.push_back(name.text);
  }
  if (roots.empty()) {
    detail::Token t = lx.peek();
    detail::Lexer::failAt("missing root declaration", t.span);
  }

  std::vector<Production> productions;
  while (lx.peek().type != Tok::End) {
    Production p;
    if (lx.peek().type == Tok::LBracket) {
      lx.next();
      detail::Token lbl = lx.next();
      if (lbl.type != Tok::Ident)
        detail::Lexer::failAt("expected label name, got " + detail::describe(lbl),
                              lbl.span);
      detail::Token close = lx.next();
      if (close.type != Tok::RBracket)
        detail::Lexer::failAt("expected ']' after label, got " +
                                  detail::describe(close),
                              close.span);
      p.label = lbl.text;
    }
    detail::Token lhs = lx.next();
    if (lhs.type != Tok::Ident)
      detail::Lexer::failAt("expected nonterminal, got " + detail::describe(lhs),
                            lhs.span);
    if (lhs.text == "root" && lx.peek().type == Tok::Ident)
      detail::Lexer::failAt("root declarations must precede the productions",
                            lhs.span);
    detail::Token def = lx.next();
    if (def.type != Tok::Define)
      detail::Lexer::failAt("expected '::=', got " + detail::describe(def),
                            def.span);
    p.lhs = lhs.text;
    p.rhs = detail::parseExpr(lx);
    detail::Token semi = lx.next();
    if (semi.type != Tok::Semi)
      detail::Lexer::failAt("expected ';', got " + detail::describe(semi),
                            semi.span);
    productions.push_back(std::move(p));
  }

  Grammar g(roots, productions);
  for (const auto& r : roots) {
    bool occurs = g.defines(r);
    for (const auto& p : g.productions())
      occurs = occurs || nonterminalsIn(p.rhs).count(r) > 0;
    if (!occurs)
      throw ParseError("undeclared root '" + r + "' (occurs in no production)",
                       {1, 1});
  }
  return g;
}

}  // namespace gcv
