#include <random>

#include "doctest.h"
#include "gcv/grammar.hpp"
#include "random_grammar.hpp"
#include "util.hpp"

using namespace gcv;

TEST_CASE("expression/structural equality and order") {
  Expr a = Expr::sequence({Expr::nonterminal("x"), Expr::terminal("+")});
  Expr b = Expr::sequence({Expr::nonterminal("x"), Expr::terminal("+")});
  CHECK(a == b);
  CHECK(a <=> b == std::strong_ordering::equal);

  // selector names take part in identity
  CHECK(Expr::selector("lhs", Expr::nonterminal("x")) !=
        Expr::selector("rhs", Expr::nonterminal("x")));
  // decoration kind does too
  CHECK(Expr::plus(Expr::nonterminal("x")) != Expr::star(Expr::nonterminal("x")));
  // terminal "x" and nonterminal x are different atoms
  CHECK(Expr::terminal("x") != Expr::nonterminal("x"));
}

TEST_CASE("grammar/symbol sets derive from roots and productions") {
  Grammar g = G(R"gin(
root s
s ::= a "+" b ;
a ::= eps ;
)gin");
  CHECK(g.nonterminals() == std::set<std::string>{"s", "a", "b"});
  CHECK(g.terminals() == std::set<std::string>{"+"});
  CHECK(g.defines("a"));
  CHECK_FALSE(g.defines("b"));  // referenced only
  CHECK(g.roots() == std::vector<std::string>{"s"});
}

TEST_CASE("grammar/identity is order sensitive, nominal equivalence is not") {
  Grammar ab = G("root s\ns ::= a ;\ns ::= b ;\n");
  Grammar ba = G("root s\ns ::= b ;\ns ::= a ;\n");
  CHECK_FALSE(grammarIdentical(ab, ba));
  CHECK(nominallyEquivalent(ab, ba));

  // multiset, not set: duplicate rules count
  Grammar aab = G("root s\ns ::= a ;\ns ::= a ;\ns ::= b ;\n");
  CHECK_FALSE(nominallyEquivalent(ab, aab));

  // labels are part of the production
  Grammar labeled = G("root s\n[one] s ::= a ;\ns ::= b ;\n");
  CHECK_FALSE(grammarIdentical(ab, labeled));
  CHECK_FALSE(nominallyEquivalent(ab, labeled));
}

TEST_CASE("grammar/identity is an equivalence relation on random samples") {
  std::mt19937 rng(4711);
  for (int i = 0; i < 50; ++i) {
    Grammar a = testsupport::randomGrammar(rng);
    Grammar b = testsupport::randomGrammar(rng);
    Grammar copy = a;
    CHECK(grammarIdentical(a, a));
    CHECK(grammarIdentical(a, copy));
    CHECK(grammarIdentical(a, b) == grammarIdentical(b, a));
  }
}

TEST_CASE("grammar/reachability and lookup") {
  Grammar g = G(R"gin(
root s
s ::= a ;
a ::= b c ;
d ::= a ;
)gin");
  CHECK(reachableFrom(g, {"s"}) == std::set<std::string>{"s", "a", "b", "c"});
  CHECK(reachableFrom(g, {"d"}) ==
        std::set<std::string>{"d", "a", "b", "c"});
  CHECK(productionsOf(g, "a").size() == 1);
  CHECK(productionsOf(g, "b").empty());  // in the vocabulary, no rules
  CHECK_THROWS_AS(productionsOf(g, "zz"), std::invalid_argument);
}

TEST_CASE("anf/classification partitions a normal form") {
  Grammar g = G(R"gin(
root program
program ::= function+ ;
function ::= str str+ expr ;
expr ::= int ;
expr ::= binary ;
binary ::= expr ops expr ;
)gin");
  ANFClassification c = classifyANF(g);
  REQUIRE(c.violations.empty());
  CHECK(c.plusSet == std::set<std::string>{"expr"});
  CHECK(c.minusSet == std::set<std::string>{"program", "function", "binary"});
  CHECK(c.bottomSet == std::set<std::string>{"str", "int", "ops"});
}

TEST_CASE("anf/single undecorated chain counts as a chain group") {
  Grammar g = G("root s\ns ::= a ;\na ::= b+ ;\n");
  ANFClassification c = classifyANF(g);
  REQUIRE(c.violations.empty());
  CHECK(c.plusSet.count("s") == 1);
  CHECK(c.minusSet.count("a") == 1);
}

TEST_CASE("anf/violations name the offender") {
  SUBCASE("terminals") {
    ANFClassification c = classifyANF(G("root s\ns ::= \"x\" ;\n"));
    REQUIRE_FALSE(c.violations.empty());
    CHECK(c.violations[0].reason.find("terminal") != std::string::npos);
  }
  SUBCASE("choice rhs") {
    ANFClassification c = classifyANF(G("root s\ns ::= a | b ;\n"));
    REQUIRE_FALSE(c.violations.empty());
    CHECK(c.violations[0].nonterminal == "s");
  }
  SUBCASE("mixed chain and structure rules") {
    ANFClassification c = classifyANF(G("root s\ns ::= a ;\ns ::= a b ;\na ::= x ;\n"));
    bool mentioned = false;
    for (const auto& v : c.violations) mentioned |= v.nonterminal == "s";
    CHECK(mentioned);
  }
  SUBCASE("decorated compound") {
    ANFClassification c = classifyANF(G("root s\ns ::= (a b)+ ;\n"));
    CHECK_FALSE(c.violations.empty());
  }
  SUBCASE("undefined root") {
    ANFClassification c = classifyANF(G("root s\na ::= s ;\n"));
    CHECK_FALSE(c.violations.empty());
  }
}
