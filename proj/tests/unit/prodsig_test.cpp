#include <random>

#include "doctest.h"
#include "gcv/normalize.hpp"
#include "gcv/prodsig.hpp"
#include "util.hpp"

using namespace gcv;

namespace {

Production rule(const std::string& text) {
  return G("root s\n" + text + "\n").productions().back();
}

}  // namespace

TEST_CASE("footprint/markers per decoration") {
  CHECK(footprintToString(footprint("n", rule("s ::= n ;").rhs)) == "{one}");
  CHECK(footprintToString(footprint("n", rule("s ::= n? ;").rhs)) == "{opt}");
  CHECK(footprintToString(footprint("n", rule("s ::= n+ ;").rhs)) == "{plus}");
  CHECK(footprintToString(footprint("n", rule("s ::= n* ;").rhs)) == "{star}");
}

TEST_CASE("footprint/sequences union as multisets") {
  Footprint f = footprint("n", rule("s ::= n n* m ;").rhs);
  CHECK(footprintToString(f) == "{one,star}");
  CHECK(f.size() == 2);
  Footprint two = footprint("n", rule("s ::= n n ;").rhs);
  CHECK(footprintToString(two) == "{one,one}");
}

TEST_CASE("footprint/selectors are transparent, everything else opaque") {
  CHECK(footprintToString(footprint("n", rule("s ::= x::n ;").rhs)) == "{one}");
  CHECK(footprintToString(footprint("n", rule("s ::= x::n+ ;").rhs)) ==
        "{plus}");
  // a decorated compound is not a decorated nonterminal
  CHECK(footprint("n", rule("s ::= (n m)+ ;").rhs).empty());
  CHECK(footprint("n", rule("s ::= (n | m) ;").rhs).empty());
  CHECK(footprint("n", rule("s ::= {n \",\"}+ ;").rhs).empty());
  CHECK(footprint("n", rule("s ::= \"n\" ;").rhs).empty());
  CHECK(footprint("n", rule("s ::= eps ;").rhs).empty());
  // but a selector around the decoration is still transparent
  CHECK(footprintToString(footprint("n", rule("s ::= x::(n+) ;").rhs)) ==
        "{plus}");
}

TEST_CASE("footprint/equivalence blurs plus against star only") {
  Footprint oneStar = footprint("n", rule("s ::= n n* ;").rhs);
  Footprint onePlus = footprint("n", rule("s ::= n n+ ;").rhs);
  Footprint one = footprint("n", rule("s ::= n ;").rhs);
  Footprint opt = footprint("n", rule("s ::= n? ;").rhs);
  CHECK(footprintEquiv(oneStar, onePlus));
  CHECK_FALSE(footprintEquiv(one, opt));
  CHECK_FALSE(footprintEquiv(oneStar, one));

  SUBCASE("blurring is idempotent") {
    CHECK(plusToStar(plusToStar(oneStar)) == plusToStar(oneStar));
    CHECK(plusToStar(onePlus) == plusToStar(oneStar));
  }
  SUBCASE("equivalence relation on sampled footprints") {
    std::vector<Footprint> all = {oneStar, onePlus, one, opt,
                                  footprint("n", rule("s ::= n* ;").rhs)};
    for (const auto& a : all) CHECK(footprintEquiv(a, a));
    for (const auto& a : all)
      for (const auto& b : all) {
        CHECK(footprintEquiv(a, b) == footprintEquiv(b, a));
        for (const auto& c : all)
          if (footprintEquiv(a, b) && footprintEquiv(b, c))
            CHECK(footprintEquiv(a, c));
      }
  }
}

TEST_CASE("prodsig/signature lines match the worked example") {
  Grammar g = G(R"gin(
root P
P ::= F+ ;
F ::= S S* E ;
)gin");
  CHECK(prodsigToString(prodsig(g.productions()[0])) == "{F:{plus}}");
  CHECK(prodsigToString(prodsig(g.productions()[1])) ==
        "{E:{one}, S:{one,star}}");
}

TEST_CASE("prodsig/production equivalence reads signatures bijectively") {
  Production p = rule("s ::= a a* b ;");
  Production q = rule("s ::= x x+ y ;");
  Production r = rule("s ::= x y ;");
  CHECK(prodsigEquiv(p, q));
  CHECK_FALSE(prodsigEquiv(p, r));
}

TEST_CASE("prodsig/resolutions enumerate consistent name pairings") {
  Production p = rule("s ::= a b ;");
  Production q = rule("s ::= x y ;");
  auto rs = productionResolutions(p, q);
  // two names with identical footprints give both pairings, each augmented
  // with the lhs pair
  REQUIRE(rs.size() == 2);
  for (const auto& r : rs) {
    CHECK(r.pairs.size() == 3);
    bool lhsPaired = false;
    for (const auto& pr : r.pairs)
      lhsPaired |= (pr.left == std::optional<std::string>("s") &&
                    pr.right == std::optional<std::string>("s"));
    CHECK(lhsPaired);
  }

  SUBCASE("distinct footprints force the pairing") {
    auto forced = productionResolutions(rule("s ::= a b+ ;"),
                                        rule("s ::= x y* ;"));
    REQUIRE(forced.size() == 1);
  }
  SUBCASE("non-equivalent productions refuse") {
    CHECK_THROWS_AS(productionResolutions(rule("s ::= a ;"),
                                          rule("s ::= x y ;")),
                    MatchError);
  }
}

TEST_CASE("match/worked example resolves uniquely") {
  Grammar master = G(R"gin(
root program
program ::= function+ ;
function ::= str str+ expr ;
expr ::= int ;
expr ::= str ;
expr ::= binary ;
binary ::= expr ops expr ;
)gin");
  Grammar servant = G(R"gin(
root program2
program2 ::= function2+ ;
function2 ::= str2 str2+ expr2 ;
expr2 ::= int2 ;
expr2 ::= str2 ;
expr2 ::= binary2 ;
binary2 ::= expr2 ops2 expr2 ;
)gin");
  MatchResult r = globalResolution(master, servant);
  auto* m = std::get_if<GlobalMatch>(&r);
  REQUIRE(m != nullptr);
  CHECK(m->alternatives == 0);
  CHECK(resolutionToString(m->resolution) ==
        "binary2 -> binary\n"
        "expr2 -> expr\n"
        "function2 -> function\n"
        "int2 -> int\n"
        "ops2 -> ops\n"
        "program2 -> program\n"
        "str2 -> str\n");
}

TEST_CASE("match/symmetric shapes are counted as alternatives") {
  // two interchangeable leaf chains: either pairing works
  Grammar master = G(R"gin(
root s
s ::= a b ;
)gin");
  Grammar servant = G(R"gin(
root t
t ::= x y ;
)gin");
  MatchResult r = globalResolution(master, servant);
  auto* m = std::get_if<GlobalMatch>(&r);
  REQUIRE(m != nullptr);
  CHECK(m->alternatives == 1);
}

TEST_CASE("match/failures carry frontier and partial resolution") {
  Grammar master = G("root s\ns ::= a+ ;\n");
  Grammar servant = G("root t\nt ::= x ;\n");
  MatchResult r = globalResolution(master, servant);
  auto* f = std::get_if<MatchFailure>(&r);
  REQUIRE(f != nullptr);
  REQUIRE(f->frontier.has_value());
  CHECK(f->frontier->first == "t");
  CHECK(f->frontier->second == "s");
  CHECK(f->reason.find("signatures differ") != std::string::npos);
}

TEST_CASE("match/rejects input that is not in normal form") {
  Grammar master = G("root s\ns ::= a \"+\" ;\n");
  Grammar servant = G("root t\nt ::= x y ;\n");
  CHECK_THROWS_AS(globalResolution(master, servant), MatchError);
}

TEST_CASE("match/mini example with primes from the narrative") {
  // the classic five-rule FL core against its primed copy
  Grammar fl = G(R"gin(
root program
program ::= function+ ;
function ::= str str+ expr ;
expr ::= str ;
expr ::= int ;
expr ::= apply ;
apply ::= str expr+ ;
)gin");
  Grammar primed = G(R"gin(
root program_
program_ ::= function_+ ;
function_ ::= str_ str_+ expr_ ;
expr_ ::= str_ ;
expr_ ::= int_ ;
expr_ ::= apply_ ;
apply_ ::= str_ expr_+ ;
)gin");
  MatchResult r = globalResolution(fl, primed);
  auto* m = std::get_if<GlobalMatch>(&r);
  REQUIRE(m != nullptr);
  CHECK(m->alternatives == 0);
  for (const auto& pr : m->resolution.pairs) {
    REQUIRE(pr.left.has_value());
    REQUIRE(pr.right.has_value());
    CHECK(*pr.left == *pr.right + "_");
  }
}
