#include "doctest.h"
#include "gcv/trace_io.hpp"
#include "gcv/transform.hpp"
#include "util.hpp"

using namespace gcv;

TEST_CASE("trace io/short forms parse and print identically") {
  std::string text =
      "rename(a, b) ;\n"
      "unlabel(s, 1, one) ;\n"
      "unselect(s, 2, [0 1], x) ;\n"
      "abstract(s, 1, [0] \"(\", [2] \")\") ;\n"
      "desugarSepPlus(s, 1, []) ;\n"
      "extract(pair, <a b>, [t u]) ;\n"
      "inline(a) ;\n"
      "vertical(s) ;\n"
      "widen(s, 1, [0]) ;\n"
      "narrow(s, 2) ;\n"
      "permute(s, [3 1 2]) ;\n"
      "deyaccify(x, left) ;\n"
      "removeUnreachable(b) ;\n"
      "reroot([a b]) ;\n"
      "eliminateEpsilon(a) ;\n";
  Trace t = parseTrace(text);
  REQUIRE(t.size() == 15);
  CHECK(printTrace(t) == text);
}

TEST_CASE("trace io/recorded forms round trip byte for byte") {
  Grammar g = G(R"gin(
root s
[one] s ::= x::("(" a ")") {a ";"}+ ;
a ::= a "," ;
a ::= b ;
)gin");
  Trace steps = {
      UnlabelStep{"s", 1, "one"},
      UnselectStep{"s", 1, Path{0}, "x", {}},
      // dropping the selector flattens the group into the outer sequence,
      // so the literals sit at top-level positions 0 and 2
      AbstractStep{"s", 1, {AbstractRemoval{Path{0}, "("},
                            AbstractRemoval{Path{2}, ")"}}, {}},
      DesugarSepStep{true, "s", 1, Path{1}, {}, {}},
      DeyaccifyStep{"a", true, false, 0, 0, {}, {}},
      RenameStep{"a", "item"},
  };
  Grammar cur = g;
  Trace recorded;
  for (const auto& s : steps) {
    auto [next, rec] = applyForwardRecording(cur, s);
    cur = next;
    recorded.push_back(rec);
  }
  std::string text = printTrace(recorded);
  Trace back = parseTrace(text);
  REQUIRE(back.size() == recorded.size());
  CHECK(printTrace(back) == text);
  // and the reparsed trace still replays in both directions
  CHECK(grammarIdentical(applyTrace(g, back, Direction::Forward), cur));
  CHECK(grammarIdentical(applyTrace(cur, back, Direction::Backward), g));
}

TEST_CASE("trace io/absent labels print as a dash") {
  Grammar g = G("root s\ns ::= a ;\na ::= b c ;\n");
  auto [r, rec] = applyForwardRecording(g, InlineStep{"a", false, 0, {}, {}, {}});
  (void)r;
  std::string line = printStep(rec);
  CHECK(line.find(", -, <b c>") != std::string::npos);
  CHECK(printStep(parseTrace(line + "\n").at(0)) == line);
}

TEST_CASE("trace io/whitespace and comments are tolerated") {
  Trace t = parseTrace(
      "# a header remark\n"
      "  rename( a ,\tb )\n"
      "     ;\n"
      "\n"
      "# done\n");
  REQUIRE(t.size() == 1);
  CHECK(std::get<RenameStep>(t[0]) == RenameStep{"a", "b"});
}

TEST_CASE("trace io/parse errors name the offence") {
  CHECK_THROWS_WITH_AS(parseTrace("frobnicate(a) ;\n"),
                       doctest::Contains("frobnicate"), ParseError);
  CHECK_THROWS_WITH_AS(parseTrace("rename(a) ;\n"),
                       doctest::Contains("too few"), ParseError);
  CHECK_THROWS_WITH_AS(parseTrace("rename(a, b)\nrename(c, d) ;\n"),
                       doctest::Contains("';'"), ParseError);
  CHECK_THROWS_AS(parseTrace("widen(s, zero) ;\n"), ParseError);
  CHECK_THROWS_AS(parseTrace("deyaccify(x, sideways) ;\n"), ParseError);
}

TEST_CASE("trace io/empty trace is an empty file") {
  CHECK(parseTrace("").empty());
  CHECK(printTrace({}).empty());
}
