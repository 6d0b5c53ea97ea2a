#include "doctest.h"
#include "gcv/converge.hpp"
#include "gcv/report.hpp"
#include "gcv/trace_io.hpp"
#include "gcv/transform.hpp"
#include "util.hpp"

using namespace gcv;

TEST_CASE("structural/identical rules need no steps") {
  Grammar m = G("root s\ns ::= a b ;\n");
  Trace t = structuralResolve(m, m);
  CHECK(t.empty());
}

TEST_CASE("structural/star against plus narrows, plus against star widens") {
  Grammar master = G("root s\ns ::= a+ b* ;\n");
  Grammar servant = G("root s\ns ::= a* b+ ;\n");
  Trace t = structuralResolve(master, servant);
  REQUIRE(t.size() == 2);
  CHECK(printStep(t[0]) == "narrow(s, 1, [0]) ;");
  CHECK(printStep(t[1]) == "widen(s, 1, [1]) ;");
  // and the steps actually land the servant on the master
  Grammar aligned = applyTrace(servant, t, Direction::Forward);
  CHECK(grammarIdentical(aligned, master));
}

TEST_CASE("structural/reordered atoms get one permute") {
  Grammar master = G("root s\ns ::= a b+ c ;\n");
  Grammar servant = G("root s\ns ::= c a b+ ;\n");
  Trace t = structuralResolve(master, servant);
  REQUIRE(t.size() == 1);
  CHECK(printStep(t[0]) == "permute(s, [2 3 1]) ;");
  CHECK(grammarIdentical(applyTrace(servant, t, Direction::Forward), master));
}

TEST_CASE("structural/ambiguous duplicates pair leftmost first") {
  Grammar master = G("root s\ns ::= a a+ ;\n");
  Grammar servant = G("root s\ns ::= a+ a ;\n");
  Trace t = structuralResolve(master, servant);
  CHECK(grammarIdentical(applyTrace(servant, t, Direction::Forward), master));
}

TEST_CASE("structural/chain groups compare as target multisets") {
  Grammar master = G("root s\ns ::= a ;\ns ::= b ;\na ::= x y ;\nb ::= x ;\n");
  Grammar servant = G("root s\ns ::= b ;\ns ::= a ;\na ::= x y ;\nb ::= x ;\n");
  // different rule order, same targets: nothing to do
  CHECK(structuralResolve(master, servant).empty());
}

TEST_CASE("structural/residual differences are refused loudly") {
  Grammar master = G("root s\ns ::= a b ;\n");
  Grammar servant = G("root s\ns ::= a a ;\n");
  CHECK_THROWS_WITH_AS(structuralResolve(master, servant),
                       doctest::Contains("s"), StructError);

  Grammar extra = G("root s\ns ::= a b ;\ns ::= c ;\n");
  CHECK_THROWS_AS(structuralResolve(master, extra), StructError);
}

TEST_CASE("converge/end to end with renames and alignment") {
  Grammar master = G(R"gin(
root prog
prog ::= stmt+ ;
stmt ::= name expr ;
expr ::= name ;
expr ::= num ;
)gin");
  Grammar servant = G(R"gin(
root p
p ::= s* ;
s ::= e n ;
e ::= n ;
e ::= v ;
)gin");
  ConvergenceResult r = converge(master, servant, "toy");
  REQUIRE(r.verdict.converged);
  CHECK(r.servantName == "toy");
  CHECK(r.alternatives == 0);
  CHECK(printTrace(r.renameTrace) ==
        "rename(e, expr) ;\n"
        "rename(n, name) ;\n"
        "rename(p, prog) ;\n"
        "rename(s, stmt) ;\n"
        "rename(v, num) ;\n");
  CHECK(printTrace(r.structuralTrace) ==
        "narrow(prog, 1, []) ;\n"
        "permute(stmt, [2 1]) ;\n");

  // the recorded pipeline replays onto the aligned servant
  Grammar replay = servant;
  replay = applyTrace(replay, r.mutationTrace, Direction::Forward);
  replay = applyTrace(replay, r.servantAnfTrace, Direction::Forward);
  replay = applyTrace(replay, r.renameTrace, Direction::Forward);
  replay = applyTrace(replay, r.structuralTrace, Direction::Forward);
  CHECK(grammarIdentical(replay, r.servantFinal));
  CHECK(nominallyEquivalent(replay, r.masterAnf));
}

TEST_CASE("converge/name swaps go through a temporary") {
  Grammar master = G(R"gin(
root prog
prog ::= expr+ ;
expr ::= name stmt ;
stmt ::= name ;
stmt ::= num ;
)gin");
  // same grammar with expr and stmt trading names
  Grammar servant = G(R"gin(
root prog
prog ::= stmt+ ;
stmt ::= name expr ;
expr ::= name ;
expr ::= num ;
)gin");
  ConvergenceResult r = converge(master, servant, "swap");
  REQUIRE(r.verdict.converged);
  CHECK(printTrace(r.renameTrace) ==
        "rename(expr, tmp_1) ;\n"
        "rename(stmt, expr) ;\n"
        "rename(tmp_1, stmt) ;\n");
}

TEST_CASE("converge/incompatible servants fail with a frontier") {
  Grammar master = G("root s\ns ::= a+ ;\na ::= b c ;\n");
  Grammar servant = G("root t\nt ::= x ;\nx ::= y ;\n");
  ConvergenceResult r = converge(master, servant, "bad");
  REQUIRE_FALSE(r.verdict.converged);
  CHECK(r.verdict.reason.find("no vocabulary correspondence") == 0);
  CHECK(r.verdict.reason.find("while matching 't' against 's'") !=
        std::string::npos);
  REQUIRE(r.frontier.has_value());
  CHECK(r.frontier->first == "t");
  CHECK(r.frontier->second == "s");
}

TEST_CASE("converge/servant that cannot normalize fails gracefully") {
  Grammar master = G("root s\ns ::= a ;\na ::= b ;\n");
  Grammar servant = G("root t\nt ::= eps ;\n");
  ConvergenceResult r = converge(master, servant, "degenerate");
  REQUIRE_FALSE(r.verdict.converged);
  CHECK(r.verdict.reason.find("normalization failed") == 0);
}

TEST_CASE("converge/master that cannot normalize is the caller's problem") {
  Grammar master = G("root s\ns ::= eps ;\n");
  Grammar servant = G("root t\nt ::= x ;\nx ::= y ;\n");
  CHECK_THROWS_AS(converge(master, servant, "x"), NormalizeError);
}

TEST_CASE("report/sections are deterministic and name their verdicts") {
  Grammar master = G("root s\ns ::= a+ ;\na ::= b c ;\n");
  Grammar good = G("root t\nt ::= u+ ;\nu ::= v w ;\n");
  Grammar bad = G("root t\nt ::= x ;\nx ::= y ;\n");
  std::vector<ConvergenceResult> results;
  results.push_back(converge(master, good, "good"));
  results.push_back(converge(master, bad, "bad"));
  std::string report = renderReport(master, results);

  CHECK(report.find("## good: CONVERGED") != std::string::npos);
  CHECK(report.find("## bad: FAILED") != std::string::npos);
  CHECK(report.find("mismatch frontier: `t` vs `s`") != std::string::npos);
  CHECK(report.find("| `s ::= a+` | `{a:{plus}}` |") != std::string::npos);
  // section order follows the input order
  CHECK(report.find("## good") < report.find("## bad"));

  std::vector<ConvergenceResult> again;
  again.push_back(converge(master, good, "good"));
  again.push_back(converge(master, bad, "bad"));
  CHECK(renderReport(master, again) == report);

  SUBCASE("no servants leaves just the reference section") {
    std::string lone = renderReport(master, {});
    CHECK(lone.find("Reference grammar:") != std::string::npos);
    CHECK(lone.find("root `s`") != std::string::npos);
    CHECK(lone.find("##") == std::string::npos);
  }
}
