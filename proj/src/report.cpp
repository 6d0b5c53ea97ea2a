#include "gcv/report.hpp"

#include <sstream>

#include "gcv/gin.hpp"
#include "gcv/prodsig.hpp"

namespace gcv {

namespace {

void renderResolution(std::ostringstream& out, const NominalResolution& res) {
  for (const auto& p : res.pairs) {
    out << "resolution: " << (p.left ? *p.left : "-") << " -> "
        << (p.right ? *p.right : "-") << "\n";
  }
}

void renderSignatures(std::ostringstream& out, const Grammar& anf) {
  out << "| rule | signature |\n|---|---|\n";
  for (const auto& p : anf.productions()) {
    out << "| `" << p.lhs << " ::= " << printExpr(p.rhs) << "` | `"
        << prodsigToString(prodsig(p)) << "` |\n";
  }
}

}  // namespace

std::string renderReport(const Grammar& master,
                         const std::vector<ConvergenceResult>& results) {
  std::ostringstream out;
  out << "# Convergence report\n\n";
  out << "Reference grammar: " << master.nonterminals().size()
      << " nonterminals, " << master.productions().size()
      << " production rules, root `"
      << (master.roots().empty() ? "?" : master.roots().front()) << "`.\n";

  for (const auto& r : results) {
    out << "\n## " << r.servantName << ": "
        << (r.verdict.converged ? "CONVERGED" : "FAILED") << "\n\n";

    out << "| phase | steps |\n|---|---|\n";
    out << "| mutation | " << r.mutationTrace.size() << " |\n";
    out << "| servant normalization | " << r.servantAnfTrace.size() << " |\n";
    out << "| reference normalization | " << r.masterAnfTrace.size()
        << " |\n";
    out << "| renaming | " << r.renameTrace.size() << " |\n";
    out << "| structural alignment | " << r.structuralTrace.size() << " |\n";
    out << "\n";

    if (!r.verdict.converged) {
      out << r.verdict.reason << "\n";
      if (r.frontier)
        out << "\nmismatch frontier: `" << r.frontier->first << "` vs `"
            << r.frontier->second << "`\n";
      if (!r.resolution.pairs.empty()) {
        out << "\npartial correspondence reached:\n\n";
        renderResolution(out, r.resolution);
      }
      continue;
    }

    renderResolution(out, r.resolution);
    out << "\nequally valid correspondences not taken: " << r.alternatives
        << "\n";
    out << "\nnormal form of the servant after alignment:\n\n";
    renderSignatures(out, r.servantFinal);
  }
  return out.str();
}

}  // namespace gcv
