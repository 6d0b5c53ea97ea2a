#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gcv/converge.hpp"
#include "gcv/gin.hpp"
#include "gcv/normalize.hpp"
#include "gcv/prodsig.hpp"
#include "gcv/report.hpp"
#include "gcv/trace_io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kNoMatch = 1;   // convergence or match failure
constexpr int kBadInput = 2;  // parse, I/O, or unusable-input errors

int usage(std::ostream& out) {
  out << "usage: gcv <command> [arguments]\n"
         "\n"
         "commands:\n"
         "  check-anf <grammar>\n"
         "      classify against the abstract normal form; list violations\n"
         "  normalize <grammar> [--out <file>] [--trace <file>]\n"
         "      rewrite into abstract normal form\n"
         "  prodsig <grammar>\n"
         "      print the signature of every production rule\n"
         "  match <reference> <servant>\n"
         "      infer the nonterminal correspondence between two normal forms\n"
         "  converge <reference> <servant>... [--report <file>] [--traces <dir>]\n"
         "      run the full convergence pipeline and write the report\n"
         "  apply <grammar> <trace> [--backward] [--out <file>]\n"
         "      replay a transformation script over a grammar\n";
  return kBadInput;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << content;
  if (!out) throw std::runtime_error(path + ": write failed");
}

gcv::Grammar loadGrammar(const std::string& path) {
  try {
    return gcv::parseGrammar(slurp(path));
  } catch (const gcv::ParseError& e) {
    throw std::runtime_error(path + ":" + e.what());
  }
}

gcv::Trace loadTrace(const std::string& path) {
  try {
    return gcv::parseTrace(slurp(path));
  } catch (const gcv::ParseError& e) {
    throw std::runtime_error(path + ":" + e.what());
  }
}

std::string stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

void joinNames(std::ostream& out, const std::set<std::string>& names) {
  bool first = true;
  for (const auto& n : names) {
    if (!first) out << ' ';
    out << n;
    first = false;
  }
  out << '\n';
}

int cmdCheckAnf(const std::vector<std::string>& args) {
  if (args.size() != 1) return usage(std::cerr);
  gcv::Grammar g = loadGrammar(args[0]);
  gcv::ANFClassification cls = gcv::classifyANF(g);
  if (!cls.violations.empty()) {
    for (const auto& v : cls.violations) {
      if (!v.nonterminal.empty()) std::cout << v.nonterminal << ": ";
      std::cout << v.reason << "\n";
    }
    return kNoMatch;
  }
  std::cout << "chains: ";
  joinNames(std::cout, cls.plusSet);
  std::cout << "structures: ";
  joinNames(std::cout, cls.minusSet);
  std::cout << "undefined: ";
  joinNames(std::cout, cls.bottomSet);
  return kOk;
}

int cmdNormalize(const std::vector<std::string>& args) {
  std::string in, outPath, tracePath;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out" && i + 1 < args.size()) {
      outPath = args[++i];
    } else if (args[i] == "--trace" && i + 1 < args.size()) {
      tracePath = args[++i];
    } else if (in.empty() && !args[i].starts_with("--")) {
      in = args[i];
    } else {
      return usage(std::cerr);
    }
  }
  if (in.empty()) return usage(std::cerr);
  gcv::Grammar g = loadGrammar(in);
  gcv::NormalizationResult r = gcv::normalize(g);
  std::string text = gcv::printGrammar(r.normalized);
  if (outPath.empty())
    std::cout << text;
  else
    spill(outPath, text);
  if (!tracePath.empty()) spill(tracePath, gcv::printTrace(r.trace));
  return kOk;
}

int cmdProdsig(const std::vector<std::string>& args) {
  if (args.size() != 1) return usage(std::cerr);
  gcv::Grammar g = loadGrammar(args[0]);
  for (const auto& p : g.productions())
    std::cout << p.lhs << " :: " << gcv::prodsigToString(gcv::prodsig(p))
              << "\n";
  return kOk;
}

int cmdMatch(const std::vector<std::string>& args) {
  if (args.size() != 2) return usage(std::cerr);
  gcv::Grammar master = loadGrammar(args[0]);
  gcv::Grammar servant = loadGrammar(args[1]);
  gcv::MatchResult r = gcv::globalResolution(master, servant);
  if (auto* failure = std::get_if<gcv::MatchFailure>(&r)) {
    std::cerr << "match failed: " << failure->reason << "\n";
    if (failure->frontier)
      std::cerr << "while matching '" << failure->frontier->first
                << "' against '" << failure->frontier->second << "'\n";
    if (!failure->partial.pairs.empty())
      std::cerr << "partial correspondence:\n"
                << gcv::resolutionToString(failure->partial);
    return kNoMatch;
  }
  std::cout << gcv::resolutionToString(std::get<gcv::GlobalMatch>(r).resolution);
  return kOk;
}

int cmdConverge(const std::vector<std::string>& args) {
  std::string reportPath, tracesDir;
  std::vector<std::string> inputs;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--report" && i + 1 < args.size()) {
      reportPath = args[++i];
    } else if (args[i] == "--traces" && i + 1 < args.size()) {
      tracesDir = args[++i];
    } else if (!args[i].starts_with("--")) {
      inputs.push_back(args[i]);
    } else {
      return usage(std::cerr);
    }
  }
  if (inputs.size() < 2) return usage(std::cerr);

  gcv::Grammar master = loadGrammar(inputs[0]);
  std::vector<std::string> names;
  std::vector<gcv::Grammar> servants;
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    names.push_back(stem(inputs[i]));
    servants.push_back(loadGrammar(inputs[i]));
  }

  // independent pipelines; report sections keep the input order
  std::vector<std::future<gcv::ConvergenceResult>> jobs;
  for (std::size_t i = 0; i < servants.size(); ++i)
    jobs.push_back(std::async(std::launch::async, [&, i] {
      return gcv::converge(master, servants[i], names[i]);
    }));
  std::vector<gcv::ConvergenceResult> results;
  for (auto& job : jobs) results.push_back(job.get());

  if (!tracesDir.empty()) {
    std::filesystem::create_directories(tracesDir);
    auto dir = std::filesystem::path(tracesDir);
    for (const auto& r : results) {
      spill((dir / (r.servantName + ".mutate.xbgf")).string(),
            gcv::printTrace(r.mutationTrace));
      spill((dir / (r.servantName + ".anf.xbgf")).string(),
            gcv::printTrace(r.servantAnfTrace));
      spill((dir / (r.servantName + ".rename.xbgf")).string(),
            gcv::printTrace(r.renameTrace));
      spill((dir / (r.servantName + ".struct.xbgf")).string(),
            gcv::printTrace(r.structuralTrace));
    }
  }

  std::string report = gcv::renderReport(master, results);
  if (reportPath.empty())
    std::cout << report;
  else
    spill(reportPath, report);

  bool allConverged = true;
  for (const auto& r : results) {
    if (!r.verdict.converged) {
      allConverged = false;
      std::cerr << r.servantName << ": " << r.verdict.reason << "\n";
    }
  }
  return allConverged ? kOk : kNoMatch;
}

int cmdApply(const std::vector<std::string>& args) {
  std::string gPath, tPath, outPath;
  bool backward = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--backward") {
      backward = true;
    } else if (args[i] == "--out" && i + 1 < args.size()) {
      outPath = args[++i];
    } else if (gPath.empty() && !args[i].starts_with("--")) {
      gPath = args[i];
    } else if (tPath.empty() && !args[i].starts_with("--")) {
      tPath = args[i];
    } else {
      return usage(std::cerr);
    }
  }
  if (gPath.empty() || tPath.empty()) return usage(std::cerr);
  gcv::Grammar g = loadGrammar(gPath);
  gcv::Trace t = loadTrace(tPath);
  gcv::Grammar result = gcv::applyTrace(
      g, t, backward ? gcv::Direction::Backward : gcv::Direction::Forward);
  std::string text = gcv::printGrammar(result);
  if (outPath.empty())
    std::cout << text;
  else
    spill(outPath, text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) return usage(std::cerr);
  std::string cmd = argv[1];
  std::vector<std::string> args(argv + 2, argv + argc);
  try {
    if (cmd == "check-anf") return cmdCheckAnf(args);
    if (cmd == "normalize") return cmdNormalize(args);
    if (cmd == "prodsig") return cmdProdsig(args);
    if (cmd == "match") return cmdMatch(args);
    if (cmd == "converge") return cmdConverge(args);
    if (cmd == "apply") return cmdApply(args);
    if (cmd == "--help" || cmd == "help") {
      usage(std::cout);
      return kOk;
    }
    std::cerr << "gcv: unknown command '" << cmd << "'\n";
    return usage(std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "gcv: " << e.what() << "\n";
    return kBadInput;
  }
}
