#pragma once

#include <string>
#include <vector>

#include "gcv/converge.hpp"

namespace gcv {

// Markdown convergence report: a header describing the reference grammar,
// then one section per servant in the order given. Content depends only on
// the inputs, so two runs over the same files are byte-identical.
std::string renderReport(const Grammar& master,
                         const std::vector<ConvergenceResult>& results);

}  // namespace gcv
