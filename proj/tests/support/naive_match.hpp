#pragma once

#include <map>
#include <string>
#include <vector>

#include "gcv/grammar.hpp"

namespace gcv::testsupport {

// Reference matcher. Enumerates every bijection between the two
// vocabularies and keeps those under which the roots correspond and the
// productions of each pair can themselves be paired signature-for-signature.
// Factorial in the vocabulary size, so callers keep inputs at toy size.
// Inputs are expected in abstract normal form.
std::vector<std::map<std::string, std::string>> naiveMatches(
    const Grammar& master, const Grammar& servant);

}  // namespace gcv::testsupport
