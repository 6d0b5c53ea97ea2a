#pragma once

#include <string>

#include "gcv/gin.hpp"

// shorthand for inline grammar fixtures
inline gcv::Grammar G(const std::string& text) { return gcv::parseGrammar(text); }
