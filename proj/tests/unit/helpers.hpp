#pragma once

#include <string>

#include "pie/formula.hpp"
#include "pie/syntax.hpp"

inline pie::Formula F(const std::string& s) { return pie::parse_formula(s); }
inline std::string P(const pie::Formula& f) { return pie::print_formula(f); }
