#pragma once

#include <map>
#include <string>

#include "amlab/term.hpp"

namespace amlab {

// The standard combinator vocabulary: I, K, S, omega, Omega, pair and
// the Church numerals c0..c9. All entries are closed.
const std::map<std::string, TermPtr>& prelude();

// nullptr when the name is not a prelude constant.
TermPtr prelude_lookup(const std::string& name);

TermPtr church(unsigned n);

}  // namespace amlab
