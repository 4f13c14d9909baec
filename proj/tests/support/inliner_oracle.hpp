#pragma once

#include <set>
#include <string>
#include <vector>

#include "ktaint/ir.hpp"
#include "ktaint/options.hpp"
#include "ktaint/spec_dsl.hpp"

namespace ktaint::testing {

/// Brute-force reference: every method is run as an entry point and every
/// in-program call is expanded in place, up to `depth` nested calls. Only
/// concrete taint is tracked. Returns `query src-file:line sink-file:line`.
std::set<std::string> inline_oracle(const IrProgram& program,
                                    const std::vector<NormalizedQuery>& queries,
                                    const Options& options, int depth = 3);

}  // namespace ktaint::testing
