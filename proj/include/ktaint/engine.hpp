#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ktaint/ir.hpp"
#include "ktaint/options.hpp"
#include "ktaint/spec_dsl.hpp"

namespace ktaint {

/// A statement position as reported to users.
struct Location {
  std::string class_name;
  std::string file;  // IrClass::report_uri()
  std::size_t line = 0;

  std::string to_string() const;  // file:line

  friend auto operator<=>(const Location& a, const Location& b) {
    if (auto c = a.file <=> b.file; c != 0) return c;
    if (auto c = a.line <=> b.line; c != 0) return c;
    return a.class_name <=> b.class_name;
  }
  friend bool operator==(const Location&, const Location&) = default;
};

struct Finding {
  std::string query_id;
  std::string message;
  Location source;
  Location sink;
  std::vector<Location> witness;  // source first, sink last

  friend bool operator==(const Finding&, const Finding&) = default;
};

/// Index of the first variant of `rule` whose signature matches `callee`,
/// base variant first.
std::optional<std::size_t> match_call(const MethodSignature& callee,
                                      const NormalizedRule& rule);

struct AnalysisStats {
  std::size_t summaries = 0;
  std::size_t iterations = 0;
  std::size_t statements_visited = 0;
};

/// Every method is an entry point with untainted parameters. Findings are
/// unique per (query, source, sink) and sorted by query id, source file,
/// source line, sink line.
std::vector<Finding> analyze(const IrProgram& program,
                             const std::vector<NormalizedQuery>& queries,
                             const Options& options = {},
                             AnalysisStats* stats = nullptr);

}  // namespace ktaint
