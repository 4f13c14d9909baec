#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ktaint/engine.hpp"

namespace ktaint {

inline constexpr std::string_view kToolName = "ktaint";
inline constexpr std::string_view kSarifVersion = "2.1.0";

struct RuleInfo {
  std::string id;
  std::string message;
};

std::vector<RuleInfo> rules_of(const std::vector<NormalizedQuery>& queries);

/// One block per finding followed by an `N findings` line.
std::string to_text(const std::vector<Finding>& findings);

/// SARIF subset document. Every query becomes a rule; rule ids referenced by
/// findings but absent from `rules` are added.
std::string to_sarif(const std::vector<Finding>& findings,
                     std::string_view tool_version,
                     const std::vector<RuleInfo>& rules = {});

/// Checks a document against the pinned subset schema. Returns problems,
/// empty when the document conforms.
std::vector<std::string> validate_sarif_subset(std::string_view json_text);

}  // namespace ktaint
