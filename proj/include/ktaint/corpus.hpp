#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ktaint/engine.hpp"
#include "ktaint/ir.hpp"
#include "ktaint/options.hpp"
#include "ktaint/spec_dsl.hpp"

namespace ktaint {

/// Reads a whole file; throws std::runtime_error when unreadable.
std::string read_file(const std::filesystem::path& path);

/// Parses and merges IR files, labelling classes with their path.
IrProgram load_ir_files(const std::vector<std::filesystem::path>& paths);

/// Sets the option named by a CLI flag without dashes (`no-default-args`,
/// `implicit-propagation`, ...). Returns false for unknown names.
bool set_option_flag(Options& options, std::string_view flag);

/// Flag names accepted by set_option_flag.
const std::vector<std::string>& option_flag_names();

/// `<query> <source line> <sink line>`, the manifest form of a finding.
std::string manifest_line(const Finding& f);

struct CorpusCase {
  std::string name;
  std::filesystem::path spec_path;
  std::vector<std::filesystem::path> ir_paths;  // sorted
  std::vector<std::string> expected;            // sorted manifest lines
  bool expected_miss = false;
  std::optional<std::string> ablation;  // flag expected to suppress all findings
};

/// Loads `dir/{case.spec, *.ir, expected.findings, ablation?}`.
CorpusCase load_case(const std::filesystem::path& dir);

struct CaseResult {
  std::string name;
  bool ok = false;
  std::string status;  // pass, FAIL, expected-miss, plus " ablation-ok"
  std::vector<std::string> actual;
  std::vector<std::string> expected;
  std::size_t ablated_findings = 0;
  std::vector<std::string> sarif_errors;
  std::string error;  // load or parse failure
  double seconds = 0.0;
};

CaseResult run_case(const CorpusCase& c, const Options& base = {});

/// Every subdirectory of `root` holding a case.spec, in path order.
std::vector<CaseResult> run_corpus(const std::filesystem::path& root,
                                   const Options& base = {});

std::string format_case_result(const CaseResult& r);

}  // namespace ktaint
