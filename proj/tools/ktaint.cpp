// ktaint: Kotlin-aware taint checks over textual IR.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ktaint/corpus.hpp"
#include "ktaint/engine.hpp"
#include "ktaint/error.hpp"
#include "ktaint/ir.hpp"
#include "ktaint/kotlin_types.hpp"
#include "ktaint/report.hpp"
#include "ktaint/sig_synth.hpp"
#include "ktaint/spec_dsl.hpp"

#ifndef KTAINT_VERSION
#define KTAINT_VERSION "0.0.0"
#endif

namespace {

constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitInputError = 2;

struct FlagBox {
  std::vector<std::pair<std::string, bool>> values;

  void attach(CLI::App* cmd) {
    values.reserve(ktaint::option_flag_names().size());
    for (const auto& name : ktaint::option_flag_names()) {
      values.emplace_back(name, false);
    }
    for (auto& [name, value] : values) {
      cmd->add_flag("--" + name, value, "engine option " + name);
    }
  }

  ktaint::Options options() const {
    ktaint::Options o;
    for (const auto& [name, value] : values) {
      if (value) ktaint::set_option_flag(o, name);
    }
    return o;
  }
};

int report_error(const std::exception& e) {
  std::cerr << "ktaint: error: " << e.what() << "\n";
  return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kotlin-aware taint analysis over a textual bytecode IR"};
  app.set_version_flag("--version", KTAINT_VERSION);
  app.require_subcommand(1);

  // check
  auto* check = app.add_subcommand("check", "analyze IR files against a spec");
  std::string spec_path;
  std::vector<std::string> ir_paths;
  std::string sarif_path;
  bool show_time = false;
  FlagBox check_flags;
  check->add_option("spec", spec_path, "taint specification")->required();
  check->add_option("ir", ir_paths, "IR files");
  check->add_option("--sarif", sarif_path, "also write SARIF to PATH");
  check->add_flag("--time", show_time, "print wall-clock seconds to stderr");
  check_flags.attach(check);

  // transform-spec
  auto* transform = app.add_subcommand("transform-spec", "print normalized rules");
  std::string transform_path;
  FlagBox transform_flags;
  transform->add_option("spec", transform_path, "taint specification")->required();
  transform_flags.attach(transform);

  // map-type
  auto* map = app.add_subcommand("map-type", "map a Kotlin type to its JVM name");
  std::string type_text;
  std::string alias_file;
  map->add_option("type", type_text, "Kotlin type")->required();
  map->add_option("--alias-file", alias_file, "file with an aliases block");

  // classify
  auto* classify = app.add_subcommand("classify", "classify a compiler-generated name");
  std::string name_text;
  classify->add_option("name", name_text, "method or class name")->required();

  // corpus
  auto* corpus = app.add_subcommand("corpus", "run the fixture corpus");
  std::string corpus_root = "fixtures";
  corpus->add_option("root", corpus_root, "corpus directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitClean : kExitInputError;
  }

  try {
    if (*check) {
      const auto start = std::chrono::steady_clock::now();
      const ktaint::Options options = check_flags.options();
      std::vector<std::filesystem::path> paths(ir_paths.begin(), ir_paths.end());
      const auto spec = ktaint::parse_spec(ktaint::read_file(spec_path));
      const auto program = ktaint::load_ir_files(paths);
      for (const auto& d : ktaint::validate(program)) {
        if (d.severity != ktaint::Diagnostic::Severity::kNote) {
          std::cerr << d.to_string() << "\n";
        }
      }
      const auto queries = ktaint::normalize_all(spec, options);
      for (const auto& q : queries) {
        for (const auto& r : q.rules) {
          for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
        }
      }
      const auto findings = ktaint::analyze(program, queries, options);
      std::cout << ktaint::to_text(findings);
      if (!sarif_path.empty()) {
        std::ofstream out(sarif_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + sarif_path);
        out << ktaint::to_sarif(findings, KTAINT_VERSION, ktaint::rules_of(queries));
      }
      if (show_time) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        std::fprintf(stderr, "time %.3f s\n", secs);
      }
      return findings.empty() ? kExitClean : kExitFindings;
    }
    if (*transform) {
      const auto spec = ktaint::parse_spec(ktaint::read_file(transform_path));
      std::cout << ktaint::dump_normalized(
          ktaint::normalize_all(spec, transform_flags.options()));
      return kExitClean;
    }
    if (*map) {
      ktaint::TypeAliasTable aliases;
      if (!alias_file.empty()) {
        aliases = ktaint::parse_alias_file(ktaint::read_file(alias_file));
      }
      auto expr = ktaint::parse_kotlin_type(type_text);
      if (!aliases.empty()) expr = ktaint::resolve_alias(aliases, expr);
      std::cout << ktaint::map_type(expr).name << "\n";
      return kExitClean;
    }
    if (*classify) {
      std::cout << ktaint::to_string(ktaint::classify_generated_name(name_text))
                << "\n";
      return kExitClean;
    }
    if (*corpus) {
      bool all_ok = true;
      for (const auto& r : ktaint::run_corpus(corpus_root)) {
        std::cout << ktaint::format_case_result(r);
        all_ok = all_ok && r.ok;
      }
      return all_ok ? kExitClean : kExitFindings;
    }
  } catch (const std::exception& e) {
    return report_error(e);
  }
  return kExitInputError;
}
