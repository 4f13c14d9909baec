#include "ktaint/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ktaint/error.hpp"
#include "ktaint/report.hpp"

namespace ktaint {

namespace fs = std::filesystem;

namespace {

const std::map<std::string, bool Options::*, std::less<>>& flag_table() {
  static const std::map<std::string, bool Options::*, std::less<>> table = {
      {"implicit-propagation", &Options::implicit_propagation},
      {"no-default-args", &Options::no_default_expansion},
      {"no-type-mapping", &Options::no_type_mapping},
      {"no-alias-resolution", &Options::no_alias_resolution},
      {"no-extension-handling", &Options::no_extension_handling},
      {"no-property-accessors", &Options::no_property_accessors},
      {"no-top-level", &Options::no_top_level_classes},
      {"no-infix", &Options::no_infix_handling},
      {"no-operator-mapping", &Options::no_operator_mapping},
  };
  return table;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> manifest_of(const std::vector<Finding>& findings) {
  std::vector<std::string> out;
  for (const auto& f : findings) out.push_back(manifest_line(f));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

IrProgram load_ir_files(const std::vector<fs::path>& paths) {
  std::vector<IrProgram> parts;
  for (const auto& p : paths) parts.push_back(parse_ir(read_file(p), p.string()));
  return IrProgram::merge(std::move(parts));
}

bool set_option_flag(Options& options, std::string_view flag) {
  auto it = flag_table().find(flag);
  if (it == flag_table().end()) return false;
  options.*(it->second) = true;
  return true;
}

const std::vector<std::string>& option_flag_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : flag_table()) v.push_back(k);
    return v;
  }();
  return names;
}

std::string manifest_line(const Finding& f) {
  return f.query_id + " " + std::to_string(f.source.line) + " " +
         std::to_string(f.sink.line);
}

CorpusCase load_case(const fs::path& dir) {
  CorpusCase c;
  c.name = dir.filename().string();
  c.spec_path = dir / "case.spec";
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ir") {
      c.ir_paths.push_back(entry.path());
    }
  }
  std::sort(c.ir_paths.begin(), c.ir_paths.end());
  if (fs::exists(dir / "expected.findings")) {
    std::istringstream in(read_file(dir / "expected.findings"));
    std::string line;
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line == "expected-miss") {
        c.expected_miss = true;
      } else {
        c.expected.push_back(line);
      }
    }
  }
  std::sort(c.expected.begin(), c.expected.end());
  if (fs::exists(dir / "ablation")) {
    c.ablation = trim(read_file(dir / "ablation"));
    if (c.ablation->empty()) c.ablation.reset();
  }
  return c;
}

CaseResult run_case(const CorpusCase& c, const Options& base) {
  CaseResult r;
  r.name = c.name;
  r.expected = c.expected;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Spec spec = parse_spec(read_file(c.spec_path));
    const IrProgram program = load_ir_files(c.ir_paths);
    const auto queries = normalize_all(spec, base);
    const auto findings = analyze(program, queries, base);
    r.actual = manifest_of(findings);
    r.sarif_errors = validate_sarif_subset(to_sarif(findings, "test", rules_of(queries)));

    bool ok = r.actual == r.expected && r.sarif_errors.empty();
    if (c.expected_miss) {
      r.status = "expected-miss";
      ok = ok && r.actual.empty();
    } else {
      r.status = "pass";
    }
    if (ok && c.ablation) {
      Options ablated = base;
      if (!set_option_flag(ablated, *c.ablation)) {
        throw std::runtime_error("unknown ablation flag '" + *c.ablation + "'");
      }
      const auto aq = normalize_all(spec, ablated);
      r.ablated_findings = analyze(program, aq, ablated).size();
      if (r.ablated_findings == 0 && !r.actual.empty()) {
        r.status += " ablation-ok";
      } else {
        ok = false;
      }
    }
    r.ok = ok;
    if (!ok) r.status = "FAIL";
  } catch (const std::exception& e) {
    r.ok = false;
    r.status = "FAIL";
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                  .count();
  return r;
}

std::vector<CaseResult> run_corpus(const fs::path& root, const Options& base) {
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "case.spec")) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<CaseResult> out;
  for (const auto& d : dirs) {
    CorpusCase c;
    try {
      c = load_case(d);
    } catch (const std::exception& e) {
      CaseResult r;
      r.name = d.filename().string();
      r.status = "FAIL";
      r.error = e.what();
      out.push_back(std::move(r));
      continue;
    }
    out.push_back(run_case(c, base));
  }
  return out;
}

std::string format_case_result(const CaseResult& r) {
  std::ostringstream out;
  out << r.status << " " << r.name;
  if (!r.error.empty()) out << ": " << r.error;
  out << "\n";
  if (r.status == "FAIL" && r.error.empty()) {
    for (const auto& e : r.expected) {
      if (!std::binary_search(r.actual.begin(), r.actual.end(), e)) {
        out << "  missing " << e << "\n";
      }
    }
    for (const auto& a : r.actual) {
      if (!std::binary_search(r.expected.begin(), r.expected.end(), a)) {
        out << "  unexpected " << a << "\n";
      }
    }
    if (r.ablated_findings > 0) {
      out << "  ablation left " << r.ablated_findings << " finding(s)\n";
    }
    for (const auto& s : r.sarif_errors) out << "  sarif " << s << "\n";
  }
  return out.str();
}

}  // namespace ktaint
