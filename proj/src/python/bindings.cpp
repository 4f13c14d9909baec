#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "ktaint/corpus.hpp"
#include "ktaint/engine.hpp"
#include "ktaint/error.hpp"
#include "ktaint/ir.hpp"
#include "ktaint/kotlin_types.hpp"
#include "ktaint/report.hpp"
#include "ktaint/sig_synth.hpp"
#include "ktaint/spec_dsl.hpp"

namespace py = pybind11;

namespace {

ktaint::Options options_from(const std::vector<std::string>& flags) {
  ktaint::Options o;
  for (const auto& f : flags) {
    if (!ktaint::set_option_flag(o, f)) throw py::value_error("unknown option flag: " + f);
  }
  return o;
}

ktaint::IrProgram program_from(const std::vector<std::string>& ir_texts) {
  std::vector<ktaint::IrProgram> parts;
  for (std::size_t i = 0; i < ir_texts.size(); ++i) {
    parts.push_back(ktaint::parse_ir(ir_texts[i], "ir[" + std::to_string(i) + "]"));
  }
  return ktaint::IrProgram::merge(std::move(parts));
}

py::dict location_dict(const ktaint::Location& l) {
  py::dict d;
  d["class"] = l.class_name;
  d["file"] = l.file;
  d["line"] = l.line;
  return d;
}

struct Checked {
  std::vector<ktaint::Finding> findings;
  std::vector<ktaint::RuleInfo> rules;
};

Checked run_check(const std::string& spec_text, const std::vector<std::string>& ir_texts,
                  const std::vector<std::string>& flags) {
  const ktaint::Options o = options_from(flags);
  const auto queries = ktaint::normalize_all(ktaint::parse_spec(spec_text), o);
  const auto program = program_from(ir_texts);
  return {ktaint::analyze(program, queries, o), ktaint::rules_of(queries)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Taint analysis over Kotlin-compiled IR";
  m.attr("__version__") = KTAINT_VERSION;

  py::register_exception<ktaint::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ktaint::SpecError>(m, "SpecError", PyExc_ValueError);

  m.def("map_type", [](const std::string& kotlin) {
    return ktaint::map_type(ktaint::parse_kotlin_type(kotlin)).name;
  }, py::arg("kotlin_type"), "Bytecode-level name of a Kotlin type.");

  m.def("normalize_type", [](const std::string& kotlin) {
    return ktaint::to_string(ktaint::parse_kotlin_type(kotlin));
  }, py::arg("kotlin_type"), "Canonical spelling of a Kotlin type.");

  m.def("classify", [](const std::string& name) {
    return std::string(ktaint::to_string(ktaint::classify_generated_name(name)));
  }, py::arg("name"));

  m.def("transform_spec", [](const std::string& spec_text, const std::vector<std::string>& flags) {
    const ktaint::Options o = options_from(flags);
    return ktaint::dump_normalized(ktaint::normalize_all(ktaint::parse_spec(spec_text), o));
  }, py::arg("spec_text"), py::arg("flags") = std::vector<std::string>{});

  m.def("check", [](const std::string& spec_text, const std::vector<std::string>& ir_texts,
                    const std::vector<std::string>& flags) {
    py::list out;
    for (const auto& f : run_check(spec_text, ir_texts, flags).findings) {
      py::dict d;
      d["query"] = f.query_id;
      d["message"] = f.message;
      d["source"] = location_dict(f.source);
      d["sink"] = location_dict(f.sink);
      py::list w;
      for (const auto& l : f.witness) w.append(location_dict(l));
      d["witness"] = w;
      out.append(d);
    }
    return out;
  }, py::arg("spec_text"), py::arg("ir_texts"), py::arg("flags") = std::vector<std::string>{},
     "Findings as dicts with query, message, source, sink and witness.");

  m.def("report_text", [](const std::string& spec_text, const std::vector<std::string>& ir_texts,
                          const std::vector<std::string>& flags) {
    return ktaint::to_text(run_check(spec_text, ir_texts, flags).findings);
  }, py::arg("spec_text"), py::arg("ir_texts"), py::arg("flags") = std::vector<std::string>{});

  m.def("report_sarif", [](const std::string& spec_text, const std::vector<std::string>& ir_texts,
                           const std::vector<std::string>& flags) {
    const auto c = run_check(spec_text, ir_texts, flags);
    return ktaint::to_sarif(c.findings, KTAINT_VERSION, c.rules);
  }, py::arg("spec_text"), py::arg("ir_texts"), py::arg("flags") = std::vector<std::string>{});

  m.def("validate_sarif", &ktaint::validate_sarif_subset, py::arg("text"));
  m.def("option_flags", &ktaint::option_flag_names);
}
