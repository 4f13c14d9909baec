#include "ktaint/report.hpp"

#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ktaint {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json physical_location(const Location& loc) {
  return {{"physicalLocation",
           {{"artifactLocation", {{"uri", loc.file}}},
            {"region", {{"startLine", loc.line}}}}}};
}

}  // namespace

std::vector<RuleInfo> rules_of(const std::vector<NormalizedQuery>& queries) {
  std::vector<RuleInfo> out;
  for (const auto& q : queries) out.push_back({q.id, q.message});
  return out;
}

std::string to_text(const std::vector<Finding>& findings) {
  std::ostringstream out;
  for (const auto& f : findings) {
    out << "query " << f.query_id;
    if (!f.message.empty()) out << ": " << f.message;
    out << "\n";
    out << "  source " << f.source.to_string() << " (" << f.source.class_name << ")\n";
    out << "  sink " << f.sink.to_string() << " (" << f.sink.class_name << ")\n";
    out << "  witness\n";
    for (const auto& w : f.witness) out << "    " << w.to_string() << "\n";
    out << "\n";
  }
  out << findings.size() << (findings.size() == 1 ? " finding" : " findings") << "\n";
  return out.str();
}

std::string to_sarif(const std::vector<Finding>& findings,
                     std::string_view tool_version,
                     const std::vector<RuleInfo>& rules) {
  std::map<std::string, std::string> rule_map;
  for (const auto& r : rules) rule_map.emplace(r.id, r.message);
  for (const auto& f : findings) rule_map.emplace(f.query_id, f.message);

  ordered_json rule_array = ordered_json::array();
  for (const auto& [id, message] : rule_map) {
    rule_array.push_back({{"id", id}, {"shortDescription", {{"text", message}}}});
  }

  ordered_json results = ordered_json::array();
  for (const auto& f : findings) {
    ordered_json flow_locations = ordered_json::array();
    for (const auto& w : f.witness) {
      flow_locations.push_back({{"location", physical_location(w)}});
    }
    ordered_json result;
    result["ruleId"] = f.query_id;
    result["message"] = {{"text", f.message.empty() ? f.query_id : f.message}};
    result["locations"] = ordered_json::array({physical_location(f.sink)});
    result["relatedLocations"] =
        ordered_json::array({physical_location(f.source)});
    result["codeFlows"] = ordered_json::array(
        {{{"threadFlows", ordered_json::array({{{"locations", flow_locations}}})}}});
    results.push_back(std::move(result));
  }

  ordered_json doc;
  doc["version"] = std::string(kSarifVersion);
  doc["$schema"] = "https://json.schemastore.org/sarif-2.1.0.json";
  doc["runs"] = ordered_json::array({{{"tool",
                                       {{"driver",
                                         {{"name", std::string(kToolName)},
                                          {"version", std::string(tool_version)},
                                          {"rules", rule_array}}}}},
                                      {"results", results}}});
  return doc.dump(2) + "\n";
}

std::vector<std::string> validate_sarif_subset(std::string_view json_text) {
  std::vector<std::string> errors;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    errors.push_back(std::string("not JSON: ") + e.what());
    return errors;
  }
  auto need = [&](const nlohmann::json& obj, const char* key,
                  nlohmann::json::value_t type, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
      errors.push_back(where + ": missing '" + key + "'");
      return false;
    }
    if (obj.at(key).type() != type) {
      errors.push_back(where + "." + key + ": wrong type");
      return false;
    }
    return true;
  };
  using V = nlohmann::json::value_t;
  if (!doc.is_object()) {
    errors.push_back("document is not an object");
    return errors;
  }
  if (need(doc, "version", V::string, "$") && doc["version"] != kSarifVersion) {
    errors.push_back("$.version: expected 2.1.0");
  }
  if (!need(doc, "runs", V::array, "$")) return errors;
  if (doc["runs"].empty()) errors.push_back("$.runs: empty");
  for (std::size_t r = 0; r < doc["runs"].size(); ++r) {
    const auto& run = doc["runs"][r];
    const std::string rp = "$.runs[" + std::to_string(r) + "]";
    std::set<std::string> rule_ids;
    if (need(run, "tool", V::object, rp) &&
        need(run["tool"], "driver", V::object, rp + ".tool")) {
      const auto& driver = run["tool"]["driver"];
      const std::string dp = rp + ".tool.driver";
      need(driver, "name", V::string, dp);
      need(driver, "version", V::string, dp);
      if (need(driver, "rules", V::array, dp)) {
        for (const auto& rule : driver["rules"]) {
          if (need(rule, "id", V::string, dp + ".rules[]")) {
            rule_ids.insert(rule["id"].get<std::string>());
          }
        }
      }
    }
    if (!need(run, "results", V::array, rp)) continue;
    for (std::size_t i = 0; i < run["results"].size(); ++i) {
      const auto& res = run["results"][i];
      const std::string p = rp + ".results[" + std::to_string(i) + "]";
      if (need(res, "ruleId", V::string, p) &&
          !rule_ids.contains(res["ruleId"].get<std::string>())) {
        errors.push_back(p + ".ruleId: not among driver rules");
      }
      if (need(res, "message", V::object, p)) need(res["message"], "text", V::string, p + ".message");
      if (need(res, "locations", V::array, p)) {
        for (const auto& loc : res["locations"]) {
          const std::string lp = p + ".locations[]";
          if (!need(loc, "physicalLocation", V::object, lp)) continue;
          const auto& phys = loc["physicalLocation"];
          if (need(phys, "artifactLocation", V::object, lp + ".physicalLocation")) {
            if (need(phys["artifactLocation"], "uri", V::string,
                     lp + ".physicalLocation.artifactLocation") &&
                phys["artifactLocation"]["uri"].get<std::string>().find('\\') !=
                    std::string::npos) {
              errors.push_back(lp + ": uri uses backslashes");
            }
          }
          if (need(phys, "region", V::object, lp + ".physicalLocation")) {
            const auto& region = phys["region"];
            if (!region.contains("startLine") || !region["startLine"].is_number_integer() ||
                region["startLine"].get<long long>() < 1) {
              errors.push_back(lp + ".physicalLocation.region.startLine: not a positive integer");
            }
          }
        }
      }
      if (res.contains("codeFlows") && !res["codeFlows"].is_array()) {
        errors.push_back(p + ".codeFlows: wrong type");
      }
    }
  }
  return errors;
}

}  // namespace ktaint
