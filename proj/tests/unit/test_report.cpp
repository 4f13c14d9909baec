#include <string>

#include "doctest.h"
#include "json.hpp"
#include "ktaint/report.hpp"

using namespace ktaint;

namespace {

Finding finding(const std::string& file, std::size_t src, std::size_t sink) {
  Finding f;
  f.query_id = "q";
  f.message = "m";
  f.source = {"a.B", file, src};
  f.sink = {"a.B", file, sink};
  f.witness = {f.source, f.sink};
  return f;
}

}  // namespace

TEST_CASE("text report") {
  CHECK(to_text({}) == "0 findings\n");
  const std::string one = to_text({finding("src/a/B.kt", 3, 7)});
  CHECK(one.find("source src/a/B.kt:3") != std::string::npos);
  CHECK(one.find("sink src/a/B.kt:7") != std::string::npos);
  CHECK(one.find("1 finding\n") != std::string::npos);
  std::vector<Finding> six(6, finding("x.kt", 1, 2));
  CHECK(to_text(six).find("6 findings\n") != std::string::npos);
}

TEST_CASE("sarif document") {
  const std::string doc = to_sarif({finding("src/a/B.kt", 3, 7)}, "1.0", {{"q", "m"}, {"r", "n"}});
  CHECK(validate_sarif_subset(doc).empty());
  const auto j = nlohmann::json::parse(doc);
  CHECK(j["version"] == "2.1.0");
  const auto& run = j["runs"][0];
  CHECK(run["tool"]["driver"]["rules"].size() == 2);
  const auto& res = run["results"][0];
  CHECK(res["ruleId"] == "q");
  CHECK(res["locations"][0]["physicalLocation"]["artifactLocation"]["uri"] == "src/a/B.kt");
  CHECK(res["locations"][0]["physicalLocation"]["region"]["startLine"] == 7);
  CHECK(res["codeFlows"][0]["threadFlows"][0]["locations"].size() == 2);
}

TEST_CASE("empty sarif has one run and no results") {
  const auto j = nlohmann::json::parse(to_sarif({}, "1.0"));
  CHECK(j["runs"].size() == 1);
  CHECK(j["runs"][0]["results"].empty());
  CHECK(validate_sarif_subset(j.dump()).empty());
}

TEST_CASE("sarif output is deterministic") {
  const std::vector<Finding> fs{finding("a.kt", 1, 2), finding("b.kt", 3, 4)};
  CHECK(to_sarif(fs, "1") == to_sarif(fs, "1"));
}

TEST_CASE("subset validation catches problems") {
  CHECK_FALSE(validate_sarif_subset("{").empty());
  CHECK_FALSE(validate_sarif_subset("{}").empty());
  CHECK_FALSE(validate_sarif_subset(R"x({"version":"2.1.0","runs":[]})x").empty());
  const std::string unknown_rule = R"x({"version":"2.1.0","runs":[{"tool":{"driver":{"name":"t","version":"1","rules":[]}},
    "results":[{"ruleId":"q","message":{"text":"m"},"locations":[]}]}]})x";
  CHECK_FALSE(validate_sarif_subset(unknown_rule).empty());
  const std::string bad_line = R"x({"version":"2.1.0","runs":[{"tool":{"driver":{"name":"t","version":"1","rules":[{"id":"q"}]}},
    "results":[{"ruleId":"q","message":{"text":"m"},"locations":[{"physicalLocation":{"artifactLocation":{"uri":"a"},"region":{"startLine":0}}}]}]}]})x";
  CHECK_FALSE(validate_sarif_subset(bad_line).empty());
}
