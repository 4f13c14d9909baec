#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "ktaint/corpus.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / ("ktaint_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

Run cli(const std::string& args) {
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = std::string("\"") + KTAINT_CLI + "\" " + args + " 2>\"" + err.string() + "\"";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  const int rc = pclose(p);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.err = ktaint::read_file(err);
  return r;
}

std::string fixture(const std::string& rel) {
  return "\"" + (fs::path(KTAINT_FIXTURES) / rel).string() + "\"";
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return "\"" + p.string() + "\"";
}

}  // namespace

TEST_CASE("check reports findings with exit status 1") {
  const Run r = cli("check " + fixture("sanitizer/case.spec") + " " + fixture("sanitizer/case.ir"));
  CHECK(r.status == 1);
  CHECK(r.out.find("1 finding\n") != std::string::npos);
  CHECK(r.out.find("query xss") != std::string::npos);
}

TEST_CASE("check without findings exits 0") {
  const std::string spec = write("clean.spec", R"x(query "q" {
  source { method "a.S: java.lang.String get()" out return }
  sink { method "a.K: void put(java.lang.String)" in param1 }
})x");
  const std::string ir = write("clean.ir", R"x(class a.M {
  method "a.M: void f()" static {
    x = const "k"
    call "a.K: void put(java.lang.String)" (x)
  }
})x");
  const Run r = cli("check " + spec + " " + ir + " --time");
  CHECK(r.status == 0);
  CHECK(r.out == "0 findings\n");
  CHECK(r.err.find("time ") != std::string::npos);
}

TEST_CASE("input errors exit 2 and go to stderr") {
  const Run missing = cli("check /nonexistent/case.spec");
  CHECK(missing.status == 2);
  CHECK(missing.out.empty());
  CHECK_FALSE(missing.err.empty());

  const std::string bad = write("bad.spec", "query \"q\" {\n  source { frob }\n}\n");
  const Run syntax = cli("check " + bad);
  CHECK(syntax.status == 2);
  CHECK(syntax.err.find("2:") != std::string::npos);

  CHECK(cli("check").status == 2);
  CHECK(cli("no-such-command").status == 2);
}

TEST_CASE("sarif file is written and valid") {
  const fs::path out = scratch() / "out.sarif";
  const Run r = cli("check " + fixture("package_path/case.spec") + " " +
                    fixture("package_path/case.ir") + " --sarif \"" + out.string() + "\"");
  CHECK(r.status == 1);
  const auto doc = nlohmann::json::parse(ktaint::read_file(out));
  CHECK(doc["runs"][0]["results"][0]["locations"][0]["physicalLocation"]["artifactLocation"]["uri"] ==
        "x/y.kt");
}

TEST_CASE("ablation flags reach the engine") {
  const std::string args = "check " + fixture("default_args_member/case.spec") + " " +
                           fixture("default_args_member/case.ir");
  CHECK(cli(args).status == 1);
  CHECK(cli(args + " --no-default-args").status == 0);
}

TEST_CASE("helper subcommands") {
  const Run t = cli("map-type \"Int?\"");
  CHECK(t.status == 0);
  CHECK(t.out == "java.lang.Integer\n");
  const Run c = cli("classify 'run$default'");
  CHECK(c.status == 0);
  CHECK_FALSE(c.out.empty());
  const Run n = cli("transform-spec " + fixture("operators/case.spec"));
  CHECK(n.status == 0);
  CHECK(n.out.find("query operator") != std::string::npos);
  const Run corpus = cli("corpus " + fixture(""));
  CHECK(corpus.status == 0);
  CHECK(corpus.out.find("expected-miss") != std::string::npos);
}
