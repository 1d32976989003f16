// End-to-end tests against the built binary. The harness exports
// STARTER_FORGE_BIN (binary path) and STARTER_FORGE_DATA (golden files).
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string bin_path() {
  const char* p = std::getenv("STARTER_FORGE_BIN");
  REQUIRE_MESSAGE(p != nullptr, "STARTER_FORGE_BIN must be set");
  return p;
}

std::string data_dir() {
  const char* p = std::getenv("STARTER_FORGE_DATA");
  REQUIRE_MESSAGE(p != nullptr, "STARTER_FORGE_DATA must be set");
  return p;
}

RunResult run_shell(const std::string& cmd) {
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// args is a shell fragment; stderr is dropped so stdout stays byte-exact.
RunResult run(const std::string& args) {
  return run_shell("'" + bin_path() + "' " + args + " 2>/dev/null");
}

std::string golden(const std::string& name) {
  std::ifstream in(data_dir() + "/" + name);
  REQUIRE_MESSAGE(in.good(), ("missing golden file " + name).c_str());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("construct reproduces the stored records byte for byte") {
  RunResult r29 = run("construct 29 2 26");
  CHECK(r29.exit_code == 0);
  CHECK(r29.out == golden("s29_2_26.jsonl"));

  RunResult r41 = run("construct 41 3 12");
  CHECK(r41.exit_code == 0);
  CHECK(r41.out == golden("s41_3_12.jsonl"));

  RunResult dz = run("construct 7 --dinitz 5");
  CHECK(dz.exit_code == 0);
  json j = json::parse(dz.out);
  CHECK(j["provenance"]["kind"] == "dinitz");
  CHECK(j["provenance"]["beta"] == 5);
  CHECK(j["is_strong"] == true);

  // Auto-selection keeps byte determinism.
  RunResult auto29 = run("construct 29");
  CHECK(auto29.exit_code == 0);
  CHECK(json::parse(auto29.out)["provenance"]["beta1"] == 2);
  CHECK(run("construct 29").out == auto29.out);
}

TEST_CASE("construct rejects out-of-scope input with exit code 1") {
  CHECK(run("construct 9").exit_code == 1);
  CHECK(run("construct 15").exit_code == 1);
  CHECK(run("construct 3").exit_code == 1);
  CHECK(run("construct 29 2 8").exit_code == 1);
  CHECK(run("construct 29 2").exit_code == 1);
  CHECK(run("construct 7 3 5").exit_code == 1);
  CHECK(run("construct 11 --dinitz 10").exit_code == 1);
  CHECK(run("construct").exit_code == 1);
  CHECK(run("paint 29").exit_code == 1);
}

TEST_CASE("search output is canonical and parallelism-independent") {
  RunResult all29 = run("search 29 --all");
  CHECK(all29.exit_code == 0);
  CHECK(all29.out == golden("search_29_all.jsonl"));
  CHECK(run("search 29 --all --jobs 3").out == all29.out);
  CHECK(run("search 29 --all --jobs 16").out == all29.out);

  RunResult all41 = run("search 41 --all");
  CHECK(all41.exit_code == 0);
  CHECK(all41.out == golden("search_41_all.jsonl"));

  RunResult first = run("search 29");
  CHECK(first.out == all29.out.substr(0, all29.out.find('\n') + 1));

  CHECK(run("search 9").exit_code == 1);
  CHECK(run("search 29 --jobs 0").exit_code == 1);
}

TEST_CASE("verify accepts records on stdin and reports failures") {
  std::string rec = golden("s29_2_26.jsonl");

  RunResult ok = run("verify " + data_dir() + "/s29_2_26.jsonl");
  CHECK(ok.exit_code == 0);
  json report = json::parse(ok.out);
  CHECK(report["pass"] == true);
  CHECK(report["is_strong"] == true);
  CHECK(report["verifiers_agree"] == true);
  CHECK(report["quotient"]["set"] == json::array({2, 3}));

  RunResult bad = run_shell("echo '{\"q\":29,\"pairs\":[[1,3],[3,16]]}' | '" +
                            bin_path() + "' verify - 2>/dev/null");
  CHECK(bad.exit_code == 2);
  json bad_report = json::parse(bad.out);
  CHECK(bad_report["pass"] == false);
  CHECK(bad_report["failures"].size() > 0);

  // A plain starter with a zero sum passes by default and fails under
  // --require-nonzero-sums.
  std::string f5 = "echo '{\"q\":5,\"pairs\":[[1,4],[2,3]]}' | '" + bin_path() +
                   "' verify -";
  CHECK(run_shell(f5 + " 2>/dev/null").exit_code == 0);
  CHECK(run_shell(f5 + " --require-nonzero-sums 2>/dev/null").exit_code == 2);

  CHECK(run_shell("echo 'not json' | '" + bin_path() +
                  "' verify - 2>/dev/null")
            .exit_code == 1);
}

TEST_CASE("tables render the published rows") {
  RunResult t29 = run("tables 29");
  CHECK(t29.exit_code == 0);
  CHECK(t29.out == golden("tables_29.txt"));

  RunResult t41 = run("tables 41");
  CHECK(t41.exit_code == 0);
  CHECK(t41.out == golden("tables_41.txt"));

  CHECK(run("tables 37").exit_code == 1);
}

TEST_CASE("census matches goldens and respects bounds") {
  RunResult small = run("census --small 11");
  CHECK(small.exit_code == 0);
  CHECK(small.out == golden("census_small_11.jsonl"));

  RunResult sweep = run("census --sweep 100");
  CHECK(sweep.exit_code == 0);
  CHECK(sweep.out == golden("census_sweep_100.jsonl"));
  CHECK(run("census --sweep 100 --jobs 4").out == sweep.out);

  CHECK(run("census --small 13").exit_code == 1);
  CHECK(run("census --sweep 20000").exit_code == 1);
  CHECK(run("census").exit_code == 1);
  CHECK(run("census --sweep 50 --small 5").exit_code == 1);
}

TEST_CASE("pretty output is the same record, indented") {
  RunResult pretty = run("construct 29 2 26 --pretty");
  CHECK(pretty.exit_code == 0);
  CHECK(pretty.out.find('\n') != std::string::npos);
  CHECK(json::parse(pretty.out) == json::parse(golden("s29_2_26.jsonl")));
}
