#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"

using nlohmann::ordered_json;

namespace {

struct CliResult {
  int code = -1;
  std::string output;
};

CliResult run_tool(const std::string& args) {
  std::string cmd = std::string(LLAB_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const std::string& scratch_dir() {
  static std::string dir = [] {
    char tpl[] = "/tmp/llab-cli-XXXXXX";
    char* made = mkdtemp(tpl);
    REQUIRE(made != nullptr);
    return std::string(made);
  }();
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

}  // namespace

TEST_CASE("green emits a manifest line and the hand-checked kernel") {
  CliResult r = run_tool("green --spec halfline_unit --R 2");
  CHECK(r.code == 0);
  std::vector<std::string> lines = split_lines(r.output);
  REQUIRE(lines.size() == 5);
  REQUIRE(lines[0].rfind("# manifest: ", 0) == 0);
  ordered_json m = ordered_json::parse(lines[0].substr(12));
  CHECK(m["command"] == "green");
  CHECK(m.contains("argv"));
  CHECK(lines[1] == "vertex_label,radius,value");
  const double want[3] = {2.0, 1.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    std::string line = lines[2 + i];
    std::string prefix = std::to_string(i) + "," + std::to_string(i) + ",";
    REQUIRE(line.rfind(prefix, 0) == 0);
    CHECK(std::stod(line.substr(prefix.size())) == doctest::Approx(want[i]));
  }
}

TEST_CASE("exit subcommand solves the ball problem") {
  CliResult r = run_tool("exit --spec halfline_unit --R 3");
  CHECK(r.code == 0);
  std::vector<std::string> lines = split_lines(r.output);
  REQUIRE(lines.size() == 6);
  CHECK(lines[2].rfind("0,0,", 0) == 0);
  CHECK(std::stod(lines[2].substr(4)) == doctest::Approx(6.0));  // (3*4)/2
}

TEST_CASE("usage errors come back as exit code 2") {
  CHECK(run_tool("green --spec halfline_unit --R 0").code == 2);
  CHECK(run_tool("green --R 2").code == 2);
  CHECK(run_tool("green --spec not_a_preset --R 2").code == 2);
  CHECK(run_tool("frobnicate").code == 2);
  CliResult bad = run_tool("green --spec not_a_preset --R 2");
  CHECK(bad.output.find("spec error") != std::string::npos);
}

TEST_CASE("classify is decisive on certified models and says so") {
  CliResult r = run_tool("classify --spec halfline_unit");
  CHECK(r.code == 0);
  ordered_json doc = ordered_json::parse(r.output);
  CHECK(doc.begin().key() == "manifest");
  CHECK(doc["parabolic"]["answer"] == "Yes");
  CHECK(doc["stochastically_complete"]["answer"] == "Yes");
  CHECK(doc["l1_liouville"]["answer"] == "Yes");
  CHECK(doc["decisive"] == true);

  CliResult pow3 = run_tool("classify --spec model_pow3");
  CHECK(pow3.code == 0);
  ordered_json d3 = ordered_json::parse(pow3.output);
  CHECK(d3["parabolic"]["answer"] == "No");
  CHECK(d3["stochastically_complete"]["answer"] == "No");
  CHECK(d3["l1_liouville"]["answer"] == "No");
}

TEST_CASE("classify refuses non-radial specs and flags uncertified ones") {
  CliResult r = run_tool("classify --spec glued_halflines");
  CHECK(r.code == 2);
  CHECK(r.output.find("evidence") != std::string::npos);

  std::string path = scratch_dir() + "/bare_model.json";
  std::ofstream(path) << R"({"kind":"model","name":"bare",
    "sphere_measure":{"array":[1.0],"extend":"repeat_last"},
    "boundary_weight":{"array":[1.0],"extend":"repeat_last"}})";
  CliResult bare = run_tool("classify --spec " + path);
  CHECK(bare.code == 3);
  ordered_json doc = ordered_json::parse(bare.output);
  CHECK(doc["decisive"] == false);
  CHECK(doc["parabolic"]["answer"] == "Unknown");
}

TEST_CASE("simulate reproduces the Dirichlet exit time from B_2") {
  CliResult r = run_tool(
      "simulate --spec halfline_unit --start 0 --absorb S2 --n 4000 --seed 9");
  CHECK(r.code == 0);
  ordered_json doc = ordered_json::parse(r.output);
  CHECK(doc["count_absorbed"] == 4000);
  CHECK(doc["count_censored"] == 0);
  double mean = doc["mean"].get<double>();
  double se = doc["std_error"].get<double>();
  CHECK(std::fabs(mean - 3.0) <= 4.0 * se);
  CHECK(doc["manifest"]["parameters"]["t_max"] == "inf");
}

TEST_CASE("compare reports incomparable curvature pairs with exit 1") {
  CliResult r = run_tool("compare --g antitree_cubed --model model_geom2 --R 5");
  CHECK(r.code == 1);
  ordered_json doc = ordered_json::parse(r.output);
  CHECK(doc["dominance"]["direction"] == "Neither");
}

TEST_CASE("compare passes on the matched pair") {
  CliResult r = run_tool("compare --g cmp_halfline --model cmp_model --R 15");
  CHECK(r.code == 0);
  ordered_json doc = ordered_json::parse(r.output);
  CHECK(doc["dominance"]["direction"] == "Stronger");
  CHECK(doc["dominance"]["R0"] == 1);
  CHECK(doc["transplant_green"]["pass"] == true);
  CHECK(doc["transplant_exit"]["pass"] == true);
}

TEST_CASE("ends subcommand counts rays behind the hub") {
  CliResult r = run_tool("ends --spec threeray_hub --K a:a:0 --R 8");
  CHECK(r.code == 0);
  ordered_json doc = ordered_json::parse(r.output);
  CHECK(doc["component_count"] == 3);
  CHECK(doc["unbounded_count"] == 3);
  CHECK(doc["stable"] == true);
  CHECK(doc["exit_additivity_max_discrepancy"].get<double>() <= 1e-10);
}

TEST_CASE("evidence trends match the classification") {
  CliResult r = run_tool("evidence --spec halfline_unit --Rmax 24");
  CHECK(r.code == 0);
  ordered_json doc = ordered_json::parse(r.output);
  CHECK(doc["trend"] == "Growing");
}

TEST_CASE("reproduce comparison-pair summarizes the transplant story") {
  CliResult r = run_tool("reproduce comparison-pair --R 20");
  CHECK(r.code == 0);
  ordered_json doc = ordered_json::parse(r.output);
  CHECK(doc["pipeline"] == "comparison-pair");
  CHECK(doc["comparison"]["dominance"]["direction"] == "Stronger");
  CHECK(doc["model_classification"]["stochastically_complete"]["answer"] == "No");
  CHECK(doc.contains("conclusion"));
}

TEST_CASE("golden files verify and catch drift") {
  std::string golden = scratch_dir() + "/pair.json";
  CHECK(run_tool("reproduce comparison-pair --R 12 --write-golden " + golden).code == 0);
  CHECK(run_tool("reproduce comparison-pair --R 12 --golden " + golden).code == 0);
  CliResult drift = run_tool("reproduce comparison-pair --R 14 --golden " + golden);
  CHECK(drift.code == 1);
}

TEST_CASE("rerun replays a recorded manifest byte for byte") {
  std::string out = scratch_dir() + "/green3.csv";
  CHECK(run_tool("green --spec halfline_unit --R 3 --out " + out).code == 0);
  std::string first = slurp(out);
  CHECK(run_tool("rerun --from " + out).code == 0);
  CHECK(slurp(out) == first);
  CHECK(first.rfind("# manifest: ", 0) == 0);
}
