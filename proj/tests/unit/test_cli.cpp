#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "trinc/scenario_io.hpp"

using trinc::json;
using trinc::testing::TempDir;

namespace {

struct Result {
  int exit_code = -1;
  std::string out;
};

/// Runs the CLI with the bundled data directory; stderr is discarded unless merged.
Result run(const std::string& args, bool merge_stderr = false) {
  const std::string command = std::string("TRINC_DATA_DIR='") + TRINC_TEST_DATA_DIR + "' '" + TRINC_CLI_PATH + "' " +
                              args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Result r;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buffer{};
  std::size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) r.out.append(buffer.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool contains(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("validate the bundled scenario") {
  const auto r = run("validate naples");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "naples: ok (20 actions, 8 criteria"));
}

TEST_CASE("validate reports a broken scenario with exit code 1") {
  TempDir dir;
  auto doc = json::parse(trinc::read_text_file(trinc::testing::data_dir() / "naples.json"));
  doc["lambda"] = 0.2;
  const auto path = dir.path() / "broken.json";
  trinc::write_text_file(path, doc.dump());
  const auto r = run("validate '" + path.string() + "'", true);
  CHECK(r.exit_code == 1);
  CHECK(contains(r.out, "lambda"));
}

TEST_CASE("sort writes twenty intervals and records the cut level") {
  const auto r = run("sort --scenario naples --weights w1 --lambda 0.75");
  REQUIRE(r.exit_code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["actions"].size() == 20);
  CHECK(doc["lambda"] == 0.75);
  CHECK(doc["weight_set"] == "w1");
  const auto md = run("sort --scenario naples --weights w1 --format markdown");
  CHECK(contains(md.out, "| a1 |"));
}

TEST_CASE("select exit codes") {
  const auto ok = run("select --scenario naples --reference w1 --budget 45710 --constraints full");
  CHECK(ok.exit_code == 0);
  CHECK(json::parse(ok.out)["objective"] == 936);

  const auto none = run("select --scenario naples --reference w1 --budget 13060 --constraints full", true);
  CHECK(none.exit_code == 2);
  CHECK(contains(none.out, "unsatisfiable rows"));
  CHECK(contains(none.out, "decumano"));
}

TEST_CASE("sort then select from the written file") {
  TempDir dir;
  const auto file = (dir.path() / "w1.json").string();
  REQUIRE(run("sort --scenario naples --weights w1 --out '" + file + "'").exit_code == 0);
  const auto r = run("select --scenario naples --assignments '" + file + "' --budget B2");
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out)["infeasible"] == false);
}

TEST_CASE("weights and calibration") {
  const auto w = run("weights srf --deck '" + (trinc::testing::data_dir() / "decks" / "focus_group_w1.json").string() +
                     "' --scenario naples");
  REQUIRE(w.exit_code == 0);
  CHECK(json::parse(w.out)["rounded"]["g1"] == doctest::Approx(20));
  const auto c = run("calibrate --anchors '" + (trinc::testing::data_dir() / "anchors.json").string() + "'");
  REQUIRE(c.exit_code == 0);
  CHECK(json::parse(c.out)["thresholds"]["g6.q"]["alpha"].get<double>() == doctest::Approx(0.10227).epsilon(1e-3));
}

TEST_CASE("robustness from the command line") {
  const auto r = run("robustness --scenario naples --weight-sets w1,w2 --budgets B2,B4 --source reference");
  REQUIRE(r.exit_code == 0);
  CHECK(json::parse(r.out)["cells"].size() == 4);
}

TEST_CASE("usage errors exit with 64") {
  CHECK(run("select --scenario naples").exit_code == 64);
  CHECK(run("frobnicate").exit_code == 64);
  CHECK(run("sort --scenario naples --weights w1 --format xml").exit_code == 64);
  CHECK(run("sort --scenario nowhere --weights w1").exit_code == 1);
}

TEST_CASE("repeated runs give byte-identical output") {
  for (const auto* args : {"sort --scenario naples --weights w3",
                           "select --scenario naples --reference w2 --budget B4 --constraints full",
                           "robustness --scenario naples --weight-sets w1,w5 --budgets B2,B6 --profiles full,relaxed"}) {
    CAPTURE(args);
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
  }
}
