#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct CliResult {
  int status = -1;
  std::string output;
};

/// Run the installed tool with `args`. stderr is merged into the captured
/// output unless the caller redirects it inside `args` first.
CliResult run_cli(const std::string& args, bool merge_stderr = true) {
  const std::string cmd = std::string(ATSPEC_CLI_PATH) + " " + args +
                          (merge_stderr ? " 2>&1" : "");
  CliResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
    result.output.append(buf, got);
  }
  const int rc = pclose(pipe);
  REQUIRE(rc != -1);
  result.status = WEXITSTATUS(rc);
  return result;
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (const char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("spectrum emits a CSV grid with the default window") {
  const CliResult r = run_cli(
      "spectrum --preset quartuplet --rabi 0.5,0.5,0.5,0.5 "
      "--phase 6.283185307179586 --points 4001");
  CHECK(r.status == 0);
  CHECK(count_lines(r.output) == 4002);
  const std::string head =
      "delta,intensity\n-4.732050807568877,0.046205796465337\n";
  CHECK(r.output.substr(0, head.size()) == head);
}

TEST_CASE("spectrum JSON carries method, grid, and sample arrays") {
  const CliResult r = run_cli(
      "spectrum --format json --preset doublet --rabi 1 "
      "--points 5 --dmin -1 --dmax 1");
  CHECK(r.status == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j["method"] == "linear_solve");
  CHECK(j["gamma"] == 1.0);
  CHECK(j["grid"]["points"] == 5);
  REQUIRE(j["deltas"].size() == 5);
  CHECK(j["deltas"][0] == -1.0);
  CHECK(j["deltas"][2] == 0.0);
  // The interference zero at the origin.
  CHECK(j["intensities"][2].get<double>() < 1e-20);
}

TEST_CASE("spectrum honors unit-peak rescaling") {
  const CliResult r = run_cli(
      "spectrum --format json --unit-peak --preset quartuplet "
      "--rabi 0.5,0.5,0.5,0.5 --points 201");
  CHECK(r.status == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  double top = 0.0;
  for (const auto& v : j["intensities"]) {
    top = std::max(top, v.get<double>());
  }
  CHECK(top == 1.0);
}

TEST_CASE("spectrum writes output files atomically") {
  const std::string path = "/tmp/atspec_cli_out.csv";
  std::remove(path.c_str());
  std::remove((path + ".tmp").c_str());
  const CliResult r = run_cli(
      "spectrum --preset doublet --rabi 2 --points 11 --out " + path);
  CHECK(r.status == 0);
  CHECK(r.output.empty());
  const std::string text = read_file(path);
  CHECK(count_lines(text) == 12);
  CHECK(text.substr(0, 16) == "delta,intensity\n");
  std::ifstream leftover(path + ".tmp");
  CHECK(!leftover.good());
  std::remove(path.c_str());
}

TEST_CASE("spectrum loads shipped linkage files") {
  const CliResult r = run_cli(
      std::string("spectrum --file ") + ATSPEC_SHARE_DIR +
      "/quartuplet_half.linkage --points 11");
  CHECK(r.status == 0);
  CHECK(count_lines(r.output) == 12);
}

TEST_CASE("closed, dressed, and time methods run end to end") {
  CHECK(run_cli("spectrum --method closed --preset quartuplet "
                "--rabi 0.5,0.5,0.5,0.5 --points 11")
            .status == 0);
  CHECK(run_cli("spectrum --method dressed --preset quintuplet "
                "--rabi 1,1,1,1,1 --points 11")
            .status == 0);
  CHECK(run_cli("spectrum --method time --preset doublet --rabi 1 "
                "--horizon 50 --step 0.001 --points 11 --dmin -1 --dmax 1")
            .status == 0);
}

TEST_CASE("usage errors exit with code 2 and name the offending flag") {
  const struct {
    const char* args;
    const char* needle;
  } cases[] = {
      {"spectrum", "exactly one of --preset or --file"},
      {"spectrum --preset doublet --rabi 1 --file x.linkage",
       "exactly one of --preset or --file"},
      {"spectrum --preset nope --rabi 1", "--preset"},
      {"spectrum --preset quartuplet --rabi 1,2,3", "--rabi"},
      {"spectrum --preset doublet --rabi 1 --gamma 0", "--gamma"},
      {"spectrum --preset doublet --rabi 1 --points 2", "--points"},
      {"spectrum --preset doublet --rabi 1 --dmin 2 --dmax -2",
       "bounds must be finite and ordered"},
      {"spectrum --preset doublet --rabi 1 --horizon 10",
       "--horizon/--step apply only to --method time"},
      {"spectrum --method closed --preset sextuplet --rabi 1,1,1,1,1,1,1",
       "no closed form exists for the sextuplet topology"},
      {"spectrum --method closed --preset triplet --rabi 1,1,1 --phase 1.0",
       "zero loop phase only"},
      {"spectrum --method dressed --preset triplet --rabi 1,1,1",
       "--method dressed supports the quartuplet and quintuplet"},
      {"spectrum --file /tmp/atspec_no_such_file.linkage", "cannot open"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.args);
    const CliResult r = run_cli(c.args);
    CHECK(r.status == 2);
    CHECK(contains(r.output, c.needle));
  }
}

TEST_CASE("a file parse error surfaces its line and column") {
  const std::string path = "/tmp/atspec_cli_bad.linkage";
  {
    std::ofstream out(path, std::ios::trunc);
    out << "wobble 1\n";
  }
  const CliResult r = run_cli("spectrum --file " + path);
  CHECK(r.status == 2);
  CHECK(contains(r.output, "unknown statement 'wobble'"));
  CHECK(contains(r.output, "(line 1, column 1)"));
  std::remove(path.c_str());
}

TEST_CASE("missing subcommand is a usage error") {
  const CliResult r = run_cli("");
  CHECK(r.status == 2);
}

TEST_CASE("help exits cleanly and lists the subcommands") {
  const CliResult r = run_cli("--help");
  CHECK(r.status == 0);
  CHECK(contains(r.output, "spectrum"));
  CHECK(contains(r.output, "report"));
  CHECK(contains(r.output, "verify"));
}

TEST_CASE("degenerate decompositions exit with the numeric code") {
  const CliResult r = run_cli(
      "spectrum --method dressed --preset quartuplet --rabi 0,0,0,0 "
      "--points 11");
  CHECK(r.status == 3);
  CHECK(contains(r.output,
                 "numerical failure (degenerate roots): roots closer than "
                 "1e-8 at indices 0 and 1"));
}

TEST_CASE("report emits the analysis JSON for the equal-0.5 loop") {
  const CliResult r = run_cli(
      "report --preset quartuplet --rabi 0.5,0.5,0.5,0.5 "
      "--phase 6.283185307179586");
  CHECK(r.status == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j["method"] == "linear_solve");
  REQUIRE(j["dark_lines"].size() == 3);
  REQUIRE(j["peaks"].size() == 4);
  CHECK(std::abs(j["fwhm_sum"].get<double>() - 1.0000034599136276) < 1e-9);
  CHECK(j["sum_rule_deviation"].get<double>() < 1e-5);
}

TEST_CASE("report widens the window when a width crossing escapes it") {
  const std::string errpath = "/tmp/atspec_cli_widen_err.txt";
  std::remove(errpath.c_str());
  const CliResult r = run_cli(
      "report --preset doublet --rabi 4 --dmin -4.2 --dmax 4.2 2>" + errpath,
      /*merge_stderr=*/false);
  CHECK(r.status == 0);
  const std::string note = read_file(errpath);
  CHECK(contains(note,
                 "note: left half-maximum crossing lies beyond the grid; "
                 "widening the window to [-6.300000000000001, "
                 "6.300000000000001]"));
  const nlohmann::json j = nlohmann::json::parse(r.output);
  REQUIRE(j["peaks"].size() == 2);
  CHECK(std::abs(j["fwhm_sum"].get<double>() - 1.0) < 0.05);
  CHECK(j["grid"]["dmax"].get<double>() > 4.2);
  std::remove(errpath.c_str());
}

TEST_CASE("verify passes for a clean preset") {
  const CliResult r = run_cli("verify --preset doublet --rabi 1.5");
  CHECK(r.status == 0);
  CHECK(contains(r.output, "all checks passed"));
  CHECK(contains(r.output, "PASS"));
  CHECK(!contains(r.output, "FAIL"));
}

TEST_CASE("verify catches an injected cross-route defect") {
  const CliResult r = run_cli(
      "verify --preset quartuplet --rabi 0.5,0.5,0.5,0.5 "
      "--phase 6.283185307179586 --inject-defect");
  CHECK(r.status == 1);
  CHECK(contains(r.output, "FAIL"));
  CHECK(contains(r.output, "check(s) failed"));
}

}  // TEST_SUITE("cli")
