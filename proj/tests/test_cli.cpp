// Integration checks of the oppsim command-line tool. Invoked by ctest with
// the binary path as argv[1]; exercises the run / gen-trace / gen-workload /
// replay pipeline on a scaled-down scenario.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  std::printf("%s %s\n", ok ? "ok  " : "FAIL", what.c_str());
  if (!ok) ++failures;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cmd(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return rc < 0 ? rc : WEXITSTATUS(rc);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: cli_tests <oppsim-binary>\n");
    return 2;
  }
  const std::string oppsim = argv[1];
  const std::string dir = "cli_test_tmp";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);

  // A quick config: scenario_a geometry with a short horizon.
  const std::string small =
      " --set duration=30000 --set warmup_end_s=2000 --set request_end_s=28000"
      " --set requests_per_consumer=10 --set request_mean_s=4000";

  // 1. run with 2 seeds, twice: identical CSV bytes.
  const std::string run1 = oppsim + " run --config scenario_a --runs 2 --seed 5 --out " + dir +
                           "/r1" + small + " > /dev/null";
  const std::string run2 = oppsim + " run --config scenario_a --runs 2 --seed 5 --out " + dir +
                           "/r2" + small + " > /dev/null";
  check(run_cmd(run1) == 0, "run exits 0");
  check(run_cmd(run2) == 0, "second run exits 0");
  const std::string csv1 = slurp(dir + "/r1/results.csv");
  const std::string csv2 = slurp(dir + "/r2/results.csv");
  check(!csv1.empty(), "results.csv written");
  check(csv1 == csv2, "identical seeds give byte-identical csv");
  check(slurp(dir + "/r1/summary.json").find("\"aggregate\"") != std::string::npos,
        "summary.json contains the aggregate");

  // Row accounting: header + 2 runs + AGG.
  int rows = 0;
  for (char c : csv1) rows += c == '\n';
  check(rows == 4, "csv has one row per run plus the aggregate");

  // 2. gen-trace + gen-workload + replay reproduces the direct run.
  const std::string direct = oppsim + " run --config scenario_a --runs 1 --seed 9 --out " + dir +
                             "/direct" + small + " > /dev/null";
  check(run_cmd(direct) == 0, "single direct run exits 0");
  check(run_cmd(oppsim + " gen-trace --config scenario_a --seed 9 --out " + dir + "/t.trace" +
                small + " > /dev/null") == 0,
        "gen-trace exits 0");
  check(run_cmd(oppsim + " gen-workload --config scenario_a --seed 9 --out " + dir + "/w.req" +
                small + " > /dev/null") == 0,
        "gen-workload exits 0");
  check(run_cmd(oppsim + " replay --config scenario_a --seed 9 --trace " + dir +
                "/t.trace --workload " + dir + "/w.req --out " + dir + "/replayed --txlog " +
                dir + "/tx.log" + small + " > /dev/null") == 0,
        "replay exits 0");
  check(slurp(dir + "/direct/results.csv") == slurp(dir + "/replayed/results.csv"),
        "replay reproduces the direct run byte for byte");
  check(!slurp(dir + "/tx.log").empty(), "txlog written");

  const std::string trace_text = slurp(dir + "/t.trace");
  check(trace_text.rfind("# oppnet-trace v1\n", 0) == 0, "trace carries the format header");

  // 3. validation failures exit 1.
  check(run_cmd(oppsim + " run --config scenario_a --protocol nonsense --out " + dir +
                "/x > /dev/null 2>&1") == 1,
        "unknown protocol exits 1");
  check(run_cmd(oppsim + " run --config scenario_a --set n_consumers=20 --out " + dir +
                "/y > /dev/null 2>&1") == 1,
        "cross-field violation exits 1");
  check(run_cmd(oppsim + " run --config does_not_exist.conf > /dev/null 2>&1") == 1,
        "missing config exits 1");

  std::filesystem::remove_all(dir);
  if (failures == 0) {
    std::printf("all cli checks passed\n");
    return 0;
  }
  std::printf("%d cli check(s) failed\n", failures);
  return 1;
}
