// Copyright 2026 The inferopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end tests driving the installed CLI binary (path in argv[1]).

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string g_cli;
fs::path g_dir;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const fs::path out_file = g_dir / "cmd_output.txt";
  const std::string cmd = g_cli + " " + args + " > " + out_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_file);
  std::ostringstream buf;
  buf << in.rdbuf();
  r.output = buf.str();
  return r;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

const char* kFig3Pipeline = R"({
  "model_node": "model",
  "nodes": [
    {"id": "input", "kind": "input", "execution_class": "compilable",
     "inputs": [], "output_features": []},
    {"id": "prep", "kind": "transform", "execution_class": "compilable",
     "inputs": ["input"], "output_features": [], "cost_spec": {"fixed_us": 48}},
    {"id": "f1", "kind": "transform", "execution_class": "compilable",
     "inputs": ["prep"], "output_features": ["c1"], "cost_spec": {"fixed_us": 1}},
    {"id": "f2", "kind": "transform", "execution_class": "compilable",
     "inputs": ["prep"], "output_features": ["c2"], "cost_spec": {"fixed_us": 1}},
    {"id": "f3", "kind": "transform", "execution_class": "compilable",
     "inputs": ["input"], "output_features": ["c3"], "cost_spec": {"fixed_us": 40}},
    {"id": "f4", "kind": "transform", "execution_class": "compilable",
     "inputs": ["input"], "output_features": ["c4"], "cost_spec": {"fixed_us": 10}},
    {"id": "model", "kind": "model", "execution_class": "compilable",
     "inputs": ["f1", "f2", "f3", "f4"], "output_features": []}
  ]})";

std::string fig3_csv(int rows) {
  std::ostringstream csv;
  csv << "c1,c2,c3,c4,label\n";
  for (int i = 0; i < rows; ++i) {
    const int y = i % 2;
    const double direction = y ? 1.0 : -1.0;
    csv << direction * (1.0 + 0.01 * (i % 7)) << "," << direction * 0.5 << ","
        << 0.001 * ((i * 37) % 100) << "," << direction * (0.8 + 0.005 * (i % 11)) << "," << y
        << "\n";
  }
  return csv.str();
}

const char* kPlantedWorkload = R"({
  "n_rows": 2500,
  "seed": 7,
  "easy_fraction": 0.9,
  "label_noise": 0.01,
  "groups": [
    {"n_columns": 4, "cost_us": 10.0, "signal_strength": 0.9},
    {"n_columns": 4, "cost_us": 90.0, "signal_strength": 0.75}
  ]
})";

}  // namespace

TEST_CASE("missing dataset fails fast before any graph work") {
  const fs::path pipeline = g_dir / "p.json";
  write_file(pipeline, kFig3Pipeline);
  const RunResult r = run_cli("analyze --pipeline " + pipeline.string() +
                              " --data /nonexistent/data.csv --out " + (g_dir / "o1").string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("does not exist") != std::string::npos);
}

TEST_CASE("analyze prints the grouped pipeline") {
  const fs::path pipeline = g_dir / "fig3.json";
  const fs::path data = g_dir / "fig3.csv";
  write_file(pipeline, kFig3Pipeline);
  write_file(data, fig3_csv(400));
  const RunResult r = run_cli("analyze --pipeline " + pipeline.string() + " --data " +
                              data.string() + " --seed 3 --out " + (g_dir / "o2").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("feature groups (3)") != std::string::npos);
  CHECK(r.output.find("group 1: columns [c1, c2]") != std::string::npos);
  CHECK(fs::exists(g_dir / "o2" / "groups.csv"));
}

TEST_CASE("analyze on a single-feature pipeline prints one group") {
  const fs::path pipeline = g_dir / "single.json";
  const fs::path data = g_dir / "single.csv";
  write_file(pipeline, R"({
    "model_node": "m",
    "nodes": [
      {"id": "in", "kind": "input", "execution_class": "compilable",
       "inputs": [], "output_features": []},
      {"id": "t", "kind": "transform", "execution_class": "compilable",
       "inputs": ["in"], "output_features": ["x"], "cost_spec": {"fixed_us": 4}},
      {"id": "m", "kind": "model", "execution_class": "compilable",
       "inputs": ["t"], "output_features": []}
    ]})");
  std::ostringstream csv;
  csv << "x,label\n";
  for (int i = 0; i < 300; ++i) csv << (i % 2 ? 1.0 : -1.0) * (1 + 0.001 * i) << "," << i % 2 << "\n";
  write_file(data, csv.str());
  const RunResult r = run_cli("analyze --pipeline " + pipeline.string() + " --data " +
                              data.string() + " --out " + (g_dir / "o3").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("feature groups (1)") != std::string::npos);
}

TEST_CASE("analyze twice produces identical group tables") {
  const fs::path pipeline = g_dir / "fig3b.json";
  const fs::path data = g_dir / "fig3b.csv";
  write_file(pipeline, kFig3Pipeline);
  write_file(data, fig3_csv(400));
  const std::string base = "analyze --pipeline " + pipeline.string() + " --data " +
                           data.string() + " --seed 11 --out ";
  REQUIRE(run_cli(base + (g_dir / "rep1").string()).exit_code == 0);
  REQUIRE(run_cli(base + (g_dir / "rep2").string()).exit_code == 0);
  std::ifstream a(g_dir / "rep1" / "groups.csv"), b(g_dir / "rep2" / "groups.csv");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().find("group_id,columns,cost_us,importance") == 0);
}

TEST_CASE("train-cascade on a planted workload writes a config") {
  const fs::path wl = g_dir / "wl.json";
  write_file(wl, kPlantedWorkload);
  const fs::path out = g_dir / "o4";
  const RunResult r =
      run_cli("train-cascade --workload " + wl.string() + " --seed 42 --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out / "cascade_config.json"));
  const size_t pos = r.output.find("predicted speedup: ");
  REQUIRE(pos != std::string::npos);
  const double speedup = std::stod(r.output.substr(pos + 19));
  CHECK(speedup > 2.0);
}

TEST_CASE("train-cascade rejects regression bundles") {
  const fs::path wl = g_dir / "wl.json";
  write_file(wl, kPlantedWorkload);
  const RunResult r = run_cli("train-cascade --workload " + wl.string() +
                              " --model linreg --out " + (g_dir / "o5").string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("regression cannot be cascaded") != std::string::npos);
}

TEST_CASE("train-cascade with an impossible target reports no cascade") {
  const fs::path wl = g_dir / "wl.json";
  write_file(wl, kPlantedWorkload);
  const RunResult r = run_cli("train-cascade --workload " + wl.string() +
                              " --accuracy-target 1.01 --out " + (g_dir / "o6").string());
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("no cascade") != std::string::npos);
}

TEST_CASE("train-topk writes a config and reports r") {
  const fs::path wl = g_dir / "tk.json";
  write_file(wl, R"({
    "n_rows": 3000,
    "seed": 11,
    "easy_fraction": 1.0,
    "label_noise": 0.0,
    "groups": [
      {"n_columns": 6, "cost_us": 10.0, "signal_strength": 0.7},
      {"n_columns": 2, "cost_us": 90.0, "signal_strength": 0.2}
    ]
  })");
  const fs::path out = g_dir / "o7";
  const RunResult r = run_cli("train-topk --workload " + wl.string() +
                              " --k-dist [20] --n-dist [500] --seed 9 --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out / "topk_config.json"));
  CHECK(r.output.find("r_S:") != std::string::npos);
}

TEST_CASE("train-topk without --n-dist is a validation failure") {
  const fs::path wl = g_dir / "wl.json";
  write_file(wl, kPlantedWorkload);
  const RunResult r = run_cli("train-topk --workload " + wl.string());
  CHECK(r.exit_code == 2);
}

TEST_CASE("bench runs from a trained config") {
  const fs::path wl = g_dir / "wl.json";
  write_file(wl, kPlantedWorkload);
  const fs::path out = g_dir / "o8";
  REQUIRE(run_cli("train-cascade --workload " + wl.string() + " --seed 42 --out " + out.string())
              .exit_code == 0);
  const RunResult r = run_cli("bench --workload " + wl.string() + " --seed 42 --mode batch" +
                              " --config " + (out / "cascade_config.json").string() + " --out " +
                              out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("throughput") != std::string::npos);
  CHECK(r.output.find("vs baseline") != std::string::npos);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: cli_tests <path-to-cli> [doctest args]\n");
    return 1;
  }
  g_cli = argv[1];
  g_dir = fs::temp_directory_path() / "inferopt_cli_tests";
  fs::create_directories(g_dir);

  doctest::Context context;
  context.applyCommandLine(argc - 1, argv + 1);
  return context.run();
}
