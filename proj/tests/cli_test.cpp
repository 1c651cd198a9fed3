// Copyright 2026 The jcprog Authors
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

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "jcprog/cli.hpp"

namespace jcprog {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "jcprog");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("jcprog_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, VerifyShippedCnotFile) {
  const std::string report = path("report.json");
  const RunResult r = run_cli({"verify", "--sequence", std::string(JCPROG_DATA_DIR) + "/cnot72.json",
                               "--target", "cnot", "--out", report});
  const Json j = read_json_file(report);
  EXPECT_EQ(j.at("readings").size(), 4u);
  const bool reproduced = j.at("reproduced").get<bool>();
  EXPECT_EQ(r.code, reproduced ? 0 : 1);
  EXPECT_GE(j.at("best_fidelity").get<double>(), 0.98);
}

TEST_F(CliTest, VerifyReportRoundTrips) {
  const std::string report = path("swap.json");
  const RunResult r =
      run_cli({"verify", "--builtin", "swap", "--target", "swap-printed", "--out", report});
  EXPECT_EQ(r.code, 1);
  const std::string text = slurp(report);
  const VerificationReport parsed = verification_report_from_json(parse_json_text(text));
  EXPECT_EQ(report_to_json(parsed).dump(2) + "\n", text);
  EXPECT_FALSE(parsed.reproduced);
  EXPECT_TRUE(parsed.produced_unitary);
  EXPECT_FALSE(parsed.discrepancy.empty());
  EXPECT_NE(r.err.find("no reading"), std::string::npos);
}

TEST_F(CliTest, VerifyEmptyIdentityPasses) {
  const std::string seq = path("empty.json");
  std::ofstream(seq) << R"({"name": "empty", "pattern": [], "sigmas": []})";
  const RunResult r = run_cli({"verify", "--sequence", seq, "--target", "identity"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"reproduced\": true"), std::string::npos);
}

TEST_F(CliTest, MalformedJsonIsUsageErrorWithPosition) {
  const std::string seq = path("bad.json");
  const std::string report = path("never.json");
  std::ofstream(seq) << "{\n  \"name\": \"x\",\n  \"sigmas\": [1,,2]\n}\n";
  const RunResult r = run_cli({"verify", "--sequence", seq, "--target", "cnot", "--out", report});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.json:3:"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(report));
}

TEST_F(CliTest, UsageErrorsWriteNothing) {
  const std::string report = path("never.json");
  const std::vector<std::vector<std::string>> cases = {
      {"verify", "--builtin", "cnot", "--target", "nope", "--out", report},
      {"verify", "--builtin", "nope", "--target", "cnot", "--out", report},
      {"verify", "--target", "cnot", "--out", report},
      {"verify", "--builtin", "cnot", "--target", "cnot", "--threshold", "2", "--out", report},
      {"synthesize", "--target", "random:x", "--out", report},
      {"synthesize", "--target", "identity", "--M", "0", "--out", report},
      {"synthesize", "--target", "identity", "--pattern", "zig", "--out", report},
      {"validate", "--builtin", "cnot", "--n-max", "1", "--out", report},
      {"validate", "--builtin", "cnot", "--omega", "-1", "--out", report},
      {"validate", "--builtin", "cnot", "--delta", "1e9", "--ratio", "10", "--out", report},
      {"export", "--builtin", "cnot", "--bogus", "--out", report},
      {"estimate", "--band", "5e9-15e9"},
      {"compile", "--circuit", path("missing.txt")},
      {},
  };
  for (const auto& args : cases) {
    const RunResult r = run_cli(args);
    EXPECT_EQ(r.code, 2) << (args.empty() ? "<none>" : args[0]) << ": " << r.err;
    EXPECT_FALSE(fs::exists(report));
  }
}

TEST_F(CliTest, HelpExitsZero) {
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST_F(CliTest, EstimateTable) {
  const RunResult r =
      run_cli({"estimate", "--omega", "1e8", "--T", "1e-4", "--band", "5e9:15e9", "--spacing", "1e9"});
  EXPECT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::string line;
  std::map<std::string, std::string> rows;
  while (std::getline(lines, line)) {
    const auto split = line.find_last_of(' ');
    std::string key = line.substr(0, split);
    key.erase(key.find_last_not_of(' ') + 1);
    rows[key] = line.substr(split + 1);
  }
  EXPECT_EQ(rows["gates in coherence"], "15");
  EXPECT_EQ(rows["modes in band"], "10");
}

TEST_F(CliTest, SynthesizeIsByteIdentical) {
  const std::string a = path("a.json");
  const std::string b = path("b.json");
  const std::string ta = path("a.trace");
  const std::string tb = path("b.trace");
  const RunResult ra = run_cli({"synthesize", "--target", "identity", "--M", "72", "--seed", "7",
                                "--restarts", "4", "--out", a, "--trace", ta});
  const RunResult rb = run_cli({"synthesize", "--target", "identity", "--M", "72", "--seed", "7",
                                "--restarts", "4", "--out", b, "--trace", tb});
  EXPECT_EQ(ra.code, 0);
  EXPECT_EQ(rb.code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(ta), slurp(tb));
  EXPECT_FALSE(slurp(ta).empty());
  // The output is a valid sequence file for verify.
  const RunResult v = run_cli({"verify", "--sequence", a, "--target", "identity"});
  EXPECT_EQ(v.code, 0);
}

TEST_F(CliTest, SynthesizeShortSequenceFails) {
  const RunResult r = run_cli({"synthesize", "--target", "random:3", "--M", "30", "--restarts",
                               "2", "--max-iter", "300", "--out", path("s.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("below 63"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("s.json")));
}

TEST_F(CliTest, ValidateWritesReportAndSchedule) {
  const std::string report = path("v.json");
  const std::string csv = path("s.csv");
  const RunResult r = run_cli({"validate", "--builtin", "cnot", "--omega", "1e8", "--ratio", "50",
                               "--out", report, "--schedule-csv", csv});
  EXPECT_EQ(r.code, 0);
  const ValidationReport v = validation_report_from_json(read_json_file(report));
  EXPECT_NEAR(v.phase_robust_infidelity, 0.106422776264, 1e-9);
  std::ifstream in(csv);
  MachineConfig c;
  c.half_detuning = 5e9;
  EXPECT_EQ(read_schedule_csv(in, c).segments.size(), 144u);
  const RunResult strict = run_cli({"validate", "--builtin", "cnot", "--ratio", "50",
                                    "--max-infidelity", "0.01", "--out", path("v2.json")});
  EXPECT_EQ(strict.code, 1);
}

TEST_F(CliTest, ValidateWarnsWhenOffResonanceLarge) {
  const RunResult r = run_cli({"validate", "--builtin", "cnot", "--ratio", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST_F(CliTest, CompileCircuit) {
  const std::string circuit = path("c.txt");
  std::ofstream(circuit) << "# two gates\nCNOT 0 1\nLOCAL 3 0.1 0.2 0.3\n";
  const RunResult r = run_cli({"compile", "--circuit", circuit});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("217"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("yes"), std::string::npos);
  std::ofstream long_circuit(path("long.txt"));
  for (int k = 0; k < 16; ++k) long_circuit << "CNOT 0 1\n";
  long_circuit.close();
  EXPECT_EQ(run_cli({"compile", "--circuit", path("long.txt")}).code, 1);
  EXPECT_EQ(run_cli({"compile", "--circuit", circuit, "--modes", "2"}).code, 2);
}

TEST_F(CliTest, ExportMatchesShippedData) {
  const RunResult r = run_cli({"export", "--builtin", "cnot"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, slurp(std::string(JCPROG_DATA_DIR) + "/cnot72.json"));
  const RunResult s = run_cli({"export", "--builtin", "swap"});
  EXPECT_EQ(s.out, slurp(std::string(JCPROG_DATA_DIR) + "/swap72.json"));
}

}  // namespace
}  // namespace jcprog
