// Copyright 2026 The confset Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

const fs::path kData = CONFSET_TEST_DATA_DIR;

struct Result {
  int exit_code = -1;
  std::string output;
};

Result Cli(const std::string& args) {
  const std::string cmd = std::string(CONFSET_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) {
    r.output.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("confset_cli_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()
                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  fs::path dir_;
};

TEST_F(CliTest, HelpAndUsage) {
  auto r = Cli("--help");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("validate"), std::string::npos);
  EXPECT_EQ(Cli("").exit_code, 2);
  EXPECT_EQ(Cli("frobnicate").exit_code, 2);
  EXPECT_EQ(Cli("run --help").exit_code, 0);
  EXPECT_EQ(Cli("validate --input x.jsonl").exit_code, 2);
}

TEST_F(CliTest, ValidateExitCodes) {
  ASSERT_EQ(Cli("synth --n 3090 --k 6 --dataset AI2D --output " +
                Path("ai2d.jsonl"))
                .exit_code,
            0);
  auto ok = Cli("validate --input " + Path("ai2d.jsonl") + " --dataset AI2D");
  EXPECT_EQ(ok.exit_code, 0) << ok.output;
  EXPECT_NE(ok.output.find("3090"), std::string::npos);

  ASSERT_EQ(Cli("synth --n 100 --k 6 --dataset AI2D --output " +
                Path("short.jsonl"))
                .exit_code,
            0);
  EXPECT_EQ(
      Cli("validate --input " + Path("short.jsonl") + " --dataset AI2D")
          .exit_code,
      1);

  ASSERT_EQ(Cli("synth --n 3090 --k 7 --dataset AI2D --output " +
                Path("wide.jsonl"))
                .exit_code,
            0);
  EXPECT_EQ(
      Cli("validate --input " + Path("wide.jsonl") + " --dataset AI2D")
          .exit_code,
      1);

  EXPECT_EQ(
      Cli("validate --input " + Path("nope.jsonl") + " --dataset AI2D")
          .exit_code,
      2);
  EXPECT_EQ(
      Cli("validate --input " + Path("ai2d.jsonl") + " --dataset ImageNet")
          .exit_code,
      2);
}

TEST_F(CliTest, RunFixtureWritesReports) {
  auto r = Cli("run --config " + (kData / "fixture_config.json").string() +
               " --output-dir " + Path("out") + " --group-by dataset");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  for (const char* f : {"report.csv", "report.json", "report.md",
                        "summary.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
  }
  EXPECT_FALSE(fs::exists(dir_ / "out" / "accuracy_vs_set_size.csv"));
}

TEST_F(CliTest, RunIsByteDeterministic) {
  const std::string base =
      "run --config " + (kData / "fixture_config.json").string() +
      " --format csv json markdown plot --output-dir ";
  ASSERT_EQ(Cli(base + Path("a")).exit_code, 0);
  ASSERT_EQ(Cli(base + Path("b")).exit_code, 0);
  for (const char* f : {"report.csv", "report.json", "report.md",
                        "accuracy_vs_set_size.csv"}) {
    EXPECT_EQ(Slurp(dir_ / "a" / f), Slurp(dir_ / "b" / f)) << f;
    EXPECT_FALSE(Slurp(dir_ / "a" / f).empty()) << f;
  }
}

TEST_F(CliTest, RunErrorsAndOverrides) {
  const std::string input = (kData / "synth_fixture.jsonl").string();
  EXPECT_EQ(Cli("run --input " + input + " --alpha 1.5 --output-dir " +
                Path("o"))
                .exit_code,
            2);
  EXPECT_EQ(Cli("run --input " + Path("missing.jsonl") + " --output-dir " +
                Path("o"))
                .exit_code,
            2);
  EXPECT_EQ(Cli("run --output-dir " + Path("o")).exit_code, 2);
  EXPECT_EQ(Cli("run --input " + input + " --score-fn XYZ --output-dir " +
                Path("o"))
                .exit_code,
            2);

  {
    std::ofstream bad(Path("bad.jsonl"));
    bad << "{not json}\n";
  }
  auto r = Cli("run --input " + input + " " + Path("bad.jsonl") +
               " --output-dir " + Path("o"));
  EXPECT_EQ(r.exit_code, 1) << r.output;
  EXPECT_TRUE(fs::exists(dir_ / "o" / "report.csv"));

  r = Cli("run --input " + input +
          " --score-fn LAC --seed 4 5 --alpha 0.05 0.2 --format csv"
          " --output-dir " + Path("grid"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto csv = Slurp(dir_ / "grid" / "report.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_FALSE(fs::exists(dir_ / "grid" / "report.json"));
}

TEST_F(CliTest, SynthToStdout) {
  auto r = Cli("synth --n 5 --k 3 --seed 2");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(std::count(r.output.begin(), r.output.end(), '\n'), 5);
  EXPECT_NE(r.output.find("synth-000004"), std::string::npos);
  EXPECT_EQ(Cli("synth --n 5 --k 11").exit_code, 2);
}

TEST_F(CliTest, CollectRejectsBadConfigWithoutNetwork) {
  {
    std::ofstream q(Path("q.jsonl"));
    q << R"({"record_id": "r", "dataset_id": "MMMU", "question": "Q", )"
         R"("options": ["a", "b"], "true_label": "A"})"
      << '\n';
  }
  EXPECT_EQ(Cli("collect --questions " + Path("q.jsonl") + " --output " +
                Path("o.jsonl") + " --model m --base-url " +
                "http://127.0.0.1:9/v1 --concurrency 0")
                .exit_code,
            2);
  EXPECT_EQ(Cli("collect --questions " + Path("missing.jsonl") +
                " --output " + Path("o.jsonl") +
                " --model m --base-url http://127.0.0.1:9/v1")
                .exit_code,
            2);
}

}  // namespace
