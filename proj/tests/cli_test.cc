// Copyright 2026 The symfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "symfl/commands.h"
#include "symfl/config.h"
#include "symfl/errors.h"
#include "test_util.h"

namespace symfl {
namespace {

using testing::data_path;
using testing::read_text;
using testing::TempDir;
using testing::write_text;

RunConfig bundled() {
  RunConfig c;
  c.embeddings_path = data_path("embeddings_50d.txt");
  c.surveys_path = data_path("surveys.txt");
  c.corpus_path = data_path("medical_corpus.txt");
  return c;
}

TEST(RunConfig, ParsesJson) {
  RunConfig c = run_config_from_json(R"({
    "simulation": "III", "mechanism": "laplace_dp", "noise_level": 0.5,
    "epsilon": 2, "seed": 9, "scale": 0.1, "weighting": "uniform",
    "fixed_client_data": true, "global_epochs": 3,
    "sweep": {"axis": "epsilon", "values": [0.5, 2], "seeds": [1, 2, 3]}
  })");
  EXPECT_EQ(c.simulation, SimulationId::kIII);
  EXPECT_EQ(c.mechanism, NoiseKind::kLaplaceDp);
  EXPECT_EQ(c.noise_level, 0.5);
  EXPECT_EQ(c.master_seed, 9u);
  EXPECT_EQ(c.weighting, Weighting::kUniform);
  EXPECT_TRUE(c.fixed_client_data);
  EXPECT_EQ(c.sweep_seeds.size(), 3u);
  SimulationSpec s = c.simulation_spec();
  EXPECT_EQ(s.n_clients, 90);
  EXPECT_EQ(s.global_epochs, 3);
  RunConfig again = run_config_from_json(run_config_to_json(c));
  EXPECT_EQ(run_config_to_json(again), run_config_to_json(c));
}

TEST(RunConfig, RejectsBadValues) {
  EXPECT_THROW(run_config_from_json(R"({"noise_level": 1.2})").validate(),
               DomainError);
  EXPECT_THROW(run_config_from_json(R"({"scale": 0})").validate(),
               DomainError);
  EXPECT_THROW(run_config_from_json(R"({"colour": "red"})"), DomainError);
  EXPECT_THROW(run_config_from_json(R"({"seed": "abc"})"), DomainError);
  EXPECT_THROW(run_config_from_json("{"), DomainError);
  EXPECT_THROW(load_run_config("/nonexistent/config.json"), IoError);
}

TEST(Commands, ValidateBundledFixtures) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_validate(bundled(), out, err), kExitOk) << err.str();
  EXPECT_NE(out.str().find("16 prominent symptoms"), std::string::npos);
  EXPECT_NE(out.str().find("5 countries"), std::string::npos);
  EXPECT_NE(out.str().find("112 terms"), std::string::npos);
}

TEST(Commands, ValidateNamesUnembeddableTerms) {
  TempDir dir("cli_qzxv");
  write_text(dir / "corpus.txt",
             read_text(data_path("medical_corpus.txt")) + "\nqzxv\n");
  RunConfig c = bundled();
  c.corpus_path = dir / "corpus.txt";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_validate(c, out, err), kExitDomain);
  EXPECT_NE(err.str().find("qzxv"), std::string::npos);
}

TEST(Commands, MissingEmbeddingsIsIoFailure) {
  RunConfig c = bundled();
  c.embeddings_path = "/nonexistent/glove.txt";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_validate(c, out, err), kExitIo);
  EXPECT_NE(err.str().find("/nonexistent/glove.txt"), std::string::npos);
}

TEST(Commands, RunRejectsBadConfigBeforeWork) {
  TempDir dir("cli_reject");
  RunConfig c = bundled();
  c.output_dir = dir / "out";
  c.master_seed = 1;
  c.noise_level = 1.2;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(c, out, err), kExitDomain);
  EXPECT_FALSE(std::filesystem::exists(c.output_dir));
  c.noise_level = 0.0;
  c.master_seed.reset();
  EXPECT_EQ(cmd_run(c, out, err), kExitDomain);
}

TEST(Commands, RunWritesReproducibleArtifacts) {
  TempDir dir("cli_run");
  RunConfig c = bundled();
  c.master_seed = 42;
  c.scale = 0.01;
  c.global_epochs = 2;
  std::ostringstream out, err;
  c.output_dir = dir / "a";
  ASSERT_EQ(cmd_run(c, out, err), kExitOk) << err.str();
  c.output_dir = dir / "b";
  c.threads = 3;
  ASSERT_EQ(cmd_run(c, out, err), kExitOk) << err.str();
  for (const char* name : {"predictions.csv", "accuracy.csv", "model.ckpt"}) {
    EXPECT_EQ(read_text(dir / "a" / name), read_text(dir / "b" / name)) << name;
  }
  EXPECT_TRUE(std::filesystem::exists(dir / "a" / "checkpoints" / "epoch_2.ckpt"));
  EXPECT_EQ(read_text(dir / "a" / "checkpoints" / "epoch_2.ckpt"),
            read_text(dir / "a" / "model.ckpt"));
  std::string rounds = read_text(dir / "a" / "rounds.jsonl");
  EXPECT_EQ(std::count(rounds.begin(), rounds.end(), '\n'), 2);

  // The manifest alone reproduces the run.
  RunConfig replay = load_run_config(dir / "a" / "manifest.json");
  replay.output_dir = dir / "c";
  ASSERT_EQ(cmd_run(replay, out, err), kExitOk) << err.str();
  EXPECT_EQ(read_text(dir / "a" / "predictions.csv"),
            read_text(dir / "c" / "predictions.csv"));

  std::ostringstream table;
  EXPECT_EQ(cmd_report(dir / "a", std::nullopt, table, err), kExitOk);
  EXPECT_NE(table.str().find("| I | uniform_threshold |"), std::string::npos);
  EXPECT_EQ(cmd_report(dir / "missing", std::nullopt, table, err), kExitIo);
}

TEST(Commands, SweepNeedsSeeds) {
  TempDir dir("cli_sweep");
  RunConfig c = bundled();
  c.output_dir = dir / "out";
  c.scale = 0.01;
  c.global_epochs = 1;
  c.sweep_axis = "epsilon";
  c.sweep_values = {0.5, 2.0, 10.0};
  std::ostringstream out, err;
  EXPECT_EQ(cmd_sweep(c, out, err), kExitDomain);
  c.sweep_seeds = {1};
  ASSERT_EQ(cmd_sweep(c, out, err), kExitOk) << err.str();
  std::string csv = read_text(dir / "out" / "accuracy.csv");
  EXPECT_NE(csv.find("I,laplace_dp,0.5,10,1,1,"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SYMFL_CLI_PATH) + " " + args +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

TEST(Cli, ExitCodes) {
  if (std::string(SYMFL_CLI_PATH).empty()) GTEST_SKIP() << "tool not built";
  const std::string data = std::string(" --embeddings ") +
                           data_path("embeddings_50d.txt").string() +
                           " --surveys " + data_path("surveys.txt").string() +
                           " --corpus " +
                           data_path("medical_corpus.txt").string();
  EXPECT_EQ(run_cli("validate" + data), 0);
  EXPECT_EQ(run_cli("validate --embeddings /nonexistent/e.txt"), 2);
  EXPECT_EQ(run_cli("run --seed 1 --noise-level 1.2" + data), 1);
  EXPECT_EQ(run_cli("run --mechanism bogus --seed 1" + data), 1);
  EXPECT_EQ(run_cli("frobnicate"), 1);
}

}  // namespace
}  // namespace symfl
