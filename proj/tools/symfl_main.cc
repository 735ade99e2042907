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

// Command-line front end: validate, run, sweep and report.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "symfl/commands.h"
#include "symfl/config.h"
#include "symfl/federation.h"
#include "symfl/synth.h"

namespace {

// Flag values; anything set here wins over the config file.
struct Overrides {
  std::string config_path;
  std::optional<std::string> embeddings, surveys, corpus, output_dir;
  std::optional<std::string> simulation, mechanism, weighting, negative_pool;
  std::optional<double> noise_level, epsilon, scale, participation;
  std::optional<double> learning_rate;
  std::optional<std::uint64_t> seed;
  std::optional<int> global_epochs;
  std::optional<std::int64_t> epoch;
  std::optional<std::size_t> batch_size, threads;
  bool fixed_client_data = false;
  bool unweighted = false;
  std::optional<std::string> axis;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
};

void add_run_options(CLI::App* app, Overrides& o) {
  app->add_option("-c,--config", o.config_path, "JSON run configuration");
  app->add_option("--embeddings", o.embeddings, "GloVe-format embedding file");
  app->add_option("--surveys", o.surveys, "survey table");
  app->add_option("--corpus", o.corpus, "medical corpus");
  app->add_option("-o,--output-dir", o.output_dir, "output directory");
  app->add_option("--simulation", o.simulation, "I, II, III or IV");
  app->add_option("--mechanism", o.mechanism,
                  "uniform_threshold, normal_threshold or laplace_dp");
  app->add_option("--noise-level", o.noise_level, "noise level in [0,1]");
  app->add_option("--epsilon", o.epsilon, "Laplace privacy budget");
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--scale", o.scale, "size and client-count multiplier");
  app->add_option("--participation", o.participation,
                  "fraction of clients selected per round");
  app->add_option("--global-epochs", o.global_epochs, "federated rounds");
  app->add_flag("--fixed-client-data", o.fixed_client_data,
                "synthesize each client's data once instead of every round");
  app->add_option("--weighting", o.weighting, "by_examples or uniform");
  app->add_flag("--unweighted", o.unweighted, "same as --weighting uniform");
  app->add_option("--negative-pool", o.negative_pool,
                  "outside_country or outside_all_surveys");
  app->add_option("--epoch", o.epoch, "epoch for the summary table");
  app->add_option("--learning-rate", o.learning_rate, "Adam step size");
  app->add_option("--batch-size", o.batch_size, "minibatch size");
  app->add_option("--threads", o.threads, "worker threads (0 = all cores)");
}

void add_sweep_options(CLI::App* app, Overrides& o) {
  app->add_option("--axis", o.axis, "noise or epsilon");
  app->add_option("--values", o.values, "sweep points");
  app->add_option("--seeds", o.seeds, "seeds for every point");
}

symfl::RunConfig resolve(const Overrides& o) {
  symfl::RunConfig c;
  if (!o.config_path.empty()) c = symfl::load_run_config(o.config_path);
  if (o.embeddings) c.embeddings_path = *o.embeddings;
  if (o.surveys) c.surveys_path = *o.surveys;
  if (o.corpus) c.corpus_path = *o.corpus;
  if (o.output_dir) c.output_dir = *o.output_dir;
  if (o.simulation) c.simulation = symfl::parse_simulation_id(*o.simulation);
  if (o.mechanism) c.mechanism = symfl::parse_noise_kind(*o.mechanism);
  if (o.noise_level) c.noise_level = *o.noise_level;
  if (o.epsilon) c.epsilon = *o.epsilon;
  if (o.seed) c.master_seed = *o.seed;
  if (o.scale) c.scale = *o.scale;
  if (o.participation) c.participation_fraction = *o.participation;
  if (o.global_epochs) c.global_epochs = *o.global_epochs;
  if (o.fixed_client_data) c.fixed_client_data = true;
  if (o.weighting) c.weighting = symfl::parse_weighting(*o.weighting);
  if (o.unweighted) c.weighting = symfl::Weighting::kUniform;
  if (o.negative_pool) {
    c.negative_pool = symfl::parse_negative_pool(*o.negative_pool);
  }
  if (o.epoch) c.report_epoch = *o.epoch;
  if (o.learning_rate) c.learning_rate = *o.learning_rate;
  if (o.batch_size) c.batch_size = *o.batch_size;
  if (o.threads) c.threads = *o.threads;
  if (o.axis) c.sweep_axis = *o.axis;
  if (!o.values.empty()) c.sweep_values = o.values;
  if (!o.seeds.empty()) c.sweep_seeds = o.seeds;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated symptom-recovery simulator"};
  app.require_subcommand(1);
  Overrides o;

  auto* validate = app.add_subcommand("validate", "check input files");
  add_run_options(validate, o);
  auto* run = app.add_subcommand("run", "run one simulation");
  add_run_options(run, o);
  auto* sweep = app.add_subcommand("sweep", "run a noise or epsilon sweep");
  add_run_options(sweep, o);
  add_sweep_options(sweep, o);

  auto* report = app.add_subcommand("report", "summarize an accuracy CSV");
  std::string report_input;
  std::optional<std::int64_t> report_epoch;
  report->add_option("input", report_input, "accuracy.csv or run directory")
      ->required();
  report->add_option("--epoch", report_epoch, "epoch to tabulate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? symfl::kExitOk : symfl::kExitDomain;
  }

  if (report->parsed()) {
    return symfl::cmd_report(report_input, report_epoch, std::cout, std::cerr);
  }
  symfl::RunConfig config;
  const int resolved = symfl::guarded(std::cerr, [&] {
    config = resolve(o);
    return symfl::kExitOk;
  });
  if (resolved != symfl::kExitOk) return resolved;
  if (validate->parsed()) {
    return symfl::cmd_validate(config, std::cout, std::cerr);
  }
  if (run->parsed()) return symfl::cmd_run(config, std::cout, std::cerr);
  return symfl::cmd_sweep(config, std::cout, std::cerr);
}
