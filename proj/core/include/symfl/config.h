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

#ifndef SYMFL_CONFIG_H_
#define SYMFL_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symfl/federation.h"
#include "symfl/synth.h"

namespace symfl {

// Everything needed to reproduce a run. Loaded from a JSON file; command
// line flags override individual fields.
struct RunConfig {
  std::filesystem::path embeddings_path = "data/embeddings_50d.txt";
  std::filesystem::path surveys_path = "data/surveys.txt";
  std::filesystem::path corpus_path = "data/medical_corpus.txt";
  std::filesystem::path output_dir = "out";

  SimulationId simulation = SimulationId::kI;
  NoiseKind mechanism = NoiseKind::kUniformThreshold;
  // Unset means 0 for single runs and noise sweeps, 0.5 for epsilon sweeps.
  std::optional<double> noise_level;
  double epsilon = 1.0;
  std::optional<std::uint64_t> master_seed;  // mandatory for run
  double scale = 1.0;
  std::optional<double> participation_fraction;
  std::optional<int> global_epochs;
  bool fixed_client_data = false;
  Weighting weighting = Weighting::kByExamples;
  NegativePool negative_pool = NegativePool::kOutsideCountry;
  std::optional<std::int64_t> report_epoch;
  double learning_rate = 0.001;
  std::size_t batch_size = 32;
  std::size_t threads = 0;

  // Sweep settings (the "sweep" object of the config file).
  std::string sweep_axis;  // "noise" or "epsilon"
  std::vector<double> sweep_values;
  std::vector<std::uint64_t> sweep_seeds;

  // Range checks that need no file access. Throws DomainError.
  void validate() const;

  NoiseMechanism noise() const;
  // Preset for `simulation`, scaled, with the overrides applied.
  SimulationSpec simulation_spec() const;
  FederationOptions federation_options() const;
};

// Throws DomainError on unknown keys or ill-typed values.
// Also accepts a run manifest, whose "config" member is used.
RunConfig run_config_from_json(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);
// Canonical JSON echo of every resolved field (stable key order).
std::string run_config_to_json(const RunConfig& config, int indent = 2);

}  // namespace symfl

#endif  // SYMFL_CONFIG_H_
