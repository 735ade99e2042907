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

#ifndef SYMFL_EVALUATION_H_
#define SYMFL_EVALUATION_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symfl/embedding.h"
#include "symfl/federation.h"
#include "symfl/survey.h"

namespace symfl {

// Fraction of all surveyed respondents above which a symptom belongs to the
// high-prevalence group.
inline constexpr double kGroupThreshold = 0.10;

// The symptoms scored after each round. All are genuine disease symptoms,
// so ground truth is uniformly positive.
struct EvalSet {
  std::vector<std::string> symptoms;
  std::vector<double> aggregate_fraction;  // sum of counts / sum of totals
  std::vector<bool> high;                  // fraction > kGroupThreshold
  // prediction >= threshold counts as positive (0.5 ties are positive).
  double decision_threshold = 0.5;

  std::size_t size() const { return symptoms.size(); }
  std::vector<std::string> group_high() const;
  std::vector<std::string> group_low() const;
};

EvalSet build_evalset(const std::vector<CountrySurvey>& surveys);

double predict_symptom(const GlobalModel& model,
                       const EmbeddingTable& embeddings,
                       std::string_view symptom);

// Fraction of eval symptoms predicted positive: k / |symptoms|.
double accuracy(const GlobalModel& model, const EvalSet& evalset,
                const EmbeddingTable& embeddings);

// Identifies one simulation run inside a sweep.
struct RunKey {
  SimulationId simulation = SimulationId::kI;
  NoiseKind mechanism = NoiseKind::kUniformThreshold;
  double noise_level = 0.0;
  std::optional<double> epsilon;  // laplace_dp only
  std::uint64_t seed = 0;
};

struct PredictionRow {
  RunKey key;
  std::int64_t global_epoch = 0;
  std::size_t symptom_index = 0;  // position in the EvalSet
  std::string symptom;
  bool high = false;
  double prediction = 0.0;
};

struct AccuracyRow {
  RunKey key;
  std::int64_t global_epoch = 0;
  double accuracy = 0.0;
};

struct SweepResult {
  std::vector<PredictionRow> predictions;
  std::vector<AccuracyRow> accuracies;

  void append(SweepResult other);
  // Orders by (simulation, mechanism, noise_level, epsilon, seed, epoch,
  // symptom index).
  void sort_canonical();
};

// Scores snapshots 1..global_epochs of one run.
SweepResult evaluate_run(const RunKey& key, const SimulationResult& run,
                         const EvalSet& evalset,
                         const EmbeddingTable& embeddings);

// Everything a sweep point needs besides its own noise setting and seed.
struct SweepInputs {
  SimulationSpec spec;
  const std::vector<CountrySurvey>* surveys = nullptr;
  const MedicalCorpus* corpus = nullptr;
  const EmbeddingTable* embeddings = nullptr;
  // Template for every run; noise and master_seed are overwritten.
  FederationOptions options;
  // Sweep points run concurrently on this many workers (0 = hardware).
  std::size_t threads = 0;
};

// One full run per (level, seed) with the given mechanism. For laplace_dp
// the template's epsilon is used.
SweepResult noise_sweep(const SweepInputs& inputs, NoiseKind kind,
                        std::span<const double> levels,
                        std::span<const std::uint64_t> seeds);

// laplace_dp runs per (epsilon, seed) at a fixed noise level.
SweepResult epsilon_sweep(const SweepInputs& inputs,
                          std::span<const double> epsilons, double noise_level,
                          std::span<const std::uint64_t> seeds);

inline constexpr std::string_view kPredictionCsvHeader =
    "simulation,mechanism,noise_level,epsilon,seed,global_epoch,symptom,group,"
    "prediction";
inline constexpr std::string_view kAccuracyCsvHeader =
    "simulation,mechanism,noise_level,epsilon,seed,global_epoch,accuracy";

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

void write_predictions_csv(std::ostream& out,
                           std::span<const PredictionRow> rows);
void write_accuracy_csv(std::ostream& out, std::span<const AccuracyRow> rows);
// Throws DomainError on a malformed file.
std::vector<AccuracyRow> read_accuracy_csv(std::istream& in);

// Seed-aggregated accuracy per (simulation, mechanism, level, epsilon) at
// `epoch`, or at each configuration's last epoch when absent.
struct AccuracySummary {
  RunKey key;  // seed unused
  std::int64_t global_epoch = 0;
  std::size_t seeds = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};
std::vector<AccuracySummary> summarize_accuracy(
    std::span<const AccuracyRow> rows, std::optional<std::int64_t> epoch);
std::string render_accuracy_table(std::span<const AccuracySummary> summary);

}  // namespace symfl

#endif  // SYMFL_EVALUATION_H_
