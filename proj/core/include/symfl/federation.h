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

#ifndef SYMFL_FEDERATION_H_
#define SYMFL_FEDERATION_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symfl/embedding.h"
#include "symfl/mlp.h"
#include "symfl/survey.h"
#include "symfl/synth.h"

namespace symfl {

enum class SimulationId { kI, kII, kIII, kIV };

std::string_view to_string(SimulationId id);
SimulationId parse_simulation_id(std::string_view name);

// Client topology of one simulation. Sizes count simulated survey
// respondents per client.
struct SimulationSpec {
  SimulationId id = SimulationId::kI;
  std::int64_t min_persons = 1;
  std::int64_t max_persons = 1;
  std::int64_t n_clients = 1;
  int local_epochs = 5;
  int global_epochs = 5;
  double participation_fraction = 1.0;

  // Defaults for I-IV: 20 x 60000, 80 x 10000-20000, 900 x 500-2000 and
  // 100000 x 2-12, five local and five global epochs, full participation
  // except 5% for IV.
  static SimulationSpec preset(SimulationId id);

  // Multiplies sizes and client count by `scale`, rounding up, minimum 1.
  SimulationSpec scaled(double scale) const;

  // Number of clients sampled per round: ceil(fraction * n_clients).
  std::size_t clients_per_round() const;

  void validate() const;
};

struct ClientSlot {
  std::int64_t client_id = 0;
  std::int64_t n_persons = 0;
  std::size_t country = 0;  // index into the survey list
};

// n_persons uniform on [min_persons, max_persons]; country via
// assign_countries. Client ids are 0..n_clients-1.
std::vector<ClientSlot> build_population(
    const SimulationSpec& spec, const std::vector<CountrySurvey>& surveys,
    Stream& rng);

struct ClientUpdate {
  std::int64_t client_id = 0;
  MlpParameters params;
  std::int64_t weight = 0;  // example count, or 1 for uniform weighting
};

// Weighted mean of the client parameters with weights n_k / sum(n).
// Summation runs in ascending client_id order. Throws DomainError("no
// surviving clients this round") on an empty list.
MlpParameters fedavg_aggregate(std::span<const ClientUpdate> updates);

enum class Weighting { kByExamples, kUniform };

std::string_view to_string(Weighting w);
Weighting parse_weighting(std::string_view name);

struct GlobalModel {
  MlpParameters params;
  std::int64_t round_index = 0;
};

struct RoundReport {
  std::int64_t round_index = 0;
  std::int64_t selected_clients = 0;
  std::int64_t participating_clients = 0;
  std::int64_t skipped_empty_clients = 0;
  double mean_local_loss = 0.0;
  double wall_time_seconds = 0.0;
};

struct FederationOptions {
  NoiseMechanism noise;
  TrainConfig train;  // local_epochs is taken from the SimulationSpec
  Weighting weighting = Weighting::kByExamples;
  NegativePool negative_pool = NegativePool::kOutsideCountry;
  bool fixed_client_data = false;
  std::uint64_t master_seed = 0;
  // Worker threads for client training; 0 means hardware concurrency.
  // Results do not depend on this value.
  std::size_t threads = 0;
};

struct SimulationResult {
  std::vector<ClientSlot> population;
  // snapshots[r] is the global model after r rounds; snapshots[0] is the
  // initialisation.
  std::vector<GlobalModel> snapshots;
  std::vector<RoundReport> reports;
};

// FedAvg over a simulated client population. Every random choice comes from
// a stream keyed by (master_seed, purpose, client_id, round), so results are
// independent of scheduling and thread count.
class FederatedSimulation {
 public:
  FederatedSimulation(SimulationSpec spec,
                      const std::vector<CountrySurvey>& surveys,
                      const MedicalCorpus& corpus,
                      const EmbeddingTable& embeddings,
                      FederationOptions options);

  const SimulationSpec& spec() const { return spec_; }
  const std::vector<ClientSlot>& population() const { return population_; }
  const FederationOptions& options() const { return options_; }
  std::shared_ptr<const FeatureBank> bank() const { return bank_; }

  GlobalModel initial_model() const;

  // Selects clients, synthesises their data, trains locally from the
  // broadcast parameters and aggregates the non-empty ones.
  GlobalModel run_round(const GlobalModel& model, RoundReport* report) const;

  // Local data of one client for one round, as run_round would build it.
  ClientDataset client_data(const ClientSlot& slot, std::int64_t round) const;

  // init_params, then global_epochs rounds, keeping every snapshot.
  SimulationResult run() const;

 private:
  std::vector<std::size_t> select_clients(std::int64_t round) const;

  SimulationSpec spec_;
  FederationOptions options_;
  std::shared_ptr<const FeatureBank> bank_;
  std::vector<ClientSynthesizer> synthesizers_;  // one per survey
  std::vector<ClientSlot> population_;
};

SimulationResult run_simulation(const SimulationSpec& spec,
                                const std::vector<CountrySurvey>& surveys,
                                const MedicalCorpus& corpus,
                                const EmbeddingTable& embeddings,
                                const FederationOptions& options);

}  // namespace symfl

#endif  // SYMFL_FEDERATION_H_
