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

#include "symfl/federation.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "symfl/errors.h"
#include "symfl/parallel.h"

namespace symfl {
namespace {

std::int64_t scale_up(std::int64_t v, double scale) {
  // The small offset keeps products such as 60000 * 0.01 from rounding up
  // past the intended integer.
  auto s = static_cast<std::int64_t>(
      std::ceil(static_cast<double>(v) * scale - 1e-9));
  return std::max<std::int64_t>(1, s);
}

}  // namespace

std::string_view to_string(SimulationId id) {
  switch (id) {
    case SimulationId::kI:
      return "I";
    case SimulationId::kII:
      return "II";
    case SimulationId::kIII:
      return "III";
    case SimulationId::kIV:
      return "IV";
  }
  return "?";
}

SimulationId parse_simulation_id(std::string_view name) {
  for (SimulationId id : {SimulationId::kI, SimulationId::kII,
                          SimulationId::kIII, SimulationId::kIV}) {
    if (name == to_string(id)) return id;
  }
  throw DomainError("unknown simulation '" + std::string(name) +
                    "' (expected I, II, III or IV)");
}

SimulationSpec SimulationSpec::preset(SimulationId id) {
  SimulationSpec s;
  s.id = id;
  switch (id) {
    case SimulationId::kI:
      s.min_persons = s.max_persons = 60000;
      s.n_clients = 20;
      break;
    case SimulationId::kII:
      s.min_persons = 10000;
      s.max_persons = 20000;
      s.n_clients = 80;
      break;
    case SimulationId::kIII:
      s.min_persons = 500;
      s.max_persons = 2000;
      s.n_clients = 900;
      break;
    case SimulationId::kIV:
      s.min_persons = 2;
      s.max_persons = 12;
      s.n_clients = 100000;
      s.participation_fraction = 0.05;
      break;
  }
  return s;
}

SimulationSpec SimulationSpec::scaled(double scale) const {
  if (!(scale > 0.0 && scale <= 1.0)) {
    throw DomainError("scale must lie in (0, 1]");
  }
  SimulationSpec s = *this;
  s.min_persons = scale_up(min_persons, scale);
  s.max_persons = scale_up(max_persons, scale);
  s.n_clients = scale_up(n_clients, scale);
  return s;
}

std::size_t SimulationSpec::clients_per_round() const {
  auto k = static_cast<std::int64_t>(std::ceil(
      participation_fraction * static_cast<double>(n_clients) - 1e-9));
  return static_cast<std::size_t>(std::clamp<std::int64_t>(k, 1, n_clients));
}

void SimulationSpec::validate() const {
  if (min_persons < 1 || max_persons < min_persons) {
    throw DomainError("invalid size range");
  }
  if (n_clients < 1) throw DomainError("n_clients must be positive");
  if (local_epochs < 1) throw DomainError("local_epochs must be positive");
  if (global_epochs < 0) throw DomainError("global_epochs must be >= 0");
  if (!(participation_fraction > 0.0 && participation_fraction <= 1.0)) {
    throw DomainError("participation_fraction must lie in (0, 1]");
  }
  if (participation_fraction * static_cast<double>(n_clients) < 1.0 - 1e-9) {
    throw DomainError("participation_fraction * n_clients must be >= 1");
  }
}

std::vector<ClientSlot> build_population(
    const SimulationSpec& spec, const std::vector<CountrySurvey>& surveys,
    Stream& rng) {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.n_clients);
  std::vector<ClientSlot> clients(n);
  for (std::size_t i = 0; i < n; ++i) {
    clients[i].client_id = static_cast<std::int64_t>(i);
    clients[i].n_persons = rng.uniform_int(spec.min_persons, spec.max_persons);
  }
  auto countries = assign_countries(n, surveys, rng);
  for (std::size_t i = 0; i < n; ++i) clients[i].country = countries[i];
  return clients;
}

MlpParameters fedavg_aggregate(std::span<const ClientUpdate> updates) {
  if (updates.empty()) throw DomainError("no surviving clients this round");
  std::vector<std::size_t> order(updates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return updates[a].client_id < updates[b].client_id;
  });

  std::int64_t total = 0;
  for (const auto& u : updates) {
    if (u.weight <= 0) throw DomainError("client weight must be positive");
    total += u.weight;
  }

  // Accumulate deviations from the first update: identical inputs then give
  // the input back exactly. The clamp to the per-component hull only absorbs
  // last-bit rounding.
  const auto base = updates[order.front()].params.flat();
  MlpParameters result = updates[order.front()].params;
  auto out = result.flat();
  std::vector<double> lo(base.begin(), base.end());
  std::vector<double> hi(base.begin(), base.end());
  std::vector<double> acc(out.size(), 0.0);
  for (std::size_t k : order) {
    const double c = static_cast<double>(updates[k].weight) /
                     static_cast<double>(total);
    const auto w = updates[k].params.flat();
    for (std::size_t i = 0; i < acc.size(); ++i) {
      acc[i] += c * (w[i] - base[i]);
      lo[i] = std::min(lo[i], w[i]);
      hi[i] = std::max(hi[i], w[i]);
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp(base[i] + acc[i], lo[i], hi[i]);
  }
  return result;
}

std::string_view to_string(Weighting w) {
  return w == Weighting::kByExamples ? "by_examples" : "uniform";
}

Weighting parse_weighting(std::string_view name) {
  if (name == "by_examples") return Weighting::kByExamples;
  if (name == "uniform" || name == "unweighted") return Weighting::kUniform;
  throw DomainError("unknown weighting '" + std::string(name) + "'");
}

FederatedSimulation::FederatedSimulation(
    SimulationSpec spec, const std::vector<CountrySurvey>& surveys,
    const MedicalCorpus& corpus, const EmbeddingTable& embeddings,
    FederationOptions options)
    : spec_(spec), options_(options) {
  spec_.validate();
  options_.noise.validate();
  options_.train.local_epochs = spec_.local_epochs;
  options_.train.validate();
  if (surveys.empty()) throw DomainError("no surveys loaded");

  const std::vector<std::string> all_symptoms = prominent_symptom_union(surveys);
  bank_ = std::make_shared<const FeatureBank>(corpus, all_symptoms, embeddings);
  const std::vector<std::string> none;
  for (const auto& s : surveys) {
    synthesizers_.emplace_back(
        build_distribution(s), bank_,
        options_.negative_pool == NegativePool::kOutsideAllSurveys
            ? all_symptoms
            : none);
  }
  Stream pop_rng(options_.master_seed, StreamTag::kPopulation, {});
  population_ = build_population(spec_, surveys, pop_rng);
}

GlobalModel FederatedSimulation::initial_model() const {
  Stream rng(options_.master_seed, StreamTag::kInit, {});
  return {init_params(rng), 0};
}

std::vector<std::size_t> FederatedSimulation::select_clients(
    std::int64_t round) const {
  const std::size_t n = population_.size();
  const std::size_t k = spec_.clients_per_round();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (k < n) {
    Stream rng(options_.master_seed, StreamTag::kSelection,
               {static_cast<std::uint64_t>(round)});
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(idx[i], idx[i + rng.uniform_index(n - i)]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
  }
  return idx;
}

ClientDataset FederatedSimulation::client_data(const ClientSlot& slot,
                                               std::int64_t round) const {
  const std::int64_t data_round = options_.fixed_client_data ? 0 : round;
  Stream rng(options_.master_seed, StreamTag::kClientData,
             {static_cast<std::uint64_t>(slot.client_id),
              static_cast<std::uint64_t>(data_round)});
  return synthesizers_[slot.country].synthesize(slot.client_id, slot.n_persons,
                                                options_.noise, rng);
}

GlobalModel FederatedSimulation::run_round(const GlobalModel& model,
                                           RoundReport* report) const {
  const auto start = std::chrono::steady_clock::now();
  const std::int64_t round = model.round_index + 1;
  const std::vector<std::size_t> selected = select_clients(round);

  struct Outcome {
    bool empty = true;
    ClientUpdate update;
    double loss = 0.0;
  };
  std::vector<Outcome> outcomes(selected.size());
  parallel_for(selected.size(), options_.threads, [&](std::size_t i) {
    const ClientSlot& slot = population_[selected[i]];
    ClientDataset data = client_data(slot, round);
    if (data.empty()) return;
    Stream shuffle(options_.master_seed, StreamTag::kLocalTraining,
                   {static_cast<std::uint64_t>(slot.client_id),
                    static_cast<std::uint64_t>(round)});
    TrainStats stats;
    Outcome& o = outcomes[i];
    o.update.client_id = slot.client_id;
    o.update.params =
        train_local(model.params, data, options_.train, shuffle, &stats);
    o.update.weight = options_.weighting == Weighting::kByExamples
                          ? static_cast<std::int64_t>(data.size())
                          : 1;
    o.loss = stats.mean_loss;
    o.empty = false;
  });

  std::vector<ClientUpdate> updates;
  double loss_sum = 0.0;
  for (auto& o : outcomes) {
    if (o.empty) continue;
    loss_sum += o.loss;
    updates.push_back(std::move(o.update));
  }
  GlobalModel next{fedavg_aggregate(updates), round};

  if (report != nullptr) {
    report->round_index = round;
    report->selected_clients = static_cast<std::int64_t>(selected.size());
    report->participating_clients = static_cast<std::int64_t>(updates.size());
    report->skipped_empty_clients =
        static_cast<std::int64_t>(selected.size() - updates.size());
    report->mean_local_loss = loss_sum / static_cast<double>(updates.size());
    report->wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
  }
  return next;
}

SimulationResult FederatedSimulation::run() const {
  SimulationResult result;
  result.population = population_;
  result.snapshots.push_back(initial_model());
  for (int r = 0; r < spec_.global_epochs; ++r) {
    RoundReport report;
    result.snapshots.push_back(run_round(result.snapshots.back(), &report));
    result.reports.push_back(report);
  }
  return result;
}

SimulationResult run_simulation(const SimulationSpec& spec,
                                const std::vector<CountrySurvey>& surveys,
                                const MedicalCorpus& corpus,
                                const EmbeddingTable& embeddings,
                                const FederationOptions& options) {
  return FederatedSimulation(spec, surveys, corpus, embeddings, options).run();
}

}  // namespace symfl
