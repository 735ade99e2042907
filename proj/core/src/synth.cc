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

#include "symfl/synth.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "symfl/errors.h"

namespace symfl {

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kUniformThreshold:
      return "uniform_threshold";
    case NoiseKind::kNormalThreshold:
      return "normal_threshold";
    case NoiseKind::kLaplaceDp:
      return "laplace_dp";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(std::string_view name) {
  for (NoiseKind k : {NoiseKind::kUniformThreshold, NoiseKind::kNormalThreshold,
                      NoiseKind::kLaplaceDp}) {
    if (name == to_string(k)) return k;
  }
  throw DomainError("unknown noise mechanism '" + std::string(name) + "'");
}

void NoiseMechanism::validate() const {
  if (!(noise_level >= 0.0 && noise_level <= 1.0)) {
    throw DomainError("noise_level must lie in [0, 1], got " +
                      std::to_string(noise_level));
  }
  if (kind == NoiseKind::kLaplaceDp &&
      !(epsilon > 0.0 && std::isfinite(epsilon))) {
    throw DomainError("laplace_dp requires a positive epsilon");
  }
}

bool NoiseMechanism::fires(Stream& rng) const {
  switch (kind) {
    case NoiseKind::kUniformThreshold:
      return rng.uniform() < noise_level;
    case NoiseKind::kNormalThreshold:
      return rng.normal() < noise_level;
    case NoiseKind::kLaplaceDp:
      return rng.laplace(1.0 / epsilon) > noise_level;
  }
  return false;
}

std::string_view to_string(NegativePool pool) {
  return pool == NegativePool::kOutsideCountry ? "outside_country"
                                               : "outside_all_surveys";
}

NegativePool parse_negative_pool(std::string_view name) {
  if (name == "outside_country") return NegativePool::kOutsideCountry;
  if (name == "outside_all_surveys") return NegativePool::kOutsideAllSurveys;
  throw DomainError("unknown negative pool '" + std::string(name) + "'");
}

FeatureBank::FeatureBank(const MedicalCorpus& corpus,
                         const std::vector<std::string>& extra_terms,
                         const EmbeddingTable& table)
    : dimension_(table.dimension()), corpus_size_(corpus.size()) {
  auto add = [&](const std::string& term) {
    if (!index_.try_emplace(to_lower(term), terms_.size()).second) return;
    PhraseVector pv = encode_phrase(table, term);
    terms_.push_back(term);
    values_.insert(values_.end(), pv.values.begin(), pv.values.end());
  };
  for (const auto& t : corpus.terms()) add(t);
  for (const auto& t : extra_terms) add(t);
}

std::optional<std::size_t> FeatureBank::index_of(std::string_view term) const {
  auto it = index_.find(to_lower(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ClientDataset::positives() const {
  return static_cast<std::size_t>(
      std::count_if(examples.begin(), examples.end(),
                    [](const Example& e) { return e.label == 1; }));
}

ClientSynthesizer::ClientSynthesizer(
    SymptomDistribution dist, std::shared_ptr<const FeatureBank> bank,
    const std::vector<std::string>& excluded_negatives)
    : dist_(std::move(dist)), bank_(std::move(bank)) {
  if (dist_.entries.empty()) {
    throw DomainError("distribution for '" + dist_.country + "' is empty");
  }
  std::unordered_set<std::uint32_t> excluded;
  for (const auto& e : dist_.entries) {
    auto idx = bank_->index_of(e.symptom);
    if (!idx) {
      throw DomainError("symptom '" + e.symptom + "' missing from feature bank");
    }
    symptom_terms_.push_back(static_cast<std::uint32_t>(*idx));
    excluded.insert(static_cast<std::uint32_t>(*idx));
  }
  for (const auto& term : excluded_negatives) {
    if (auto idx = bank_->index_of(term)) {
      excluded.insert(static_cast<std::uint32_t>(*idx));
    }
  }
  for (std::uint32_t i = 0; i < bank_->corpus_size(); ++i) {
    if (!excluded.contains(i)) negatives_.push_back(i);
  }
  if (negatives_.empty()) {
    throw DomainError("no corpus term left to draw negatives from");
  }
}

void ClientSynthesizer::simulate_person(const NoiseMechanism& noise,
                                        Stream& rng,
                                        std::vector<std::uint32_t>* out) const {
  const std::uint64_t corpus_size = bank_->corpus_size();
  for (std::size_t s = 0; s < symptom_terms_.size(); ++s) {
    if (rng.uniform() < dist_.entries[s].probability) {
      out->push_back(symptom_terms_[s]);
    } else if (noise.fires(rng)) {
      out->push_back(static_cast<std::uint32_t>(rng.uniform_index(corpus_size)));
    }
  }
}

ClientDataset ClientSynthesizer::synthesize(std::int64_t client_id,
                                            std::int64_t n_persons,
                                            const NoiseMechanism& noise,
                                            Stream& rng) const {
  if (n_persons < 1) throw DomainError("n_persons must be at least 1");
  ClientDataset ds;
  ds.client_id = client_id;
  ds.n_persons = n_persons;
  ds.bank = bank_;

  std::vector<std::uint32_t> reported;
  for (std::int64_t p = 0; p < n_persons; ++p) {
    simulate_person(noise, rng, &reported);
  }
  ds.examples.reserve(2 * reported.size());
  for (std::uint32_t t : reported) ds.examples.push_back({t, 1});
  for (std::size_t i = 0; i < reported.size(); ++i) {
    ds.examples.push_back({negatives_[rng.uniform_index(negatives_.size())], 0});
  }
  rng.shuffle(ds.examples.begin(), ds.examples.end());
  return ds;
}

std::vector<std::string> simulate_person(const SymptomDistribution& dist,
                                         const MedicalCorpus& corpus,
                                         const NoiseMechanism& noise,
                                         Stream& rng) {
  if (dist.entries.empty()) throw DomainError("empty symptom distribution");
  std::vector<std::string> out;
  for (const auto& e : dist.entries) {
    if (rng.uniform() < e.probability) {
      out.push_back(e.symptom);
    } else if (noise.fires(rng)) {
      out.push_back(corpus[rng.uniform_index(corpus.size())]);
    }
  }
  return out;
}

std::vector<double> country_weights(const std::vector<CountrySurvey>& surveys) {
  double sum = 0.0;
  for (const auto& s : surveys) sum += static_cast<double>(s.total);
  std::vector<double> w;
  for (const auto& s : surveys) w.push_back(static_cast<double>(s.total) / sum);
  return w;
}

std::vector<std::size_t> assign_countries(
    std::size_t n_clients, const std::vector<CountrySurvey>& surveys,
    Stream& rng) {
  if (surveys.empty()) throw DomainError("no surveys to assign clients to");
  std::vector<std::uint64_t> cumulative;
  std::uint64_t sum = 0;
  for (const auto& s : surveys) {
    sum += static_cast<std::uint64_t>(s.total);
    cumulative.push_back(sum);
  }
  std::vector<std::size_t> out(n_clients);
  for (auto& c : out) {
    std::uint64_t r = rng.uniform_index(sum);
    c = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), r) -
        cumulative.begin());
  }
  return out;
}

}  // namespace symfl
