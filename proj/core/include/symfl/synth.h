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

#ifndef SYMFL_SYNTH_H_
#define SYMFL_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "symfl/embedding.h"
#include "symfl/rng.h"
#include "symfl/survey.h"

namespace symfl {

enum class NoiseKind {
  kUniformThreshold,  // fires when U[0,1) < level
  kNormalThreshold,   // fires when N(0,1) < level
  kLaplaceDp,         // fires when Laplace(0, 1/epsilon) > level
};

std::string_view to_string(NoiseKind kind);
// Accepts the names produced by to_string. Throws DomainError otherwise.
NoiseKind parse_noise_kind(std::string_view name);

struct NoiseMechanism {
  NoiseKind kind = NoiseKind::kUniformThreshold;
  double noise_level = 0.0;
  double epsilon = 1.0;  // laplace_dp only

  // Throws DomainError unless noise_level is in [0, 1] and, for laplace_dp,
  // epsilon is positive and finite.
  void validate() const;

  // Draws the noise statistic and reports whether the noise branch fires.
  bool fires(Stream& rng) const;
};

// Encoded feature vectors for every corpus term plus any survey symptom the
// corpus lacks. Bank index i < corpus size is corpus index i.
class FeatureBank {
 public:
  FeatureBank(const MedicalCorpus& corpus,
              const std::vector<std::string>& extra_terms,
              const EmbeddingTable& table);

  std::size_t size() const { return terms_.size(); }
  std::size_t corpus_size() const { return corpus_size_; }
  const std::string& term(std::size_t i) const { return terms_[i]; }
  std::span<const double> features(std::size_t i) const {
    return {values_.data() + i * dimension_, dimension_};
  }
  std::size_t dimension() const { return dimension_; }
  std::optional<std::size_t> index_of(std::string_view term) const;

 private:
  std::size_t dimension_;
  std::size_t corpus_size_;
  std::vector<std::string> terms_;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Example {
  std::uint32_t term = 0;  // FeatureBank index
  std::uint8_t label = 0;
};

// One client's labelled data. Features live in the shared bank.
struct ClientDataset {
  std::int64_t client_id = 0;
  std::int64_t n_persons = 0;
  std::shared_ptr<const FeatureBank> bank;
  std::vector<Example> examples;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
  std::size_t positives() const;
  std::span<const double> features(std::size_t i) const {
    return bank->features(examples[i].term);
  }
  const std::string& source_symptom(std::size_t i) const {
    return bank->term(examples[i].term);
  }
};

// Which corpus terms may be drawn as negatives.
enum class NegativePool {
  kOutsideCountry,     // exclude only the client's own prominent symptoms
  kOutsideAllSurveys,  // exclude every symptom prominent in any survey
};

std::string_view to_string(NegativePool pool);
NegativePool parse_negative_pool(std::string_view name);

// Noise-injection survey simulation and negative sampling for one country.
class ClientSynthesizer {
 public:
  // `excluded_negatives` lists the terms never drawn as negatives; the
  // distribution's own symptoms are always excluded. Throws DomainError if
  // a symptom is missing from the bank or no negative candidate remains.
  ClientSynthesizer(SymptomDistribution dist,
                    std::shared_ptr<const FeatureBank> bank,
                    const std::vector<std::string>& excluded_negatives = {});

  const SymptomDistribution& distribution() const { return dist_; }
  std::span<const std::uint32_t> negative_pool() const { return negatives_; }

  // Symptoms reported by one simulated respondent, as bank indices. For each
  // prominent symptom: if U[0,1) < p the symptom is reported, otherwise the
  // noise statistic is drawn and, when it fires, one corpus term chosen
  // uniformly at random is reported instead.
  void simulate_person(const NoiseMechanism& noise, Stream& rng,
                       std::vector<std::uint32_t>* out) const;

  // n_persons respondents become label-1 examples; an equal number of
  // label-0 examples is drawn uniformly from the negative pool; the result
  // is shuffled. May return an empty dataset.
  ClientDataset synthesize(std::int64_t client_id, std::int64_t n_persons,
                           const NoiseMechanism& noise, Stream& rng) const;

 private:
  SymptomDistribution dist_;
  std::shared_ptr<const FeatureBank> bank_;
  std::vector<std::uint32_t> symptom_terms_;
  std::vector<std::uint32_t> negatives_;
};

// String-level form of ClientSynthesizer::simulate_person.
std::vector<std::string> simulate_person(const SymptomDistribution& dist,
                                         const MedicalCorpus& corpus,
                                         const NoiseMechanism& noise,
                                         Stream& rng);

// Country weights proportional to survey totals.
std::vector<double> country_weights(const std::vector<CountrySurvey>& surveys);

// Independently assigns each client a survey index with probability
// total_c / sum of totals.
std::vector<std::size_t> assign_countries(
    std::size_t n_clients, const std::vector<CountrySurvey>& surveys,
    Stream& rng);

}  // namespace symfl

#endif  // SYMFL_SYNTH_H_
