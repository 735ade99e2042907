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

#ifndef SYMFL_SURVEY_H_
#define SYMFL_SURVEY_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "symfl/embedding.h"

namespace symfl {

struct SymptomCount {
  std::string symptom;
  std::int64_t count = 0;
};

// Absolute per-symptom respondent counts for one country.
struct CountrySurvey {
  std::string country;
  std::int64_t total = 0;
  std::vector<SymptomCount> symptom_counts;

  // Throws DomainError unless 0 <= count <= total for every row, total > 0
  // and at least one count is positive.
  void validate() const;
};

struct SymptomProbability {
  std::string symptom;
  double probability = 0.0;
};

// Prominent symptoms of one country with their display probabilities, in
// survey row order.
struct SymptomDistribution {
  std::string country;
  std::vector<SymptomProbability> entries;
};

SymptomDistribution build_distribution(const CountrySurvey& survey);

// Parses `country | total | name=count, name=count, ...`.
CountrySurvey parse_survey_record(std::string_view line);

// One record per non-blank, non-'#' line. Throws IoError / DomainError.
std::vector<CountrySurvey> load_surveys(const std::filesystem::path& path);

// Ordered list of distinct (case-insensitively) symptom/condition phrases.
class MedicalCorpus {
 public:
  // Throws DomainError on an empty list, an empty term or a duplicate.
  explicit MedicalCorpus(std::vector<std::string> terms);

  const std::vector<std::string>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  const std::string& operator[](std::size_t i) const { return terms_[i]; }

  std::optional<std::size_t> index_of(std::string_view term) const;

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr std::size_t kMinCorpusTerms = 50;

// One term per line, '#' comments and blank lines ignored. Enforces
// kMinCorpusTerms.
MedicalCorpus load_corpus(const std::filesystem::path& path);

// Phrases that encode_phrase would reject, in input order.
std::vector<std::string> find_unembeddable(
    const std::vector<std::string>& phrases, const EmbeddingTable& table);

// Every symptom with a positive count in at least one survey, in order of
// first appearance.
std::vector<std::string> prominent_symptom_union(
    const std::vector<CountrySurvey>& surveys);

}  // namespace symfl

#endif  // SYMFL_SURVEY_H_
