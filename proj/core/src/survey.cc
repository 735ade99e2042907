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

#include "symfl/survey.h"

#include <cctype>
#include <charconv>
#include <fstream>

#include "symfl/errors.h"

namespace symfl {
namespace {

std::string_view trim(std::string_view s) {
  auto space = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
  };
  while (!s.empty() && space(s.front())) s.remove_prefix(1);
  while (!s.empty() && space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    parts.push_back(s.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

std::int64_t parse_count(std::string_view field, std::string_view what) {
  field = trim(field);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() ||
      ptr != field.data() + field.size()) {
    throw DomainError("bad " + std::string(what) + " '" + std::string(field) +
                      "'");
  }
  return v;
}

bool is_content(std::string_view line) {
  line = trim(line);
  return !line.empty() && line.front() != '#';
}

}  // namespace

void CountrySurvey::validate() const {
  if (country.empty()) throw DomainError("survey without a country name");
  if (total <= 0) {
    throw DomainError("survey '" + country + "': total must be positive");
  }
  bool any_positive = false;
  for (const auto& row : symptom_counts) {
    if (row.count < 0 || row.count > total) {
      throw DomainError("survey '" + country + "': count for '" + row.symptom +
                        "' outside [0, total]");
    }
    any_positive = any_positive || row.count > 0;
  }
  if (!any_positive) {
    throw DomainError("survey '" + country + "' has no positive symptom count");
  }
}

SymptomDistribution build_distribution(const CountrySurvey& survey) {
  survey.validate();
  SymptomDistribution dist;
  dist.country = survey.country;
  for (const auto& row : survey.symptom_counts) {
    if (row.count == 0) continue;
    dist.entries.push_back({row.symptom, static_cast<double>(row.count) /
                                             static_cast<double>(survey.total)});
  }
  return dist;
}

CountrySurvey parse_survey_record(std::string_view line) {
  auto fields = split(line, '|');
  if (fields.size() != 3) {
    throw DomainError("survey record needs 'country | total | counts': '" +
                      std::string(line) + "'");
  }
  CountrySurvey survey;
  survey.country = std::string(trim(fields[0]));
  survey.total = parse_count(fields[1], "survey total");
  for (std::string_view pair : split(fields[2], ',')) {
    pair = trim(pair);
    if (pair.empty()) continue;
    std::size_t eq = pair.rfind('=');
    if (eq == std::string_view::npos || trim(pair.substr(0, eq)).empty()) {
      throw DomainError("bad symptom entry '" + std::string(pair) + "'");
    }
    survey.symptom_counts.push_back(
        {std::string(trim(pair.substr(0, eq))),
         parse_count(pair.substr(eq + 1), "symptom count")});
  }
  survey.validate();
  return survey;
}

std::vector<CountrySurvey> load_surveys(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open survey file: " + path.string());
  std::vector<CountrySurvey> surveys;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!is_content(line)) continue;
    try {
      surveys.push_back(parse_survey_record(line));
    } catch (const DomainError& e) {
      throw DomainError(path.string() + ":" + std::to_string(lineno) + ": " +
                        e.what());
    }
  }
  if (surveys.empty()) throw DomainError("no surveys in " + path.string());
  return surveys;
}

MedicalCorpus::MedicalCorpus(std::vector<std::string> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty()) throw DomainError("medical corpus is empty");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (trim(terms_[i]).empty()) throw DomainError("empty corpus term");
    if (!index_.try_emplace(to_lower(terms_[i]), i).second) {
      throw DomainError("duplicate corpus term '" + terms_[i] + "'");
    }
  }
}

std::optional<std::size_t> MedicalCorpus::index_of(
    std::string_view term) const {
  auto it = index_.find(to_lower(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

MedicalCorpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path.string());
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    if (is_content(line)) terms.emplace_back(trim(line));
  }
  if (terms.size() < kMinCorpusTerms) {
    throw DomainError("corpus " + path.string() + " has " +
                      std::to_string(terms.size()) + " terms, need at least " +
                      std::to_string(kMinCorpusTerms));
  }
  return MedicalCorpus(std::move(terms));
}

std::vector<std::string> find_unembeddable(
    const std::vector<std::string>& phrases, const EmbeddingTable& table) {
  std::vector<std::string> bad;
  for (const auto& p : phrases) {
    bool any = false;
    for (const auto& tok : tokenize_phrase(p)) any = any || table.contains(tok);
    if (!any) bad.push_back(p);
  }
  return bad;
}

std::vector<std::string> prominent_symptom_union(
    const std::vector<CountrySurvey>& surveys) {
  std::vector<std::string> out;
  std::unordered_map<std::string, bool> seen;
  for (const auto& s : surveys) {
    for (const auto& row : s.symptom_counts) {
      if (row.count > 0 && seen.try_emplace(to_lower(row.symptom), true).second) {
        out.push_back(row.symptom);
      }
    }
  }
  return out;
}

}  // namespace symfl
