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

#include "symfl/embedding.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include "symfl/errors.h"

namespace symfl {
namespace {

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Parses one `token v1 ... vN` line. Returns false on any format error.
bool parse_line(std::string_view line, std::size_t dimension,
                std::string_view* token, std::vector<double>* values) {
  std::size_t sp = line.find(' ');
  if (sp == 0 || sp == std::string_view::npos) return false;
  *token = line.substr(0, sp);
  values->clear();
  std::size_t pos = sp + 1;
  while (pos <= line.size()) {
    std::size_t next = line.find(' ', pos);
    if (next == std::string_view::npos) next = line.size();
    std::string_view field = line.substr(pos, next - pos);
    if (field.empty()) return false;
    double v = 0.0;
    auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() ||
        !std::isfinite(v)) {
      return false;
    }
    values->push_back(v);
    if (values->size() > dimension) return false;
    pos = next + 1;
  }
  return values->size() == dimension;
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

EmbeddingTable::EmbeddingTable(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw DomainError("embedding dimension must be positive");
}

std::span<const double> EmbeddingTable::find(std::string_view token) const {
  auto it = index_.find(to_lower(token));
  if (it == index_.end()) return {};
  return {storage_.data() + it->second, dimension_};
}

bool EmbeddingTable::insert(std::string_view token,
                            std::span<const double> values) {
  if (token.empty() ||
      std::any_of(token.begin(), token.end(), is_space)) {
    throw DomainError("embedding token must be non-empty without whitespace");
  }
  if (values.size() != dimension_) {
    throw DomainError("embedding for '" + std::string(token) + "' has " +
                      std::to_string(values.size()) + " components, expected " +
                      std::to_string(dimension_));
  }
  if (!std::all_of(values.begin(), values.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw DomainError("embedding for '" + std::string(token) +
                      "' has a non-finite component");
  }
  auto [it, inserted] = index_.try_emplace(to_lower(token), storage_.size());
  if (!inserted) return false;
  storage_.insert(storage_.end(), values.begin(), values.end());
  return true;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::size_t dimension,
                               EmbeddingLoadReport* report) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open embedding file: " + path.string());
  }
  EmbeddingTable table(dimension);
  EmbeddingLoadReport local;
  std::string line;
  std::string_view token;
  std::vector<double> values;
  values.reserve(dimension);
  while (std::getline(in, line)) {
    ++local.lines;
    std::string_view view = line;
    while (!view.empty() && (view.back() == '\r' || view.back() == ' ')) {
      view.remove_suffix(1);
    }
    if (view.empty()) continue;
    if (!parse_line(view, dimension, &token, &values)) {
      local.skipped_lines.push_back(local.lines);
      std::clog << "warning: " << path.string() << ":" << local.lines
                << ": malformed embedding line skipped\n";
      continue;
    }
    if (table.insert(token, values)) {
      ++local.loaded;
    } else {
      ++local.duplicates;
    }
  }
  if (table.empty()) {
    throw DomainError("empty embedding table: " + path.string());
  }
  if (report != nullptr) *report = std::move(local);
  return table;
}

std::vector<std::string> tokenize_phrase(std::string_view phrase) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : phrase) {
    if (is_space(c) || c == '/') {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

PhraseVector encode_phrase(const EmbeddingTable& table,
                           std::string_view phrase) {
  std::string_view trimmed = trim(phrase);
  if (trimmed.empty()) throw DomainError("cannot encode an empty phrase");

  PhraseVector out;
  out.source_phrase = std::string(trimmed);
  out.values.assign(table.dimension(), 0.0);
  std::size_t found = 0;
  for (const std::string& tok : tokenize_phrase(trimmed)) {
    ++out.token_count;
    std::span<const double> v = table.find(tok);
    if (v.empty()) {
      ++out.oov_tokens;
      continue;
    }
    ++found;
    for (std::size_t i = 0; i < v.size(); ++i) out.values[i] += v[i];
  }
  if (found == 0) {
    throw DomainError("unembeddable phrase: '" + out.source_phrase + "'");
  }
  for (double& x : out.values) x /= static_cast<double>(found);
  return out;
}

}  // namespace symfl
