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

#ifndef SYMFL_EMBEDDING_H_
#define SYMFL_EMBEDDING_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace symfl {

// Width of the bundled pre-trained vectors and of the classifier input.
inline constexpr std::size_t kEmbeddingDim = 50;

// Immutable-after-load token -> vector table. Keys are stored lowercase and
// lookups are case-insensitive.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return index_.size(); }
  bool empty() const { return index_.empty(); }

  // Returns an empty span when the token is absent.
  std::span<const double> find(std::string_view token) const;
  bool contains(std::string_view token) const { return !find(token).empty(); }

  // Inserts `token` (lowercased). Returns false and leaves the table
  // unchanged if the token is already present. Throws DomainError on an
  // empty/whitespace token, a wrong-length vector or a non-finite value.
  bool insert(std::string_view token, std::span<const double> values);

 private:
  std::size_t dimension_;
  std::vector<double> storage_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct EmbeddingLoadReport {
  std::size_t lines = 0;
  std::size_t loaded = 0;
  std::size_t duplicates = 0;
  // 1-based line numbers of malformed lines that were skipped.
  std::vector<std::size_t> skipped_lines;
};

// Reads the plain-text `token v1 ... vN` format. Malformed lines are skipped
// with a warning on std::clog; duplicates keep the first occurrence.
// Throws IoError if the file cannot be opened and DomainError if nothing
// loads.
EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::size_t dimension,
                               EmbeddingLoadReport* report = nullptr);

struct PhraseVector {
  std::vector<double> values;
  std::string source_phrase;
  std::size_t token_count = 0;
  std::size_t oov_tokens = 0;
};

// Lowercases and splits on whitespace and '/'.
std::vector<std::string> tokenize_phrase(std::string_view phrase);

// Mean of the in-vocabulary token vectors. Throws DomainError
// ("unembeddable phrase") when no token is in the table.
PhraseVector encode_phrase(const EmbeddingTable& table,
                           std::string_view phrase);

std::string to_lower(std::string_view s);

}  // namespace symfl

#endif  // SYMFL_EMBEDDING_H_
