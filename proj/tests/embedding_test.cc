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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "symfl/errors.h"
#include "symfl/rng.h"
#include "test_util.h"

namespace symfl {
namespace {

using testing::data_path;
using testing::TempDir;
using testing::write_text;

// Independent reader: whitespace split, strtod per field.
std::vector<std::pair<std::string, std::vector<double>>> reread(
    const std::filesystem::path& p) {
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string token, field;
    ss >> token;
    std::vector<double> v;
    while (ss >> field) v.push_back(std::strtod(field.c_str(), nullptr));
    rows.emplace_back(token, v);
  }
  return rows;
}

TEST(LoadEmbeddings, SingleLineParsesExactly) {
  TempDir dir("emb_single");
  std::string line = "fever";
  for (int i = 0; i < 50; ++i) line += " " + std::to_string((i + 1) / 10.0);
  write_text(dir / "e.txt", line + "\n");
  EmbeddingTable t = load_embeddings(dir / "e.txt", 50);
  ASSERT_EQ(t.size(), 1u);
  auto v = t.find("fever");
  ASSERT_EQ(v.size(), 50u);
  EXPECT_EQ(v[0], std::strtod(std::to_string(0.1).c_str(), nullptr));
  EXPECT_EQ(v[49], 5.0);
}

TEST(LoadEmbeddings, RandomFileRoundTripsBitForBit) {
  TempDir dir("emb_roundtrip");
  Stream rng(11, StreamTag::kTest, {});
  std::string text;
  char buf[64];
  const int rows = 5000;
  for (int r = 0; r < rows; ++r) {
    text += "tok" + std::to_string(r);
    for (int i = 0; i < 50; ++i) {
      std::snprintf(buf, sizeof buf, " %.17g", rng.normal() * 3.0);
      text += buf;
    }
    text += '\n';
  }
  write_text(dir / "e.txt", text);
  EmbeddingLoadReport report;
  EmbeddingTable t = load_embeddings(dir / "e.txt", 50, &report);
  EXPECT_EQ(t.size(), static_cast<std::size_t>(rows));
  EXPECT_EQ(report.loaded, static_cast<std::size_t>(rows));
  for (const auto& [token, values] : reread(dir / "e.txt")) {
    auto got = t.find(token);
    ASSERT_EQ(got.size(), values.size()) << token;
    for (std::size_t i = 0; i < values.size(); ++i) {
      ASSERT_EQ(got[i], values[i]) << token << "[" << i << "]";
    }
  }
}

TEST(LoadEmbeddings, BundledFixtureMatchesIndependentReader) {
  const auto path = data_path("embeddings_50d.txt");
  EmbeddingTable t = load_embeddings(path, kEmbeddingDim);
  auto rows = reread(path);
  EXPECT_EQ(t.size(), rows.size());
  for (const auto& [token, values] : rows) {
    auto got = t.find(token);
    ASSERT_EQ(got.size(), kEmbeddingDim);
    for (std::size_t i = 0; i < kEmbeddingDim; ++i) EXPECT_EQ(got[i], values[i]);
  }
}

TEST(LoadEmbeddings, SkipsMalformedAndDuplicateLines) {
  TempDir dir("emb_malformed");
  std::string good = "a 1 2 3\n";
  write_text(dir / "e.txt",
             good + "b 1 2\n" + "c 1 x 3\n" + "A 9 9 9\n" + "d 4 5 6\n" +
                 "e 1 2 nan\n");
  EmbeddingLoadReport report;
  EmbeddingTable t = load_embeddings(dir / "e.txt", 3, &report);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(report.duplicates, 1u);
  EXPECT_EQ(report.skipped_lines, (std::vector<std::size_t>{2, 3, 6}));
  EXPECT_EQ(t.find("a")[0], 1.0);  // first occurrence wins
}

TEST(LoadEmbeddings, EmptyFileIsDomainError) {
  TempDir dir("emb_empty");
  write_text(dir / "e.txt", "");
  try {
    load_embeddings(dir / "e.txt", 50);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("empty embedding table", 0), 0u);
  }
}

TEST(LoadEmbeddings, MissingFileIsIoError) {
  EXPECT_THROW(load_embeddings("/nonexistent/emb.txt", 50), IoError);
}

TEST(EmbeddingTable, LookupIsCaseInsensitive) {
  EmbeddingTable t(2);
  std::vector<double> v{1.0, 2.0};
  EXPECT_TRUE(t.insert("Fever", v));
  EXPECT_FALSE(t.insert("FEVER", v));
  EXPECT_TRUE(t.contains("fever"));
  EXPECT_TRUE(t.contains("fEvEr"));
  EXPECT_TRUE(t.find("cough").empty());
  std::vector<double> bad{1.0};
  EXPECT_THROW(t.insert("x", bad), DomainError);
}

TEST(Tokenize, SplitsOnWhitespaceAndSlash) {
  EXPECT_EQ(tokenize_phrase("Nausea/Vomiting"),
            (std::vector<std::string>{"nausea", "vomiting"}));
  EXPECT_EQ(tokenize_phrase("  Loss of  smell "),
            (std::vector<std::string>{"loss", "of", "smell"}));
}

class EncodeTest : public ::testing::Test {
 protected:
  const EmbeddingTable& t = testing::Fixtures::get().embeddings;
};

TEST_F(EncodeTest, SingleTokenIsIdentity) {
  PhraseVector p = encode_phrase(t, "fever");
  auto v = t.find("fever");
  EXPECT_EQ(p.oov_tokens, 0u);
  EXPECT_EQ(p.token_count, 1u);
  for (std::size_t i = 0; i < kEmbeddingDim; ++i) EXPECT_EQ(p.values[i], v[i]);
}

TEST_F(EncodeTest, MultiTokenIsComponentMean) {
  PhraseVector p = encode_phrase(t, "shortness of breath");
  const auto rows = reread(data_path("embeddings_50d.txt"));
  auto file_vec = [&](std::string_view tok) {
    for (const auto& [k, v] : rows) {
      if (k == tok) return v;
    }
    throw std::runtime_error("missing token");
  };
  auto a = file_vec("shortness"), b = file_vec("of"), c = file_vec("breath");
  for (std::size_t i = 0; i < kEmbeddingDim; ++i) {
    double want = (a[i] + b[i] + c[i]) / 3.0;
    EXPECT_NEAR(p.values[i], want, 1e-15 * std::max(1.0, std::abs(want)));
    EXPECT_GE(p.values[i], std::min({a[i], b[i], c[i]}));
    EXPECT_LE(p.values[i], std::max({a[i], b[i], c[i]}));
  }
}

TEST_F(EncodeTest, OutOfVocabularyTokensAreDropped) {
  PhraseVector p = encode_phrase(t, "fever qzxv");
  EXPECT_EQ(p.token_count, 2u);
  EXPECT_EQ(p.oov_tokens, 1u);
  EXPECT_EQ(p.values, encode_phrase(t, "fever").values);
}

TEST_F(EncodeTest, TotalMissIsUnembeddable) {
  try {
    encode_phrase(t, "qzxv");
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("unembeddable phrase"),
              std::string::npos);
  }
}

}  // namespace
}  // namespace symfl
