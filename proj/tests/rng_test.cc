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
#include "symfl/rng.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

namespace symfl {
namespace {

TEST(SplitMix, MatchesReferenceOutput) {
  // First output of the reference generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(DeriveKey, DependsOnEveryCoordinate) {
  const auto base = derive_key(7, StreamTag::kClientData, {1, 2});
  EXPECT_EQ(base, derive_key(7, StreamTag::kClientData, {1, 2}));
  EXPECT_NE(base, derive_key(8, StreamTag::kClientData, {1, 2}));
  EXPECT_NE(base, derive_key(7, StreamTag::kLocalTraining, {1, 2}));
  EXPECT_NE(base, derive_key(7, StreamTag::kClientData, {2, 1}));
  EXPECT_NE(base, derive_key(7, StreamTag::kClientData, {1}));
}

TEST(Stream, UniformStaysInRange) {
  Stream s(1, StreamTag::kTest, {});
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    double v = s.uniform_open();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
}

TEST(Stream, UniformIndexIsUnbiased) {
  Stream s(2, StreamTag::kTest, {});
  const std::uint64_t k = 7;
  const int n = 700000;
  std::vector<int> counts(k, 0);
  for (int i = 0; i < n; ++i) {
    auto j = s.uniform_index(k);
    ASSERT_LT(j, k);
    ++counts[j];
  }
  const double p = 1.0 / k;
  for (int c : counts) {
    EXPECT_NEAR(c / double(n), p, 5 * std::sqrt(p * (1 - p) / n));
  }
}

TEST(Stream, UniformIntIsInclusive) {
  Stream s(3, StreamTag::kTest, {});
  bool lo = false, hi = false;
  for (int i = 0; i < 10000; ++i) {
    auto v = s.uniform_int(2, 12);
    ASSERT_GE(v, 2);
    ASSERT_LE(v, 12);
    lo |= v == 2;
    hi |= v == 12;
  }
  EXPECT_TRUE(lo && hi);
  EXPECT_EQ(s.uniform_int(5, 5), 5);
}

TEST(Stream, NormalMoments) {
  Stream s(4, StreamTag::kTest, {});
  const int n = 400000;
  double m = 0, m2 = 0;
  int below_half = 0;
  for (int i = 0; i < n; ++i) {
    double x = s.normal();
    m += x;
    m2 += x * x;
    below_half += x < 0.5;
  }
  m /= n;
  m2 /= n;
  EXPECT_NEAR(m, 0.0, 5 / std::sqrt(double(n)));
  EXPECT_NEAR(m2, 1.0, 5 * std::sqrt(2.0 / n));
  const double phi = 0.5 * std::erfc(-0.5 / std::sqrt(2.0));
  EXPECT_NEAR(below_half / double(n), phi,
              5 * std::sqrt(phi * (1 - phi) / n));
}

TEST(Stream, LaplaceTailMatchesCdf) {
  Stream s(5, StreamTag::kTest, {});
  const double b = 0.5;
  const int n = 400000;
  int above = 0, below = 0;
  for (int i = 0; i < n; ++i) {
    double x = s.laplace(b);
    above += x > 0.3;
    below += x < -0.3;
  }
  const double p = 0.5 * std::exp(-0.3 / b);
  const double tol = 4 * std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(above / double(n), p, tol);
  EXPECT_NEAR(below / double(n), p, tol);
}

TEST(Stream, ShuffleIsPermutationAndSeeded) {
  std::vector<int> a(50), b(50);
  std::iota(a.begin(), a.end(), 0);
  b = a;
  Stream s1(6, StreamTag::kTest, {}), s2(6, StreamTag::kTest, {});
  s1.shuffle(a.begin(), a.end());
  s2.shuffle(b.begin(), b.end());
  EXPECT_EQ(a, b);
  std::vector<int> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_FALSE(std::is_sorted(a.begin(), a.end()));
}

}  // namespace
}  // namespace symfl
