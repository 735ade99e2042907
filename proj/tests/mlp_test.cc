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
#include "symfl/mlp.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "separable_fixture.h"
#include "symfl/errors.h"
#include "symfl/rng.h"
#include "test_util.h"

namespace symfl {
namespace {

// Straight-line reference forward pass. Weights are row-major [out][in].
// Fills pre with every hidden pre-activation.
double reference_forward(const MlpParameters& p, const std::vector<double>& x,
                         std::vector<double>* pre = nullptr) {
  std::vector<double> a = x;
  for (std::size_t l = 0; l < kNumLayers; ++l) {
    auto layer = p.layer(l);
    std::vector<double> z(layer.shape.outputs);
    for (std::size_t o = 0; o < z.size(); ++o) {
      double s = layer.bias[o];
      for (std::size_t i = 0; i < a.size(); ++i) {
        s += layer.weights[o * layer.shape.inputs + i] * a[i];
      }
      z[o] = s;
    }
    if (l + 1 == kNumLayers) return 1.0 / (1.0 + std::exp(-z[0]));
    if (pre) pre->insert(pre->end(), z.begin(), z.end());
    for (double& v : z) v = v > 0 ? v : 0;
    a = z;
  }
  return 0;
}

std::vector<double> random_input(Stream& rng) {
  std::vector<double> x(kInputDim);
  for (double& v : x) v = rng.normal();
  return x;
}

MlpParameters random_params(Stream& rng) {
  MlpParameters p = init_params(rng);
  for (std::size_t l = 0; l < kNumLayers; ++l) {
    for (double& b : p.layer(l).bias) b = 0.1 * rng.normal();
  }
  return p;
}

TEST(Init, GlorotBoundsAndZeroBias) {
  Stream rng(1, StreamTag::kTest, {});
  MlpParameters p = init_params(rng);
  const double bound = std::sqrt(6.0 / 82.0);
  EXPECT_NEAR(bound, 0.2705, 5e-5);
  double largest = 0;
  for (double w : p.layer(0).weights) largest = std::max(largest, std::abs(w));
  EXPECT_LE(largest, bound);
  EXPECT_GT(largest, 0.9 * bound);
  for (std::size_t l = 0; l < kNumLayers; ++l) {
    auto layer = p.layer(l);
    const double b = std::sqrt(
        6.0 / double(layer.shape.inputs + layer.shape.outputs));
    for (double w : layer.weights) EXPECT_LE(std::abs(w), b);
    for (double v : layer.bias) EXPECT_EQ(v, 0.0);
  }
  Stream again(1, StreamTag::kTest, {});
  EXPECT_EQ(init_params(again), p);
}

TEST(Forward, ZeroParametersGiveOneHalf) {
  Stream rng(2, StreamTag::kTest, {});
  EXPECT_EQ(forward(MlpParameters{}, random_input(rng)), 0.5);
}

TEST(Forward, MatchesReferenceImplementation) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Stream rng(seed, StreamTag::kTest, {3});
    MlpParameters p = random_params(rng);
    auto x = random_input(rng);
    const double want = reference_forward(p, x);
    EXPECT_NEAR(forward(p, x), want, 1e-12 * want);
  }
}

TEST(Forward, RejectsBadInput) {
  std::vector<double> short_x(49, 0.0);
  EXPECT_THROW(forward(MlpParameters{}, short_x), DomainError);
  std::vector<double> nan_x(50, 0.0);
  nan_x[3] = std::nan("");
  EXPECT_THROW(forward(MlpParameters{}, nan_x), DomainError);
}

TEST(Loss, ZeroNetworkIsLogTwo) {
  Stream rng(4, StreamTag::kTest, {});
  auto x1 = random_input(rng), x2 = random_input(rng);
  std::vector<Sample> batch{{x1, 1.0}, {x2, 0.0}};
  EXPECT_NEAR(loss_and_gradient(MlpParameters{}, batch).loss, std::log(2.0),
              1e-15);
}

TEST(Gradient, MatchesCentralDifferences) {
  const double h = 1e-4;
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 20; ++seed) {
    Stream rng(seed, StreamTag::kTest, {5});
    MlpParameters p = random_params(rng);
    std::vector<std::vector<double>> xs;
    std::vector<Sample> batch;
    double margin = 1e9;
    for (int i = 0; i < 4; ++i) {
      xs.push_back(random_input(rng));
      std::vector<double> pre;
      reference_forward(p, xs.back(), &pre);
      for (double z : pre) margin = std::min(margin, std::abs(z));
    }
    // Central differences are meaningless across a ReLU kink.
    if (margin < 1e-2) continue;
    for (int i = 0; i < 4; ++i) batch.push_back({xs[i], double(i % 2)});
    ++checked;

    const MlpParameters g = loss_and_gradient(p, batch).gradient;
    double worst = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      MlpParameters up = p, down = p;
      up.flat()[k] += h;
      down.flat()[k] -= h;
      const double fd = (loss_and_gradient(up, batch).loss -
                         loss_and_gradient(down, batch).loss) /
                        (2 * h);
      const double an = g.flat()[k];
      const double scale = std::max(std::abs(fd), std::abs(an));
      const double err = scale < 1e-3 ? std::abs(fd - an) / 1e-2
                                      : std::abs(fd - an) / scale;
      worst = std::max(worst, err);
    }
    // Absolute 1e-7 below magnitude 1e-3 is expressed as err / 1e-2 <= 1e-5.
    EXPECT_LE(worst, 1e-5) << "seed " << seed;
  }
}

TEST(Adam, ZeroGradientLeavesParameters) {
  Stream rng(6, StreamTag::kTest, {});
  MlpParameters p = random_params(rng), before = p;
  AdamState s(0.001);
  adam_step(p, MlpParameters{}, s);
  EXPECT_EQ(p, before);
  EXPECT_EQ(s.step_count, 1);
}

TEST(Adam, FirstStepIsSignScaled) {
  Stream rng(7, StreamTag::kTest, {});
  MlpParameters p = random_params(rng), before = p, g;
  for (double& v : g.flat()) v = rng.normal() * 1e-3;
  AdamState s(0.001);
  adam_step(p, g, s);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double want = -0.001 * g.flat()[i] / (std::abs(g.flat()[i]) + 1e-8);
    EXPECT_NEAR(p.flat()[i] - before.flat()[i], want, 1e-15);
  }
}

TEST(Adam, HundredStepsMatchScalarRecurrence) {
  MlpParameters p;
  const std::size_t n = p.size();
  std::vector<double> theta(n, 0.0), m(n, 0.0), v(n, 0.0);
  AdamState s(0.01);
  for (int t = 1; t <= 100; ++t) {
    MlpParameters g;
    for (std::size_t i = 0; i < n; ++i) {
      g.flat()[i] = std::sin(0.37 * double(i) + 0.11 * t) + 0.01 * theta[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double gi = g.flat()[i];
      m[i] = 0.9 * m[i] + 0.1 * gi;
      v[i] = 0.999 * v[i] + 0.001 * gi * gi;
      const double mh = m[i] / (1 - std::pow(0.9, t));
      const double vh = v[i] / (1 - std::pow(0.999, t));
      theta[i] -= 0.01 * mh / (std::sqrt(vh) + 1e-8);
    }
    adam_step(p, g, s);
  }
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_NEAR(p.flat()[i], theta[i], 1e-10 * std::max(1.0, std::abs(theta[i])));
  }
}

TEST(Adam, RejectsNonFiniteGradientWithoutMutating) {
  MlpParameters p, g;
  g.flat()[5] = std::numeric_limits<double>::infinity();
  AdamState s(0.001);
  EXPECT_THROW(adam_step(p, g, s), DomainError);
  EXPECT_EQ(s.step_count, 0);
  EXPECT_EQ(p, MlpParameters{});
}

TEST(TrainLocal, SingleExampleProbabilityRises) {
  const auto& f = testing::Fixtures::get();
  auto bank = std::make_shared<FeatureBank>(f.corpus, std::vector<std::string>{},
                                            f.embeddings);
  ClientDataset d;
  d.bank = bank;
  d.examples.push_back({static_cast<std::uint32_t>(*bank->index_of("Fever")), 1});
  Stream init(8, StreamTag::kTest, {});
  MlpParameters p = init_params(init);
  Stream shuffle(8, StreamTag::kTest, {1});
  MlpParameters q = train_local(p, d, TrainConfig{}, shuffle);
  EXPECT_GT(forward(q, d.features(0)), forward(p, d.features(0)));
}

TEST(TrainLocal, DeterministicAndRejectsEmpty) {
  testing::SeparableFixture fx;
  Stream init(9, StreamTag::kTest, {});
  MlpParameters p = init_params(init);
  Stream a(9, StreamTag::kTest, {1}), b(9, StreamTag::kTest, {1});
  TrainStats stats;
  MlpParameters x = train_local(p, fx.dataset, TrainConfig{}, a, &stats);
  EXPECT_EQ(x, train_local(p, fx.dataset, TrainConfig{}, b));
  EXPECT_EQ(stats.steps, 5 * 7);  // ceil(200 / 32) batches per epoch
  ClientDataset empty;
  empty.bank = fx.bank;
  EXPECT_THROW(train_local(p, empty, TrainConfig{}, a), DomainError);
}

TEST(TrainLocal, SeparatesSeparableData) {
  testing::SeparableFixture fx;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Stream init(seed, StreamTag::kInit, {});
    Stream shuffle(seed, StreamTag::kLocalTraining, {});
    MlpParameters p =
        train_local(init_params(init), fx.dataset, TrainConfig{}, shuffle);
    EXPECT_EQ(fx.training_accuracy(p), 1.0) << "seed " << seed;
  }
}

TEST(Checkpoint, RoundTripsExactly) {
  Stream rng(10, StreamTag::kTest, {});
  MlpParameters p = random_params(rng);
  p.flat()[0] = 1e-300;
  p.flat()[1] = -0.1;
  EXPECT_EQ(checkpoint_from_string(checkpoint_to_string(p)), p);
  testing::TempDir dir("ckpt");
  save_checkpoint(dir / "m.ckpt", p);
  EXPECT_EQ(load_checkpoint(dir / "m.ckpt"), p);
  EXPECT_THROW(load_checkpoint(dir / "missing.ckpt"), IoError);
}

TEST(Checkpoint, RejectsMalformedText) {
  std::string text = checkpoint_to_string(MlpParameters{});
  EXPECT_THROW(checkpoint_from_string(text.substr(0, text.size() / 2)),
               DomainError);
  EXPECT_THROW(checkpoint_from_string("symfl-mlp-checkpoint 2\n"), DomainError);
}

TEST(Parameters, FromLayersChecksShapes) {
  std::vector<std::pair<std::vector<double>, std::vector<double>>> layers;
  for (const auto& s : kLayerShapes) {
    layers.emplace_back(std::vector<double>(s.inputs * s.outputs, 0.5),
                        std::vector<double>(s.outputs, 0.25));
  }
  MlpParameters p = MlpParameters::from_layers(layers);
  EXPECT_EQ(p.layer(2).bias[3], 0.25);
  layers[1].second.pop_back();
  EXPECT_THROW(MlpParameters::from_layers(layers), DomainError);
}

}  // namespace
}  // namespace symfl
