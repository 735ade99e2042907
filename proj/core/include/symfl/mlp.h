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

#ifndef SYMFL_MLP_H_
#define SYMFL_MLP_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symfl/rng.h"
#include "symfl/synth.h"

namespace symfl {

struct LayerShape {
  std::size_t inputs;
  std::size_t outputs;
};

// 50 -> 32 -> 16 -> 8 -> 1. Hidden layers use ReLU, the output a sigmoid.
inline constexpr std::array<LayerShape, 4> kLayerShapes{
    {{50, 32}, {32, 16}, {16, 8}, {8, 1}}};
inline constexpr std::size_t kNumLayers = kLayerShapes.size();
inline constexpr std::size_t kInputDim = kLayerShapes.front().inputs;

// Weights and biases of the classifier in one flat buffer. Layer l holds an
// outputs x inputs row-major weight matrix followed by its bias vector.
// The same type carries gradients and optimizer moments.
class MlpParameters {
 public:
  template <typename T>
  struct Layer {
    LayerShape shape;
    std::span<T> weights;
    std::span<T> bias;
  };

  // All entries zero.
  MlpParameters();

  // Builds from explicit (weights, bias) pairs. Throws DomainError unless
  // there are exactly four layers of the expected shapes.
  static MlpParameters from_layers(
      const std::vector<std::pair<std::vector<double>, std::vector<double>>>&
          layers);

  Layer<double> layer(std::size_t l);
  Layer<const double> layer(std::size_t l) const;

  std::span<double> flat() { return values_; }
  std::span<const double> flat() const { return values_; }
  std::size_t size() const { return values_.size(); }

  bool all_finite() const;

  friend bool operator==(const MlpParameters&, const MlpParameters&) = default;

 private:
  static std::size_t offset(std::size_t l);
  std::vector<double> values_;
};

// Glorot-uniform weights, zero biases.
MlpParameters init_params(Stream& rng);

// Probability in the open interval (0, 1). Throws DomainError on a
// wrong-length or non-finite input.
double forward(const MlpParameters& params, std::span<const double> x);

struct Sample {
  std::span<const double> x;
  double label = 0.0;
};

inline constexpr double kProbabilityClamp = 1e-7;

struct LossGradient {
  double loss = 0.0;
  MlpParameters gradient;
};

// Mean binary cross-entropy over the batch with p clamped to
// [1e-7, 1 - 1e-7], and its exact gradient (zero through a saturated clamp).
LossGradient loss_and_gradient(const MlpParameters& params,
                               std::span<const Sample> batch);

struct AdamState {
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsHat = 1e-8;

  explicit AdamState(double learning_rate) : learning_rate(learning_rate) {}

  MlpParameters first_moment;
  MlpParameters second_moment;
  std::int64_t step_count = 0;
  double learning_rate;
};

// One bias-corrected Adam update. Throws DomainError, leaving params and
// state untouched, if the gradient has a non-finite entry.
void adam_step(MlpParameters& params, const MlpParameters& grad,
               AdamState& state);

struct TrainConfig {
  double learning_rate = 0.001;
  std::size_t batch_size = 32;
  int local_epochs = 5;

  void validate() const;
};

struct TrainStats {
  std::int64_t steps = 0;
  double mean_loss = 0.0;  // mean batch loss over the final epoch
};

// Minibatch Adam on one client's data with a fresh optimizer state. The
// example order is reshuffled every epoch from `shuffle_rng`; the last short
// batch is kept. Throws DomainError("empty client") on an empty dataset.
MlpParameters train_local(const MlpParameters& params,
                          const ClientDataset& dataset,
                          const TrainConfig& config, Stream& shuffle_rng,
                          TrainStats* stats = nullptr);

// Text checkpoint, exact round trip (shortest round-trip decimals).
std::string checkpoint_to_string(const MlpParameters& params);
MlpParameters checkpoint_from_string(std::string_view text);
void save_checkpoint(const std::filesystem::path& path,
                     const MlpParameters& params);
MlpParameters load_checkpoint(const std::filesystem::path& path);

}  // namespace symfl

#endif  // SYMFL_MLP_H_
