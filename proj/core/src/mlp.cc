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
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "symfl/errors.h"

namespace symfl {
namespace {

constexpr std::size_t total_size() {
  std::size_t n = 0;
  for (const auto& s : kLayerShapes) n += s.outputs * s.inputs + s.outputs;
  return n;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// Activations of one forward pass: act[0] is the input, act[l + 1] the
// output of layer l (post-ReLU for hidden layers, the logit for the last).
struct Trace {
  std::array<std::vector<double>, kNumLayers + 1> act;

  Trace() {
    act[0].resize(kInputDim);
    for (std::size_t l = 0; l < kNumLayers; ++l) {
      act[l + 1].resize(kLayerShapes[l].outputs);
    }
  }
};

// Returns the raw sigmoid output (may round to exactly 0 or 1).
double run_forward(const MlpParameters& params, std::span<const double> x,
                   Trace& t) {
  std::copy(x.begin(), x.end(), t.act[0].begin());
  for (std::size_t l = 0; l < kNumLayers; ++l) {
    auto layer = params.layer(l);
    const auto& in = t.act[l];
    auto& out = t.act[l + 1];
    for (std::size_t o = 0; o < layer.shape.outputs; ++o) {
      const double* w = layer.weights.data() + o * layer.shape.inputs;
      double z = layer.bias[o];
      for (std::size_t i = 0; i < layer.shape.inputs; ++i) z += w[i] * in[i];
      out[o] = (l + 1 < kNumLayers) ? std::max(z, 0.0) : z;
    }
  }
  return sigmoid(t.act[kNumLayers][0]);
}

void check_input(std::span<const double> x) {
  if (x.size() != kInputDim) {
    throw DomainError("classifier input has " + std::to_string(x.size()) +
                      " components, expected " + std::to_string(kInputDim));
  }
  if (!std::all_of(x.begin(), x.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw DomainError("classifier input has a non-finite component");
  }
}

void append_number(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

MlpParameters::MlpParameters() : values_(total_size(), 0.0) {}

std::size_t MlpParameters::offset(std::size_t l) {
  std::size_t off = 0;
  for (std::size_t i = 0; i < l; ++i) {
    off += kLayerShapes[i].outputs * kLayerShapes[i].inputs +
           kLayerShapes[i].outputs;
  }
  return off;
}

MlpParameters::Layer<double> MlpParameters::layer(std::size_t l) {
  const LayerShape s = kLayerShapes[l];
  double* base = values_.data() + offset(l);
  return {s, {base, s.outputs * s.inputs}, {base + s.outputs * s.inputs, s.outputs}};
}

MlpParameters::Layer<const double> MlpParameters::layer(std::size_t l) const {
  const LayerShape s = kLayerShapes[l];
  const double* base = values_.data() + offset(l);
  return {s, {base, s.outputs * s.inputs}, {base + s.outputs * s.inputs, s.outputs}};
}

MlpParameters MlpParameters::from_layers(
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>&
        layers) {
  if (layers.size() != kNumLayers) {
    throw DomainError("expected " + std::to_string(kNumLayers) +
                      " layers, got " + std::to_string(layers.size()));
  }
  MlpParameters p;
  for (std::size_t l = 0; l < kNumLayers; ++l) {
    auto view = p.layer(l);
    if (layers[l].first.size() != view.weights.size() ||
        layers[l].second.size() != view.bias.size()) {
      throw DomainError("layer " + std::to_string(l) + " shape mismatch");
    }
    std::copy(layers[l].first.begin(), layers[l].first.end(),
              view.weights.begin());
    std::copy(layers[l].second.begin(), layers[l].second.end(),
              view.bias.begin());
  }
  return p;
}

bool MlpParameters::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

MlpParameters init_params(Stream& rng) {
  MlpParameters p;
  for (std::size_t l = 0; l < kNumLayers; ++l) {
    auto layer = p.layer(l);
    const double limit = std::sqrt(
        6.0 / static_cast<double>(layer.shape.inputs + layer.shape.outputs));
    for (double& w : layer.weights) w = (2.0 * rng.uniform() - 1.0) * limit;
  }
  return p;
}

double forward(const MlpParameters& params, std::span<const double> x) {
  check_input(x);
  Trace t;
  double p = run_forward(params, x, t);
  return std::clamp(p, std::numeric_limits<double>::min(),
                    std::nextafter(1.0, 0.0));
}

LossGradient loss_and_gradient(const MlpParameters& params,
                               std::span<const Sample> batch) {
  if (batch.empty()) throw DomainError("loss_and_gradient on an empty batch");
  LossGradient out;
  Trace t;
  std::array<std::vector<double>, kNumLayers + 1> delta;
  for (std::size_t l = 0; l <= kNumLayers; ++l) delta[l].resize(t.act[l].size());

  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (const Sample& s : batch) {
    check_input(s.x);
    const double p = run_forward(params, s.x, t);
    const double pc = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
    out.loss -= s.label * std::log(pc) + (1.0 - s.label) * std::log(1.0 - pc);

    // d(loss)/d(logit); the clamp has zero derivative once saturated.
    delta[kNumLayers][0] = (p == pc) ? (p - s.label) * inv_n : 0.0;
    for (std::size_t l = kNumLayers; l-- > 0;) {
      auto layer = params.layer(l);
      auto grad = out.gradient.layer(l);
      const auto& in = t.act[l];
      const auto& d_out = delta[l + 1];
      auto& d_in = delta[l];
      std::fill(d_in.begin(), d_in.end(), 0.0);
      for (std::size_t o = 0; o < layer.shape.outputs; ++o) {
        const double d = d_out[o];
        if (d == 0.0) continue;
        grad.bias[o] += d;
        const double* w = layer.weights.data() + o * layer.shape.inputs;
        double* g = grad.weights.data() + o * layer.shape.inputs;
        for (std::size_t i = 0; i < layer.shape.inputs; ++i) {
          g[i] += d * in[i];
          d_in[i] += d * w[i];
        }
      }
      if (l > 0) {
        // ReLU: act[l] holds the post-activation, zero exactly when inactive.
        for (std::size_t i = 0; i < d_in.size(); ++i) {
          if (in[i] <= 0.0) d_in[i] = 0.0;
        }
      }
    }
  }
  out.loss *= inv_n;
  return out;
}

void adam_step(MlpParameters& params, const MlpParameters& grad,
               AdamState& state) {
  auto g = grad.flat();
  if (!grad.all_finite()) {
    throw DomainError("non-finite gradient passed to adam_step");
  }
  const std::int64_t t = state.step_count + 1;
  const double bc1 = 1.0 - std::pow(AdamState::kBeta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(AdamState::kBeta2, static_cast<double>(t));
  auto theta = params.flat();
  auto m = state.first_moment.flat();
  auto v = state.second_moment.flat();
  for (std::size_t i = 0; i < theta.size(); ++i) {
    m[i] = AdamState::kBeta1 * m[i] + (1.0 - AdamState::kBeta1) * g[i];
    v[i] = AdamState::kBeta2 * v[i] + (1.0 - AdamState::kBeta2) * g[i] * g[i];
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    theta[i] -= state.learning_rate * m_hat /
                (std::sqrt(v_hat) + AdamState::kEpsHat);
  }
  state.step_count = t;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0 && std::isfinite(learning_rate))) {
    throw DomainError("learning_rate must be positive");
  }
  if (batch_size < 1) throw DomainError("batch_size must be at least 1");
  if (local_epochs < 1) throw DomainError("local_epochs must be at least 1");
}

MlpParameters train_local(const MlpParameters& params,
                          const ClientDataset& dataset,
                          const TrainConfig& config, Stream& shuffle_rng,
                          TrainStats* stats) {
  config.validate();
  if (dataset.empty()) throw DomainError("empty client");

  MlpParameters w = params;
  AdamState state(config.learning_rate);
  std::vector<std::size_t> order(dataset.size());
  std::vector<Sample> batch;
  batch.reserve(config.batch_size);
  double epoch_loss = 0.0;
  std::int64_t epoch_batches = 0;

  for (int epoch = 0; epoch < config.local_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle_rng.shuffle(order.begin(), order.end());
    epoch_loss = 0.0;
    epoch_batches = 0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        batch.push_back(
            {dataset.features(i),
             static_cast<double>(dataset.examples[i].label)});
      }
      LossGradient lg = loss_and_gradient(w, batch);
      adam_step(w, lg.gradient, state);
      if (!w.all_finite() || !state.second_moment.all_finite() ||
          !state.first_moment.all_finite()) {
        throw DomainError("non-finite parameters after optimizer step");
      }
      epoch_loss += lg.loss;
      ++epoch_batches;
    }
  }
  if (stats != nullptr) {
    stats->steps = state.step_count;
    stats->mean_loss = epoch_loss / static_cast<double>(epoch_batches);
  }
  return w;
}

std::string checkpoint_to_string(const MlpParameters& params) {
  std::string out = "symfl-mlp-checkpoint 1\nlayers " +
                    std::to_string(kNumLayers) + "\n";
  for (std::size_t l = 0; l < kNumLayers; ++l) {
    auto layer = params.layer(l);
    out += "layer " + std::to_string(l) + " " +
           std::to_string(layer.shape.inputs) + " " +
           std::to_string(layer.shape.outputs) + "\nweights\n";
    for (std::size_t o = 0; o < layer.shape.outputs; ++o) {
      for (std::size_t i = 0; i < layer.shape.inputs; ++i) {
        if (i > 0) out += ' ';
        append_number(out, layer.weights[o * layer.shape.inputs + i]);
      }
      out += '\n';
    }
    out += "bias\n";
    for (std::size_t o = 0; o < layer.shape.outputs; ++o) {
      if (o > 0) out += ' ';
      append_number(out, layer.bias[o]);
    }
    out += '\n';
  }
  return out;
}

MlpParameters checkpoint_from_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  auto expect = [&](std::string_view word) {
    std::string tok;
    if (!(in >> tok) || tok != word) {
      throw DomainError("checkpoint: expected '" + std::string(word) +
                        "', got '" + tok + "'");
    }
  };
  auto read_size = [&]() {
    std::size_t v = 0;
    if (!(in >> v)) throw DomainError("checkpoint: expected an integer");
    return v;
  };
  auto read_double = [&]() {
    std::string tok;
    double v = 0.0;
    if (!(in >> tok)) throw DomainError("checkpoint: truncated");
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw DomainError("checkpoint: bad number '" + tok + "'");
    }
    return v;
  };

  expect("symfl-mlp-checkpoint");
  if (read_size() != 1) throw DomainError("checkpoint: unsupported version");
  expect("layers");
  if (read_size() != kNumLayers) {
    throw DomainError("checkpoint: wrong layer count");
  }
  MlpParameters p;
  for (std::size_t l = 0; l < kNumLayers; ++l) {
    auto layer = p.layer(l);
    expect("layer");
    if (read_size() != l || read_size() != layer.shape.inputs ||
        read_size() != layer.shape.outputs) {
      throw DomainError("checkpoint: layer " + std::to_string(l) +
                        " shape mismatch");
    }
    expect("weights");
    for (double& w : layer.weights) w = read_double();
    expect("bias");
    for (double& b : layer.bias) b = read_double();
  }
  std::string trailing;
  if (in >> trailing) throw DomainError("checkpoint: trailing data");
  return p;
}

void save_checkpoint(const std::filesystem::path& path,
                     const MlpParameters& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint: " + path.string());
  out << checkpoint_to_string(params);
  if (!out) throw IoError("failed writing checkpoint: " + path.string());
}

MlpParameters load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return checkpoint_from_string(buf.str());
}

}  // namespace symfl
