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

#include "symfl/evaluation.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "symfl/errors.h"
#include "symfl/parallel.h"

namespace symfl {
namespace {

auto order_key(const RunKey& k) {
  return std::make_tuple(static_cast<int>(k.simulation),
                         static_cast<int>(k.mechanism), k.noise_level,
                         k.epsilon.has_value(), k.epsilon.value_or(0.0),
                         k.seed);
}

auto config_key(const RunKey& k) {
  return std::make_tuple(static_cast<int>(k.simulation),
                         static_cast<int>(k.mechanism), k.noise_level,
                         k.epsilon.has_value(), k.epsilon.value_or(0.0));
}

void write_key(std::ostream& out, const RunKey& k) {
  out << to_string(k.simulation) << ',' << to_string(k.mechanism) << ','
      << format_double(k.noise_level) << ','
      << (k.epsilon ? format_double(*k.epsilon) : std::string()) << ','
      << k.seed;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> f;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = line.find(',', pos);
    f.push_back(line.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return f;
}

template <typename T>
T parse_field(std::string_view s, std::string_view what) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw DomainError("accuracy csv: bad " + std::string(what) + " '" +
                      std::string(s) + "'");
  }
  return v;
}

struct SweepPoint {
  NoiseMechanism noise;
  std::uint64_t seed;
};

SweepResult run_points(const SweepInputs& inputs,
                       const std::vector<SweepPoint>& points) {
  if (!inputs.surveys || !inputs.corpus || !inputs.embeddings) {
    throw DomainError("sweep inputs are incomplete");
  }
  const EvalSet evalset = build_evalset(*inputs.surveys);
  std::vector<SweepResult> results(points.size());
  parallel_for(points.size(), inputs.threads, [&](std::size_t i) {
    FederationOptions opts = inputs.options;
    opts.noise = points[i].noise;
    opts.master_seed = points[i].seed;
    opts.threads = 1;
    SimulationResult run = run_simulation(inputs.spec, *inputs.surveys,
                                          *inputs.corpus, *inputs.embeddings,
                                          opts);
    RunKey key{inputs.spec.id, opts.noise.kind, opts.noise.noise_level,
               std::nullopt, opts.master_seed};
    if (opts.noise.kind == NoiseKind::kLaplaceDp) key.epsilon = opts.noise.epsilon;
    results[i] = evaluate_run(key, run, evalset, *inputs.embeddings);
  });
  SweepResult merged;
  for (auto& r : results) merged.append(std::move(r));
  merged.sort_canonical();
  return merged;
}

}  // namespace

std::vector<std::string> EvalSet::group_high() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (high[i]) out.push_back(symptoms[i]);
  }
  return out;
}

std::vector<std::string> EvalSet::group_low() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!high[i]) out.push_back(symptoms[i]);
  }
  return out;
}

EvalSet build_evalset(const std::vector<CountrySurvey>& surveys) {
  EvalSet set;
  set.symptoms = prominent_symptom_union(surveys);
  std::int64_t population = 0;
  for (const auto& s : surveys) population += s.total;
  for (const auto& name : set.symptoms) {
    std::int64_t count = 0;
    for (const auto& s : surveys) {
      for (const auto& row : s.symptom_counts) {
        if (to_lower(row.symptom) == to_lower(name)) count += row.count;
      }
    }
    const double frac =
        static_cast<double>(count) / static_cast<double>(population);
    set.aggregate_fraction.push_back(frac);
    set.high.push_back(frac > kGroupThreshold);
  }
  return set;
}

double predict_symptom(const GlobalModel& model,
                       const EmbeddingTable& embeddings,
                       std::string_view symptom) {
  return forward(model.params, encode_phrase(embeddings, symptom).values);
}

double accuracy(const GlobalModel& model, const EvalSet& evalset,
                const EmbeddingTable& embeddings) {
  if (evalset.size() == 0) throw DomainError("empty evaluation set");
  std::size_t hits = 0;
  for (const auto& s : evalset.symptoms) {
    if (predict_symptom(model, embeddings, s) >= evalset.decision_threshold) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(evalset.size());
}

void SweepResult::append(SweepResult other) {
  predictions.insert(predictions.end(),
                     std::make_move_iterator(other.predictions.begin()),
                     std::make_move_iterator(other.predictions.end()));
  accuracies.insert(accuracies.end(), other.accuracies.begin(),
                    other.accuracies.end());
}

void SweepResult::sort_canonical() {
  std::stable_sort(predictions.begin(), predictions.end(),
                   [](const PredictionRow& a, const PredictionRow& b) {
                     return std::tuple_cat(order_key(a.key),
                                           std::make_tuple(a.global_epoch,
                                                           a.symptom_index)) <
                            std::tuple_cat(order_key(b.key),
                                           std::make_tuple(b.global_epoch,
                                                           b.symptom_index));
                   });
  std::stable_sort(accuracies.begin(), accuracies.end(),
                   [](const AccuracyRow& a, const AccuracyRow& b) {
                     return std::tuple_cat(order_key(a.key),
                                           std::make_tuple(a.global_epoch)) <
                            std::tuple_cat(order_key(b.key),
                                           std::make_tuple(b.global_epoch));
                   });
}

SweepResult evaluate_run(const RunKey& key, const SimulationResult& run,
                         const EvalSet& evalset,
                         const EmbeddingTable& embeddings) {
  SweepResult out;
  for (std::size_t e = 1; e < run.snapshots.size(); ++e) {
    const GlobalModel& model = run.snapshots[e];
    std::size_t hits = 0;
    for (std::size_t s = 0; s < evalset.size(); ++s) {
      const double p = predict_symptom(model, embeddings, evalset.symptoms[s]);
      if (p >= evalset.decision_threshold) ++hits;
      out.predictions.push_back({key, model.round_index, s,
                                 evalset.symptoms[s], evalset.high[s], p});
    }
    out.accuracies.push_back(
        {key, model.round_index,
         static_cast<double>(hits) / static_cast<double>(evalset.size())});
  }
  return out;
}

SweepResult noise_sweep(const SweepInputs& inputs, NoiseKind kind,
                        std::span<const double> levels,
                        std::span<const std::uint64_t> seeds) {
  std::vector<SweepPoint> points;
  for (double level : levels) {
    NoiseMechanism noise = inputs.options.noise;
    noise.kind = kind;
    noise.noise_level = level;
    noise.validate();
    for (std::uint64_t seed : seeds) points.push_back({noise, seed});
  }
  return run_points(inputs, points);
}

SweepResult epsilon_sweep(const SweepInputs& inputs,
                          std::span<const double> epsilons, double noise_level,
                          std::span<const std::uint64_t> seeds) {
  std::vector<SweepPoint> points;
  for (double eps : epsilons) {
    NoiseMechanism noise{NoiseKind::kLaplaceDp, noise_level, eps};
    noise.validate();
    for (std::uint64_t seed : seeds) points.push_back({noise, seed});
  }
  return run_points(inputs, points);
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_predictions_csv(std::ostream& out,
                           std::span<const PredictionRow> rows) {
  out << kPredictionCsvHeader << '\n';
  for (const auto& r : rows) {
    write_key(out, r.key);
    out << ',' << r.global_epoch << ',' << r.symptom << ','
        << (r.high ? "high" : "low") << ',' << format_double(r.prediction)
        << '\n';
  }
}

void write_accuracy_csv(std::ostream& out, std::span<const AccuracyRow> rows) {
  out << kAccuracyCsvHeader << '\n';
  for (const auto& r : rows) {
    write_key(out, r.key);
    out << ',' << r.global_epoch << ',' << format_double(r.accuracy) << '\n';
  }
}

std::vector<AccuracyRow> read_accuracy_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kAccuracyCsvHeader) {
    throw DomainError("accuracy csv: missing or unexpected header");
  }
  std::vector<AccuracyRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_csv(line);
    if (f.size() != 7) {
      throw DomainError("accuracy csv: expected 7 fields in '" + line + "'");
    }
    AccuracyRow r;
    r.key.simulation = parse_simulation_id(f[0]);
    r.key.mechanism = parse_noise_kind(f[1]);
    r.key.noise_level = parse_field<double>(f[2], "noise_level");
    if (!f[3].empty()) r.key.epsilon = parse_field<double>(f[3], "epsilon");
    r.key.seed = parse_field<std::uint64_t>(f[4], "seed");
    r.global_epoch = parse_field<std::int64_t>(f[5], "global_epoch");
    r.accuracy = parse_field<double>(f[6], "accuracy");
    rows.push_back(r);
  }
  return rows;
}

std::vector<AccuracySummary> summarize_accuracy(
    std::span<const AccuracyRow> rows, std::optional<std::int64_t> epoch) {
  using Key = decltype(config_key(RunKey{}));
  std::map<Key, std::int64_t> last_epoch;
  for (const auto& r : rows) {
    auto& e = last_epoch[config_key(r.key)];
    e = std::max(e, r.global_epoch);
  }
  std::map<Key, AccuracySummary> groups;
  for (const auto& r : rows) {
    const Key k = config_key(r.key);
    const std::int64_t want = epoch.value_or(last_epoch[k]);
    if (r.global_epoch != want) continue;
    auto [it, fresh] = groups.try_emplace(k);
    AccuracySummary& s = it->second;
    if (fresh) {
      s.key = r.key;
      s.key.seed = 0;
      s.global_epoch = want;
      s.min = s.max = r.accuracy;
    }
    ++s.seeds;
    s.mean += r.accuracy;
    s.min = std::min(s.min, r.accuracy);
    s.max = std::max(s.max, r.accuracy);
  }
  std::vector<AccuracySummary> out;
  for (auto& [k, s] : groups) {
    s.mean /= static_cast<double>(s.seeds);
    out.push_back(s);
  }
  return out;
}

std::string render_accuracy_table(std::span<const AccuracySummary> summary) {
  std::ostringstream out;
  out << "| simulation | mechanism | noise | epsilon | epoch | seeds | "
         "mean acc | min | max |\n"
      << "|---|---|---|---|---|---|---|---|---|\n";
  char buf[128];
  for (const auto& s : summary) {
    std::snprintf(buf, sizeof(buf), "| %.4f | %.4f | %.4f |\n", s.mean, s.min,
                  s.max);
    out << "| " << to_string(s.key.simulation) << " | "
        << to_string(s.key.mechanism) << " | "
        << format_double(s.key.noise_level) << " | "
        << (s.key.epsilon ? format_double(*s.key.epsilon) : "-") << " | "
        << s.global_epoch << " | " << s.seeds << " " << buf;
  }
  return out.str();
}

}  // namespace symfl
