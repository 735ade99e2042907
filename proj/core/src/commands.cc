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

#include "symfl/commands.h"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "json.hpp"
#include "symfl/embedding.h"
#include "symfl/errors.h"
#include "symfl/evaluation.h"
#include "symfl/federation.h"
#include "symfl/survey.h"

namespace symfl {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr std::string_view kToolVersion = "0.1.0";
constexpr double kDefaultEpsilonSweepLevel = 0.5;

struct Inputs {
  EmbeddingTable embeddings;
  std::vector<CountrySurvey> surveys;
  MedicalCorpus corpus;
};

Inputs load_inputs(const RunConfig& config) {
  EmbeddingTable emb = load_embeddings(config.embeddings_path, kEmbeddingDim);
  auto surveys = load_surveys(config.surveys_path);
  MedicalCorpus corpus = load_corpus(config.corpus_path);
  return {std::move(emb), std::move(surveys), std::move(corpus)};
}

std::vector<std::string> unembeddable_terms(const Inputs& in) {
  std::vector<std::string> phrases;
  for (const auto& s : in.surveys) {
    for (const auto& row : s.symptom_counts) phrases.push_back(row.symptom);
  }
  phrases.insert(phrases.end(), in.corpus.terms().begin(),
                 in.corpus.terms().end());
  std::vector<std::string> bad = find_unembeddable(phrases, in.embeddings);
  std::vector<std::string> unique;
  for (auto& b : bad) {
    if (std::find(unique.begin(), unique.end(), b) == unique.end()) {
      unique.push_back(std::move(b));
    }
  }
  return unique;
}

void require_embeddable(const Inputs& in) {
  auto bad = unembeddable_terms(in);
  if (bad.empty()) return;
  std::string msg = "unembeddable terms:";
  for (const auto& b : bad) msg += " '" + b + "'";
  throw DomainError(msg);
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  if (!out) throw IoError("failed writing " + path.string());
}

template <typename Writer>
void write_stream(const fs::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  writer(out);
  if (!out) throw IoError("failed writing " + path.string());
}

void make_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + dir.string() + ": " +
                  ec.message());
  }
}

Json manifest(std::string_view command, const RunConfig& config,
              const std::vector<std::string>& outputs) {
  Json m;
  m["tool"] = "symfl";
  m["version"] = std::string(kToolVersion);
  m["command"] = std::string(command);
  m["config"] = Json::parse(run_config_to_json(config));
  m["outputs"] = outputs;
  return m;
}

}  // namespace

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

int cmd_validate(const RunConfig& config, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    Inputs in = load_inputs(config);
    const EvalSet evalset = build_evalset(in.surveys);
    out << "embeddings: " << in.embeddings.size() << " tokens, dimension "
        << in.embeddings.dimension() << '\n'
        << "surveys: " << in.surveys.size() << " countries, "
        << evalset.size() << " prominent symptoms ("
        << evalset.group_high().size() << " above "
        << format_double(kGroupThreshold) << " prevalence)\n"
        << "corpus: " << in.corpus.size() << " terms\n";
    auto bad = unembeddable_terms(in);
    if (!bad.empty()) {
      err << "unembeddable terms (" << bad.size() << "):\n";
      for (const auto& b : bad) err << "  " << b << '\n';
      return kExitDomain;
    }
    out << "ok\n";
    return kExitOk;
  });
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    if (!config.master_seed) throw DomainError("a seed is required");
    Inputs in = load_inputs(config);
    require_embeddable(in);
    make_output_dir(config.output_dir);

    const SimulationSpec spec = config.simulation_spec();
    SimulationResult run =
        run_simulation(spec, in.surveys, in.corpus, in.embeddings,
                       config.federation_options());
    const EvalSet evalset = build_evalset(in.surveys);
    RunKey key{spec.id, config.mechanism, config.noise().noise_level,
               std::nullopt, *config.master_seed};
    if (config.mechanism == NoiseKind::kLaplaceDp) key.epsilon = config.epsilon;
    SweepResult scored = evaluate_run(key, run, evalset, in.embeddings);
    scored.sort_canonical();

    const fs::path dir = config.output_dir;
    write_stream(dir / "predictions.csv", [&](std::ostream& o) {
      write_predictions_csv(o, scored.predictions);
    });
    write_stream(dir / "accuracy.csv", [&](std::ostream& o) {
      write_accuracy_csv(o, scored.accuracies);
    });
    write_stream(dir / "rounds.jsonl", [&](std::ostream& o) {
      for (const auto& r : run.reports) {
        Json j;
        j["round"] = r.round_index;
        j["selected"] = r.selected_clients;
        j["participants"] = r.participating_clients;
        j["skipped"] = r.skipped_empty_clients;
        j["mean_loss"] = r.mean_local_loss;
        j["wall_time_s"] = r.wall_time_seconds;
        o << j.dump() << '\n';
      }
    });
    make_output_dir(dir / "checkpoints");
    for (const auto& snap : run.snapshots) {
      save_checkpoint(
          dir / "checkpoints" /
              ("epoch_" + std::to_string(snap.round_index) + ".ckpt"),
          snap.params);
    }
    save_checkpoint(dir / "model.ckpt", run.snapshots.back().params);
    write_file(dir / "manifest.json",
               manifest("run", config,
                        {"predictions.csv", "accuracy.csv", "rounds.jsonl",
                         "model.ckpt", "checkpoints/"})
                       .dump(2) +
                   "\n");

    out << "simulation " << to_string(spec.id) << ": " << spec.n_clients
        << " clients of " << spec.min_persons << "-" << spec.max_persons
        << " persons, " << spec.clients_per_round() << " per round, "
        << spec.global_epochs << " rounds\n";
    for (const auto& r : run.reports) {
      out << "round " << r.round_index << ": " << r.participating_clients
          << " trained, " << r.skipped_empty_clients
          << " empty, mean local loss " << format_double(r.mean_local_loss)
          << '\n';
    }
    auto summary = summarize_accuracy(scored.accuracies, config.report_epoch);
    out << render_accuracy_table(summary);
    out << "wrote " << dir.string() << '\n';
    return kExitOk;
  });
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    if (config.sweep_axis.empty()) {
      throw DomainError("sweep axis is required (noise or epsilon)");
    }
    if (config.sweep_seeds.empty()) {
      throw DomainError("sweep needs at least one seed");
    }
    Inputs in = load_inputs(config);
    require_embeddable(in);

    SweepInputs inputs;
    inputs.spec = config.simulation_spec();
    inputs.surveys = &in.surveys;
    inputs.corpus = &in.corpus;
    inputs.embeddings = &in.embeddings;
    inputs.options = config.federation_options();
    inputs.threads = config.threads;

    SweepResult result;
    if (config.sweep_axis == "noise") {
      result = noise_sweep(inputs, config.mechanism, config.sweep_values,
                           config.sweep_seeds);
    } else {
      result = epsilon_sweep(
          inputs, config.sweep_values,
          config.noise_level.value_or(kDefaultEpsilonSweepLevel),
          config.sweep_seeds);
    }

    make_output_dir(config.output_dir);
    const fs::path dir = config.output_dir;
    write_stream(dir / "predictions.csv", [&](std::ostream& o) {
      write_predictions_csv(o, result.predictions);
    });
    write_stream(dir / "accuracy.csv", [&](std::ostream& o) {
      write_accuracy_csv(o, result.accuracies);
    });
    write_file(dir / "manifest.json",
               manifest("sweep", config, {"predictions.csv", "accuracy.csv"})
                       .dump(2) +
                   "\n");
    auto summary = summarize_accuracy(result.accuracies, config.report_epoch);
    out << render_accuracy_table(summary);
    out << "wrote " << dir.string() << '\n';
    return kExitOk;
  });
}

int cmd_report(const fs::path& input, std::optional<std::int64_t> epoch,
               std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    fs::path csv = fs::is_directory(input) ? input / "accuracy.csv" : input;
    std::ifstream in(csv);
    if (!in) throw IoError("cannot open " + csv.string());
    auto rows = read_accuracy_csv(in);
    out << render_accuracy_table(summarize_accuracy(rows, epoch));
    return kExitOk;
  });
}

}  // namespace symfl
