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

#include "symfl/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "symfl/errors.h"

namespace symfl {
namespace {

using Json = nlohmann::ordered_json;

template <typename T>
T get_as(const Json& j, std::string_view key) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    throw DomainError("config: bad value for '" + std::string(key) + "'");
  }
}

}  // namespace

void RunConfig::validate() const {
  noise().validate();
  if (!(scale > 0.0 && scale <= 1.0)) {
    throw DomainError("scale must lie in (0, 1], got " + std::to_string(scale));
  }
  if (participation_fraction &&
      !(*participation_fraction > 0.0 && *participation_fraction <= 1.0)) {
    throw DomainError("participation_fraction must lie in (0, 1]");
  }
  if (global_epochs && *global_epochs < 0) {
    throw DomainError("global_epochs must be non-negative");
  }
  if (!(learning_rate > 0.0 && std::isfinite(learning_rate))) {
    throw DomainError("learning_rate must be positive");
  }
  if (batch_size < 1) throw DomainError("batch_size must be positive");
  if (!sweep_axis.empty() && sweep_axis != "noise" && sweep_axis != "epsilon") {
    throw DomainError("sweep axis must be 'noise' or 'epsilon'");
  }
  simulation_spec().validate();
}

NoiseMechanism RunConfig::noise() const {
  return {mechanism, noise_level.value_or(0.0), epsilon};
}

SimulationSpec RunConfig::simulation_spec() const {
  SimulationSpec spec = SimulationSpec::preset(simulation).scaled(scale);
  if (participation_fraction) {
    spec.participation_fraction = *participation_fraction;
  }
  if (global_epochs) spec.global_epochs = *global_epochs;
  return spec;
}

FederationOptions RunConfig::federation_options() const {
  FederationOptions o;
  o.noise = noise();
  o.train.learning_rate = learning_rate;
  o.train.batch_size = batch_size;
  o.weighting = weighting;
  o.negative_pool = negative_pool;
  o.fixed_client_data = fixed_client_data;
  o.master_seed = master_seed.value_or(0);
  o.threads = threads;
  return o;
}

RunConfig run_config_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DomainError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("config: top level must be an object");
  // A run manifest carries the resolved config under "config".
  if (j.contains("tool") && j.contains("config")) j = j["config"];
  if (!j.is_object()) throw DomainError("config: top level must be an object");

  RunConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "embeddings") {
      c.embeddings_path = get_as<std::string>(v, key);
    } else if (key == "surveys") {
      c.surveys_path = get_as<std::string>(v, key);
    } else if (key == "corpus") {
      c.corpus_path = get_as<std::string>(v, key);
    } else if (key == "output_dir") {
      c.output_dir = get_as<std::string>(v, key);
    } else if (key == "simulation") {
      c.simulation = parse_simulation_id(get_as<std::string>(v, key));
    } else if (key == "mechanism") {
      c.mechanism = parse_noise_kind(get_as<std::string>(v, key));
    } else if (key == "noise_level") {
      if (!v.is_null()) c.noise_level = get_as<double>(v, key);
    } else if (key == "epsilon") {
      if (!v.is_null()) c.epsilon = get_as<double>(v, key);
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) {
        throw DomainError("config: 'seed' must be a non-negative integer");
      }
      c.master_seed = v.get<std::uint64_t>();
    } else if (key == "scale") {
      c.scale = get_as<double>(v, key);
    } else if (key == "participation_fraction") {
      if (!v.is_null()) c.participation_fraction = get_as<double>(v, key);
    } else if (key == "global_epochs") {
      if (!v.is_null()) c.global_epochs = get_as<int>(v, key);
    } else if (key == "fixed_client_data") {
      c.fixed_client_data = get_as<bool>(v, key);
    } else if (key == "weighting") {
      c.weighting = parse_weighting(get_as<std::string>(v, key));
    } else if (key == "negative_pool") {
      c.negative_pool = parse_negative_pool(get_as<std::string>(v, key));
    } else if (key == "epoch") {
      if (!v.is_null()) c.report_epoch = get_as<std::int64_t>(v, key);
    } else if (key == "learning_rate") {
      c.learning_rate = get_as<double>(v, key);
    } else if (key == "batch_size") {
      c.batch_size = get_as<std::size_t>(v, key);
    } else if (key == "threads") {
      c.threads = get_as<std::size_t>(v, key);
    } else if (key == "sweep") {
      if (!v.is_object()) throw DomainError("config: 'sweep' must be an object");
      for (const auto& [sk, sv] : v.items()) {
        if (sk == "axis") {
          c.sweep_axis = get_as<std::string>(sv, sk);
        } else if (sk == "values") {
          c.sweep_values = get_as<std::vector<double>>(sv, sk);
        } else if (sk == "seeds") {
          c.sweep_seeds = get_as<std::vector<std::uint64_t>>(sv, sk);
        } else {
          throw DomainError("config: unknown key 'sweep." + sk + "'");
        }
      }
    } else {
      throw DomainError("config: unknown key '" + key + "'");
    }
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return run_config_from_json(buf.str());
}

std::string run_config_to_json(const RunConfig& c, int indent) {
  Json j;
  j["embeddings"] = c.embeddings_path.string();
  j["surveys"] = c.surveys_path.string();
  j["corpus"] = c.corpus_path.string();
  j["output_dir"] = c.output_dir.string();
  j["simulation"] = std::string(to_string(c.simulation));
  j["mechanism"] = std::string(to_string(c.mechanism));
  j["noise_level"] = c.noise_level ? Json(*c.noise_level) : Json(nullptr);
  j["epsilon"] = c.mechanism == NoiseKind::kLaplaceDp ? Json(c.epsilon)
                                                      : Json(nullptr);
  j["seed"] = c.master_seed ? Json(*c.master_seed) : Json(nullptr);
  j["scale"] = c.scale;
  j["participation_fraction"] =
      c.participation_fraction ? Json(*c.participation_fraction)
                               : Json(nullptr);
  j["global_epochs"] = c.global_epochs ? Json(*c.global_epochs) : Json(nullptr);
  j["fixed_client_data"] = c.fixed_client_data;
  j["weighting"] = std::string(to_string(c.weighting));
  j["negative_pool"] = std::string(to_string(c.negative_pool));
  j["epoch"] = c.report_epoch ? Json(*c.report_epoch) : Json(nullptr);
  j["learning_rate"] = c.learning_rate;
  j["batch_size"] = c.batch_size;
  j["threads"] = c.threads;
  if (!c.sweep_axis.empty() || !c.sweep_values.empty() ||
      !c.sweep_seeds.empty()) {
    j["sweep"] = {{"axis", c.sweep_axis},
                  {"values", c.sweep_values},
                  {"seeds", c.sweep_seeds}};
  }
  return j.dump(indent);
}

}  // namespace symfl
