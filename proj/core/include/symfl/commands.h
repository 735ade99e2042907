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

#ifndef SYMFL_COMMANDS_H_
#define SYMFL_COMMANDS_H_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>

#include "symfl/config.h"

namespace symfl {

// Process exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitIo = 2;

// Runs `body`, mapping DomainError to 1 and IoError to 2 with the message
// printed to `err`.
int guarded(std::ostream& err, const std::function<int()>& body);

// Loads embeddings, surveys and corpus and checks that every survey
// symptom and corpus term is embeddable.
int cmd_validate(const RunConfig& config, std::ostream& out,
                 std::ostream& err);

// One simulation; writes predictions.csv, accuracy.csv, rounds.jsonl,
// model.ckpt, checkpoints/epoch_<r>.ckpt and manifest.json to output_dir.
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Noise or epsilon sweep over config.sweep_values x config.sweep_seeds;
// writes merged predictions.csv, accuracy.csv and manifest.json.
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

// Renders the seed-aggregated accuracy table of an existing accuracy.csv
// (or of a directory containing one).
int cmd_report(const std::filesystem::path& input,
               std::optional<std::int64_t> epoch, std::ostream& out,
               std::ostream& err);

}  // namespace symfl

#endif  // SYMFL_COMMANDS_H_
