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

#ifndef SYMFL_RNG_H_
#define SYMFL_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace symfl {

// Purpose tags mixed into stream keys so that streams drawn for different
// jobs never coincide even when the numeric coordinates do.
enum class StreamTag : std::uint64_t {
  kInit = 1,
  kPopulation = 2,
  kSelection = 3,
  kClientData = 4,
  kLocalTraining = 5,
  kTest = 99,
};

std::uint64_t splitmix64(std::uint64_t x);

// Hashes (master seed, tag, coordinates...) into a single 64-bit stream key.
std::uint64_t derive_key(std::uint64_t master_seed, StreamTag tag,
                         std::initializer_list<std::uint64_t> coords);

// A random stream over std::mt19937_64 (output sequence fixed by the
// standard). All variate transforms are implemented here rather than via
// <random> distributions, whose algorithms are implementation-defined.
class Stream {
 public:
  explicit Stream(std::uint64_t key) : engine_(key) {}

  Stream(std::uint64_t master_seed, StreamTag tag,
         std::initializer_list<std::uint64_t> coords)
      : engine_(derive_key(master_seed, tag, coords)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Uniform on the open interval (0, 1).
  double uniform_open();

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Standard normal via Box-Muller; no cached second variate so every call
  // consumes exactly two uniforms.
  double normal();

  // Laplace(0, scale) via the inverse CDF.
  double laplace(double scale);

  // Fisher-Yates shuffle.
  template <typename It>
  void shuffle(It first, It last) {
    auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      std::uint64_t j = uniform_index(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace symfl

#endif  // SYMFL_RNG_H_
