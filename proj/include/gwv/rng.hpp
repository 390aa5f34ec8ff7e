// Copyright 2026 The gwasverify Authors
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

#ifndef GWV_RNG_HPP_
#define GWV_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace gwv {

// Mixes one step of the splitmix64 sequence into `state` and returns the
// next output word.
uint64_t splitmix64(uint64_t& state);

// Derives a 64-bit seed from a root seed, a domain tag, and up to two
// indices. Streams with distinct (tag, a, b) are independent for all
// practical purposes, which lets per-column work run in any order or on
// any number of threads without changing the result.
uint64_t derive_seed(uint64_t root, std::string_view tag, uint64_t a = 0,
                     uint64_t b = 0);

// Deterministic random stream. All randomness in the library flows
// through explicitly derived streams; the C++ standard pins down the
// mt19937_64 output sequence, so results are stable across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  static Rng stream(uint64_t root, std::string_view tag, uint64_t a = 0,
                    uint64_t b = 0) {
    return Rng(derive_seed(root, tag, a, b));
  }

  uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform double in (0, 1), safe as a log/inverse-CDF argument.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Unbiased uniform integer in [0, n).
  uint64_t below(uint64_t n);

  // Zero-mean Laplace draw with the given scale.
  double laplace(double scale);

  // Fisher-Yates shuffle. std::shuffle is implementation-defined, so a
  // fixed algorithm is used to keep outputs portable.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gwv

#endif  // GWV_RNG_HPP_
