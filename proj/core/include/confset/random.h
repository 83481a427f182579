// Copyright 2026 The confset Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CONFSET_RANDOM_H_
#define CONFSET_RANDOM_H_

#include <cstdint>
#include <span>
#include <utility>

namespace confset {

// SplitMix64: 64-bit state, output is the standard mix of the state after
// adding 0x9E3779B97F4A7C15. Every derived quantity below is computed with
// integer arithmetic or a fixed 53-bit mapping, so sequences are identical on
// every platform and standard library. Do not replace with <random>
// distributions; their outputs are implementation-defined.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next();

  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t UniformBelow(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double UniformDouble();

  // Uniform double in (0, 1), never returns zero.
  double UniformOpen();

 private:
  std::uint64_t state_;
};

// Fisher-Yates, walking from the back: for i = n-1 .. 1 swap items[i] with
// items[UniformBelow(i + 1)].
template <typename T>
void Shuffle(std::span<T> items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.UniformBelow(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace confset

#endif  // CONFSET_RANDOM_H_
