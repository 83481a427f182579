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

#ifndef CONFSET_SYNTH_H_
#define CONFSET_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "confset/types.h"

namespace confset {

// Synthetic corpora with a known ground truth. For each record the generator
// draws p ~ Dirichlet(concentration, ..., concentration) over K options,
// samples the true label from p, and emits log(p) / temperature as the
// scores. The predicted label is the argmax of p. With temperature 1 the
// scores are perfectly calibrated; temperature > 1 flattens them and
// temperature < 1 sharpens them, while the labels still follow p.
//
// All randomness comes from SplitMix64(seed), consumed per record as K gamma
// variates then one uniform. Two configs differing only in temperature
// therefore share probabilities and labels.
struct SynthConfig {
  std::size_t n = 1000;
  int k = 4;
  std::uint64_t seed = 0;
  double temperature = 1.0;
  double concentration = 1.0;
  std::string dataset_id = "synthetic";
  std::string model_id = "synth";
};

// Throws InvalidConfig unless n >= 2, 2 <= k <= 10, temperature > 0 and
// concentration > 0.
void ValidateSynthConfig(const SynthConfig& config);

std::vector<EvalRecord> GenerateSynthetic(const SynthConfig& config);

}  // namespace confset

#endif  // CONFSET_SYNTH_H_
