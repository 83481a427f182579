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

#include "confset/synth.h"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>

#include "confset/errors.h"
#include "confset/random.h"

namespace confset {
namespace {

// Marsaglia polar method.
double StandardNormal(SplitMix64& rng) {
  for (;;) {
    const double u = 2.0 * rng.UniformDouble() - 1.0;
    const double v = 2.0 * rng.UniformDouble() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

// Marsaglia-Tsang for shape >= 1; shape < 1 boosts through shape + 1.
double Gamma(double shape, SplitMix64& rng) {
  if (shape < 1.0) {
    const double g = Gamma(shape + 1.0, rng);
    return g * std::pow(rng.UniformOpen(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = StandardNormal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.UniformOpen();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::string RecordId(std::size_t index, std::size_t total) {
  int width = 6;
  for (std::size_t t = total; t >= 1000000; t /= 10) ++width;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "synth-%0*zu", width, index);
  return buf;
}

}  // namespace

void ValidateSynthConfig(const SynthConfig& config) {
  if (config.n < 2) {
    throw Error(ErrorCode::kInvalidConfig, "n must be at least 2");
  }
  if (config.k < kMinOptions || config.k > kMaxOptions) {
    throw Error(ErrorCode::kInvalidConfig,
                "k must be in [2, 10], got " + std::to_string(config.k));
  }
  if (!(config.temperature > 0.0) || !std::isfinite(config.temperature)) {
    throw Error(ErrorCode::kInvalidConfig, "temperature must be positive");
  }
  if (!(config.concentration > 0.0) || !std::isfinite(config.concentration)) {
    throw Error(ErrorCode::kInvalidConfig, "concentration must be positive");
  }
}

std::vector<EvalRecord> GenerateSynthetic(const SynthConfig& config) {
  ValidateSynthConfig(config);
  SplitMix64 rng(config.seed);
  const auto k = static_cast<std::size_t>(config.k);
  std::vector<double> weights(k);
  std::vector<EvalRecord> records;
  records.reserve(config.n);

  for (std::size_t i = 0; i < config.n; ++i) {
    double total = 0.0;
    for (double& w : weights) {
      w = std::max(Gamma(config.concentration, rng), DBL_MIN);
      total += w;
    }
    const double u = rng.UniformDouble() * total;
    std::size_t truth = k - 1;
    double cumulative = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      cumulative += weights[j];
      if (u < cumulative) {
        truth = j;
        break;
      }
    }
    const auto best = static_cast<std::size_t>(
        std::max_element(weights.begin(), weights.end()) - weights.begin());

    EvalRecord r;
    r.record_id = RecordId(i, config.n);
    r.dataset_id = config.dataset_id;
    r.model_id = config.model_id;
    const double log_total = std::log(total);
    for (std::size_t j = 0; j < k; ++j) {
      r.logprobs[OptionLabel::FromIndex(static_cast<int>(j))] =
          (std::log(weights[j]) - log_total) / config.temperature;
    }
    r.true_label = OptionLabel::FromIndex(static_cast<int>(truth));
    r.predicted_label = OptionLabel::FromIndex(static_cast<int>(best));
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace confset
