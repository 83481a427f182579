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

#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "confset/errors.h"
#include "confset/synth.h"
#include "confset/types.h"

namespace confset {
namespace {

TEST(SynthTest, ShapeAndIds) {
  SynthConfig cfg;
  cfg.n = 12;
  cfg.k = 7;
  cfg.dataset_id = "ds";
  cfg.model_id = "mm";
  const auto records = GenerateSynthetic(cfg);
  ASSERT_EQ(records.size(), 12u);
  EXPECT_EQ(records[0].record_id, "synth-000000");
  EXPECT_EQ(records[11].record_id, "synth-000011");
  for (const auto& r : records) {
    EXPECT_NO_THROW(ValidateRecord(r));
    EXPECT_EQ(r.logprobs.size(), 7u);
    EXPECT_EQ(r.dataset_id, "ds");
    EXPECT_EQ(r.model_id, "mm");
    EXPECT_EQ(r.predicted_label, Argmax(Normalize(r.logprobs)));
  }
}

TEST(SynthTest, DeterministicPerSeed) {
  SynthConfig cfg;
  cfg.n = 100;
  EXPECT_EQ(GenerateSynthetic(cfg), GenerateSynthetic(cfg));
  SynthConfig other = cfg;
  other.seed = 1;
  EXPECT_NE(GenerateSynthetic(cfg), GenerateSynthetic(other));
}

TEST(SynthTest, TemperatureOnlyRescalesScores) {
  SynthConfig cfg;
  cfg.n = 500;
  SynthConfig hot = cfg;
  hot.temperature = 3.0;
  const auto a = GenerateSynthetic(cfg);
  const auto b = GenerateSynthetic(hot);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].true_label, b[i].true_label);
    ASSERT_EQ(a[i].predicted_label, b[i].predicted_label);
    for (const auto& [label, lp] : a[i].logprobs) {
      ASSERT_NEAR(b[i].logprobs.at(label) * 3.0, lp, 1e-12 * std::abs(lp) + 1e-15);
    }
  }
}

// Under Dirichlet(1, ..., 1) the expected top probability is H_K / K, and a
// calibrated argmax is right with exactly that probability.
TEST(SynthTest, FlatDirichletAccuracyMatchesExpectedTopProbability) {
  for (int k : {2, 4, 10}) {
    SynthConfig cfg;
    cfg.n = 40000;
    cfg.k = k;
    cfg.seed = 17;
    const auto records = GenerateSynthetic(cfg);
    double harmonic = 0.0;
    for (int i = 1; i <= k; ++i) harmonic += 1.0 / i;
    const double expected = harmonic / k;
    double correct = 0.0;
    double top = 0.0;
    for (const auto& r : records) {
      correct += r.predicted_label == r.true_label;
      const auto d = Normalize(r.logprobs);
      top += d.ProbOf(r.predicted_label);
    }
    const double sd = std::sqrt(expected * (1 - expected) / cfg.n);
    EXPECT_NEAR(correct / cfg.n, expected, 5 * sd) << k;
    EXPECT_NEAR(top / cfg.n, expected, 5 * sd) << k;
  }
}

TEST(SynthTest, ConcentrationMovesTowardUniform) {
  SynthConfig cfg;
  cfg.n = 5000;
  cfg.k = 4;
  cfg.concentration = 50.0;
  double top = 0.0;
  for (const auto& r : GenerateSynthetic(cfg)) {
    top += Normalize(r.logprobs).ProbOf(r.predicted_label);
  }
  EXPECT_LT(top / cfg.n, 0.35);
  EXPECT_GT(top / cfg.n, 0.25);
}

TEST(SynthTest, InvalidConfig) {
  for (auto mutate : {+[](SynthConfig& c) { c.n = 1; },
                      +[](SynthConfig& c) { c.k = 1; },
                      +[](SynthConfig& c) { c.k = 11; },
                      +[](SynthConfig& c) { c.temperature = 0; },
                      +[](SynthConfig& c) { c.concentration = -1; }}) {
    SynthConfig cfg;
    mutate(cfg);
    try {
      GenerateSynthetic(cfg);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
    }
  }
}

}  // namespace
}  // namespace confset
