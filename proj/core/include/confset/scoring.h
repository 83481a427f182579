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

#ifndef CONFSET_SCORING_H_
#define CONFSET_SCORING_H_

#include <optional>
#include <string_view>
#include <vector>

#include "confset/types.h"

namespace confset {

// Nonconformity score functions. Lower score means more plausible label.
//
//   kLac          1 - p(y)
//   kAps          sum of p(y') over every y' with p(y') >= p(y); ties with y
//                 are included
//   kMarginPaper  p(1) - p(2), the top-two gap. Does not depend on y, so every
//                 prediction set is either empty or full.
//   kMarginLabel  max_{y' != y} p(y') - p(y), in [-1, 1]
enum class ScoreFunction { kLac, kAps, kMarginPaper, kMarginLabel };

// "LAC", "APS", "MARGIN_PAPER", "MARGIN_LABEL".
std::string_view ScoreFunctionName(ScoreFunction fn);
// Accepts the canonical names case-insensitively, plus "MS" and "MARGIN" as
// aliases for MARGIN_LABEL.
std::optional<ScoreFunction> ParseScoreFunction(std::string_view name);

// Each throws UnknownLabel when `y` is not an option of `dist`.
double ScoreLac(const PredictiveDistribution& dist, OptionLabel y);
double ScoreAps(const PredictiveDistribution& dist, OptionLabel y);
// `kind` must be kMarginPaper or kMarginLabel (InvalidConfig otherwise).
double ScoreMargin(const PredictiveDistribution& dist, OptionLabel y,
                   ScoreFunction kind);

double Score(const PredictiveDistribution& dist, OptionLabel y,
             ScoreFunction fn);

// Scores of every option, aligned with dist.labels().
std::vector<double> ScoreAllLabels(const PredictiveDistribution& dist,
                                   ScoreFunction fn);

}  // namespace confset

#endif  // CONFSET_SCORING_H_
