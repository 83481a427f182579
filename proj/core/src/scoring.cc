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

#include "confset/scoring.h"

#include <algorithm>
#include <cctype>
#include <string>

#include "confset/errors.h"

namespace confset {
namespace {

std::size_t RequireIndex(const PredictiveDistribution& dist, OptionLabel y) {
  auto idx = dist.IndexOf(y);
  if (!idx) {
    throw Error(ErrorCode::kUnknownLabel,
                "label " + y.str() + " is not an option of the distribution");
  }
  return *idx;
}

double ApsAt(const PredictiveDistribution& dist, std::size_t idx) {
  const double py = dist.prob(idx);
  double mass = 0.0;
  for (double p : dist.probs()) {
    if (p >= py) mass += p;
  }
  return std::min(mass, 1.0);
}

double TopTwoGap(const PredictiveDistribution& dist) {
  double first = -1.0;
  double second = -1.0;
  for (double p : dist.probs()) {
    if (p > first) {
      second = first;
      first = p;
    } else if (p > second) {
      second = p;
    }
  }
  return first - second;
}

double LabelMarginAt(const PredictiveDistribution& dist, std::size_t idx) {
  double best_other = -1.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (i != idx) best_other = std::max(best_other, dist.prob(i));
  }
  return best_other - dist.prob(idx);
}

}  // namespace

std::string_view ScoreFunctionName(ScoreFunction fn) {
  switch (fn) {
    case ScoreFunction::kLac:
      return "LAC";
    case ScoreFunction::kAps:
      return "APS";
    case ScoreFunction::kMarginPaper:
      return "MARGIN_PAPER";
    case ScoreFunction::kMarginLabel:
      return "MARGIN_LABEL";
  }
  return "UNKNOWN";
}

std::optional<ScoreFunction> ParseScoreFunction(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  if (upper == "LAC") return ScoreFunction::kLac;
  if (upper == "APS") return ScoreFunction::kAps;
  if (upper == "MARGIN_PAPER") return ScoreFunction::kMarginPaper;
  if (upper == "MARGIN_LABEL" || upper == "MS" || upper == "MARGIN") {
    return ScoreFunction::kMarginLabel;
  }
  return std::nullopt;
}

double ScoreLac(const PredictiveDistribution& dist, OptionLabel y) {
  return 1.0 - dist.prob(RequireIndex(dist, y));
}

double ScoreAps(const PredictiveDistribution& dist, OptionLabel y) {
  return ApsAt(dist, RequireIndex(dist, y));
}

double ScoreMargin(const PredictiveDistribution& dist, OptionLabel y,
                   ScoreFunction kind) {
  const std::size_t idx = RequireIndex(dist, y);
  if (dist.size() < 2) {
    throw Error(ErrorCode::kMalformedRecord,
                "margin needs at least two options");
  }
  switch (kind) {
    case ScoreFunction::kMarginPaper:
      return TopTwoGap(dist);
    case ScoreFunction::kMarginLabel:
      return LabelMarginAt(dist, idx);
    default:
      throw Error(ErrorCode::kInvalidConfig,
                  std::string("not a margin score: ") +
                      std::string(ScoreFunctionName(kind)));
  }
}

double Score(const PredictiveDistribution& dist, OptionLabel y,
             ScoreFunction fn) {
  switch (fn) {
    case ScoreFunction::kLac:
      return ScoreLac(dist, y);
    case ScoreFunction::kAps:
      return ScoreAps(dist, y);
    case ScoreFunction::kMarginPaper:
    case ScoreFunction::kMarginLabel:
      return ScoreMargin(dist, y, fn);
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown score function");
}

std::vector<double> ScoreAllLabels(const PredictiveDistribution& dist,
                                   ScoreFunction fn) {
  std::vector<double> out(dist.size());
  switch (fn) {
    case ScoreFunction::kLac:
      for (std::size_t i = 0; i < dist.size(); ++i) out[i] = 1.0 - dist.prob(i);
      break;
    case ScoreFunction::kAps:
      for (std::size_t i = 0; i < dist.size(); ++i) out[i] = ApsAt(dist, i);
      break;
    case ScoreFunction::kMarginPaper:
      std::fill(out.begin(), out.end(), TopTwoGap(dist));
      break;
    case ScoreFunction::kMarginLabel:
      for (std::size_t i = 0; i < dist.size(); ++i) {
        out[i] = LabelMarginAt(dist, i);
      }
      break;
  }
  return out;
}

}  // namespace confset
