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

#include "confset/conformal.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "confset/errors.h"
#include "confset/random.h"

namespace confset {
namespace {

void RequireAlpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "alpha must be in the open interval (0, 1), got " +
                    std::to_string(alpha));
  }
}

void RequireSinglePair(std::span<const EvalRecord> records) {
  for (const EvalRecord& r : records) {
    if (r.dataset_id != records.front().dataset_id ||
        r.model_id != records.front().model_id) {
      throw Error(ErrorCode::kInvalidConfig,
                  "records mix (dataset, model) pairs: (" +
                      records.front().dataset_id + ", " +
                      records.front().model_id + ") and (" + r.dataset_id +
                      ", " + r.model_id + ")");
    }
  }
}

}  // namespace

CalibrationScores::CalibrationScores(std::vector<double> scores,
                                     ScoreFunction fn)
    : scores_(std::move(scores)), fn_(fn) {
  if (scores_.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "no calibration scores");
  }
  for (double s : scores_) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kInvalidConfig, "non-finite calibration score");
    }
  }
}

ConformalThreshold ConformalThreshold::IncludeAll(double alpha, std::size_t n,
                                                  ScoreFunction fn) {
  return ConformalThreshold(std::nullopt, 0, alpha, n, fn);
}

ConformalThreshold ConformalThreshold::AtScore(double qhat, std::size_t rank,
                                               double alpha, std::size_t n,
                                               ScoreFunction fn) {
  return ConformalThreshold(qhat, rank, alpha, n, fn);
}

std::size_t QuantileRank(std::size_t n, double alpha) {
  RequireAlpha(alpha);
  const double x = static_cast<double>(n + 1) * (1.0 - alpha);
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(x));
}

ConformalThreshold Calibrate(const CalibrationScores& cal, double alpha) {
  const std::size_t n = cal.size();
  const std::size_t k = QuantileRank(n, alpha);
  if (k > n) return ConformalThreshold::IncludeAll(alpha, n, cal.fn());
  // k >= 1 because (n + 1)(1 - alpha) > 0.
  std::vector<double> sorted(cal.scores().begin(), cal.scores().end());
  auto kth = sorted.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(sorted.begin(), kth, sorted.end());
  return ConformalThreshold::AtScore(*kth, k, alpha, n, cal.fn());
}

PredictionSet::PredictionSet(std::vector<OptionLabel> members)
    : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()),
                 members_.end());
}

bool PredictionSet::Contains(OptionLabel label) const {
  return std::binary_search(members_.begin(), members_.end(), label);
}

std::string PredictionSet::ToString() const {
  std::string out = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) out += ',';
    out += members_[i].letter();
  }
  out += '}';
  return out;
}

PredictionSet PredictSet(const PredictiveDistribution& dist,
                         const ConformalThreshold& threshold) {
  std::vector<OptionLabel> members;
  if (threshold.include_all()) {
    members.assign(dist.labels().begin(), dist.labels().end());
    return PredictionSet(std::move(members));
  }
  const std::vector<double> scores = ScoreAllLabels(dist, threshold.fn());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (threshold.Admits(scores[i])) members.push_back(dist.label(i));
  }
  return PredictionSet(std::move(members));
}

SplitPartition PartitionRecords(std::span<const EvalRecord> records,
                                const SplitConfig& config) {
  ValidateSplitConfig(config);
  const std::size_t total = records.size();
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return records[a].record_id < records[b].record_id;
                   });
  SplitMix64 rng(config.seed);
  Shuffle(std::span<std::size_t>(order), rng);

  const auto n_cal = static_cast<std::size_t>(
      std::floor(config.calibration_fraction * static_cast<double>(total)));
  if (n_cal < 1 || n_cal >= total) {
    throw Error(ErrorCode::kInvalidConfig,
                "split of " + std::to_string(total) +
                    " records at calibration_fraction " +
                    std::to_string(config.calibration_fraction) +
                    " leaves an empty calibration or test side");
  }
  SplitPartition out;
  out.calibration.assign(order.begin(),
                         order.begin() + static_cast<std::ptrdiff_t>(n_cal));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_cal),
                  order.end());
  return out;
}

SplitResult ApplySplit(std::span<const EvalRecord> records,
                       std::span<const PredictiveDistribution> distributions,
                       const SplitPartition& partition, double alpha,
                       ScoreFunction fn) {
  if (records.size() != distributions.size()) {
    throw Error(ErrorCode::kInvalidConfig,
                "records and distributions differ in length");
  }
  std::vector<double> cal_scores;
  cal_scores.reserve(partition.calibration.size());
  for (std::size_t idx : partition.calibration) {
    cal_scores.push_back(
        Score(distributions[idx], records[idx].true_label, fn));
  }
  SplitResult result{
      Calibrate(CalibrationScores(std::move(cal_scores), fn), alpha), {}};
  result.test.reserve(partition.test.size());
  for (std::size_t idx : partition.test) {
    result.test.push_back(TestOutcome{
        records[idx], distributions[idx],
        PredictSet(distributions[idx], result.threshold)});
  }
  return result;
}

SplitResult RunSplit(std::span<const EvalRecord> records,
                     const SplitConfig& config, ScoreFunction fn) {
  ValidateSplitConfig(config);
  if (records.size() < 2) {
    throw Error(ErrorCode::kInvalidConfig,
                "a split needs at least 2 records, got " +
                    std::to_string(records.size()));
  }
  RequireSinglePair(records);
  std::vector<PredictiveDistribution> dists;
  dists.reserve(records.size());
  for (const EvalRecord& r : records) {
    ValidateRecord(r);
    dists.push_back(Normalize(r.logprobs));
  }
  return ApplySplit(records, dists, PartitionRecords(records, config),
                    config.alpha, fn);
}

}  // namespace confset
