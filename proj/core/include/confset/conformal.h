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

#ifndef CONFSET_CONFORMAL_H_
#define CONFSET_CONFORMAL_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "confset/scoring.h"
#include "confset/types.h"

namespace confset {

// Scores of the calibration examples at their true labels.
class CalibrationScores {
 public:
  // Throws InvalidConfig if `scores` is empty or holds a non-finite value.
  CalibrationScores(std::vector<double> scores, ScoreFunction fn);

  std::span<const double> scores() const { return scores_; }
  std::size_t size() const { return scores_.size(); }
  ScoreFunction fn() const { return fn_; }

 private:
  std::vector<double> scores_;
  ScoreFunction fn_;
};

class ConformalThreshold {
 public:
  static ConformalThreshold IncludeAll(double alpha, std::size_t n,
                                       ScoreFunction fn);
  static ConformalThreshold AtScore(double qhat, std::size_t rank,
                                    double alpha, std::size_t n,
                                    ScoreFunction fn);

  // True when the quantile level exceeds one; every label is admitted.
  bool include_all() const { return !qhat_.has_value(); }
  std::optional<double> qhat() const { return qhat_; }
  // 1-based order statistic the threshold was read from; 0 for include-all.
  std::size_t rank() const { return rank_; }
  double alpha() const { return alpha_; }
  std::size_t n() const { return n_; }
  ScoreFunction fn() const { return fn_; }

  bool Admits(double score) const { return !qhat_ || score <= *qhat_; }

 private:
  ConformalThreshold(std::optional<double> qhat, std::size_t rank,
                     double alpha, std::size_t n, ScoreFunction fn)
      : qhat_(qhat), rank_(rank), alpha_(alpha), n_(n), fn_(fn) {}

  std::optional<double> qhat_;
  std::size_t rank_;
  double alpha_;
  std::size_t n_;
  ScoreFunction fn_;
};

// ceil((n + 1)(1 - alpha)). Products within 1e-9 (relative) of an integer
// snap to it: QuantileRank(9, 0.3) is 7.
std::size_t QuantileRank(std::size_t n, double alpha);

// Split-conformal threshold: the k-th smallest score with k = QuantileRank.
// When k > n the result is include-all. Throws InvalidConfig for alpha
// outside (0, 1).
ConformalThreshold Calibrate(const CalibrationScores& cal, double alpha);

// Sorted subset of a distribution's labels.
class PredictionSet {
 public:
  PredictionSet() = default;
  // Sorts and deduplicates.
  explicit PredictionSet(std::vector<OptionLabel> members);

  std::span<const OptionLabel> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool Contains(OptionLabel label) const;
  std::string ToString() const;  // e.g. "{A,C}"

  friend bool operator==(const PredictionSet&, const PredictionSet&) = default;

 private:
  std::vector<OptionLabel> members_;
};

// All labels whose score does not exceed the threshold. May be empty.
PredictionSet PredictSet(const PredictiveDistribution& dist,
                         const ConformalThreshold& threshold);

// Indices into a record list, calibration part first.
struct SplitPartition {
  std::vector<std::size_t> calibration;
  std::vector<std::size_t> test;
};

// Sorts record indices by record_id, shuffles them with SplitMix64(seed), and
// takes the first floor(calibration_fraction * N) as calibration. The result
// does not depend on input order. Throws InvalidConfig when either side would
// be empty.
SplitPartition PartitionRecords(std::span<const EvalRecord> records,
                                const SplitConfig& config);

struct TestOutcome {
  EvalRecord record;
  PredictiveDistribution distribution;
  PredictionSet set;
};

struct SplitResult {
  ConformalThreshold threshold;
  std::vector<TestOutcome> test;
};

// Calibrates on partition.calibration and predicts on partition.test.
// `distributions` must be aligned with `records`.
SplitResult ApplySplit(std::span<const EvalRecord> records,
                       std::span<const PredictiveDistribution> distributions,
                       const SplitPartition& partition, double alpha,
                       ScoreFunction fn);

// Full split-conformal run over one (dataset, model) corpus. Throws
// InvalidConfig for mixed corpora, fewer than two records, or an empty side.
SplitResult RunSplit(std::span<const EvalRecord> records,
                     const SplitConfig& config, ScoreFunction fn);

}  // namespace confset

#endif  // CONFSET_CONFORMAL_H_
