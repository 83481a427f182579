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

#ifndef CONFSET_TYPES_H_
#define CONFSET_TYPES_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace confset {

inline constexpr int kMaxOptions = 10;
inline constexpr int kMinOptions = 2;

// Probabilities must sum to one within this absolute tolerance.
inline constexpr double kDistributionSumTolerance = 1e-9;

// A multiple-choice answer letter, A through J.
class OptionLabel {
 public:
  // Throws MalformedRecord unless `letter` is one of 'A'..'J'.
  static OptionLabel FromLetter(char letter);
  // Throws MalformedRecord unless 0 <= index < kMaxOptions.
  static OptionLabel FromIndex(int index);
  // Accepts a single letter in either case, surrounding whitespace ignored.
  static std::optional<OptionLabel> Parse(std::string_view token);

  char letter() const { return static_cast<char>('A' + index_); }
  int index() const { return index_; }
  std::string str() const { return std::string(1, letter()); }

  friend auto operator<=>(OptionLabel, OptionLabel) = default;

 private:
  explicit constexpr OptionLabel(std::uint8_t index) : index_(index) {}
  std::uint8_t index_;
};

// Raw per-option scores: log-probabilities, logits, or anything whose softmax
// is meaningful. Ordered by label.
using LogProbMap = std::map<OptionLabel, double>;

// Normalized probability vector over a sorted set of unique labels. Immutable.
class PredictiveDistribution {
 public:
  // Validates every invariant; throws MalformedRecord on violation.
  PredictiveDistribution(std::vector<OptionLabel> labels,
                         std::vector<double> probs);

  std::size_t size() const { return labels_.size(); }
  std::span<const OptionLabel> labels() const { return labels_; }
  std::span<const double> probs() const { return probs_; }
  OptionLabel label(std::size_t i) const { return labels_[i]; }
  double prob(std::size_t i) const { return probs_[i]; }

  std::optional<std::size_t> IndexOf(OptionLabel label) const;
  // Throws UnknownLabel when `label` is not an option.
  double ProbOf(OptionLabel label) const;

 private:
  std::vector<OptionLabel> labels_;
  std::vector<double> probs_;
};

struct EvalRecord {
  std::string record_id;
  std::string dataset_id;
  std::string model_id;
  LogProbMap logprobs;
  OptionLabel true_label = OptionLabel::FromIndex(0);
  OptionLabel predicted_label = OptionLabel::FromIndex(0);
  // Set by the producer for questions with more than one input image. Such
  // records are rejected by corpus validation.
  bool multi_image = false;

  friend bool operator==(const EvalRecord&, const EvalRecord&) = default;
};

// Throws MalformedRecord if the record breaks its invariants.
void ValidateRecord(const EvalRecord& record);

struct SplitConfig {
  double alpha = 0.1;
  double calibration_fraction = 0.5;
  std::uint64_t seed = 0;
};

// Throws InvalidConfig when alpha or calibration_fraction is outside (0, 1).
void ValidateSplitConfig(const SplitConfig& config);

// Softmax of the raw values over exactly the given options. Max-subtracted, so
// large magnitudes do not overflow. Throws MalformedRecord on fewer than two
// options or a non-finite value.
PredictiveDistribution Normalize(const LogProbMap& logprobs);

// Label of the largest probability; ties go to the alphabetically first label.
OptionLabel Argmax(const PredictiveDistribution& dist);

}  // namespace confset

#endif  // CONFSET_TYPES_H_
