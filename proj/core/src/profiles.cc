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

#include "confset/profiles.h"

#include <array>
#include <cctype>

namespace confset {
namespace {

std::string Canonical(std::string_view id) {
  std::string out;
  out.reserve(id.size());
  for (char c : id) {
    if (c == '_') c = '-';
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

DatasetProfile Make(std::string id, std::string description, char last,
                    std::size_t count) {
  return DatasetProfile{std::move(id), std::move(description),
                        OptionLabel::FromLetter('A'),
                        OptionLabel::FromLetter(last), count};
}

const std::array<DatasetProfile, 6>& Profiles() {
  static const std::array<DatasetProfile, 6> kProfiles = {
      Make("AI2D",
           "Diagram-based science questions with multiple-choice answers",
           'F', 3090),
      Make("ScienceQA",
           "Multimodal science questions combining text and images", 'E',
           2020),
      Make("MathVision",
           "Visual math reasoning tasks requiring diagram understanding", 'F',
           1530),
      Make("WorldMedQAV",
           "Multimodal medical questions with real-world clinical context",
           'F', 1140),
      Make("MMMU",
           "Multidisciplinary multimodal questions across diverse subjects",
           'E', 794),
      Make("MMMU-Pro",
           "Professional-level multimodal questions spanning 30+ domains", 'J',
           1210),
  };
  return kProfiles;
}

}  // namespace

std::string DatasetProfile::RangeString() const {
  return std::string{first.letter(), '-', last.letter()};
}

std::span<const DatasetProfile> BuiltinProfiles() { return Profiles(); }

std::optional<DatasetProfile> FindProfile(std::string_view dataset_id) {
  const std::string wanted = Canonical(dataset_id);
  for (const DatasetProfile& p : Profiles()) {
    if (Canonical(p.dataset_id) == wanted) return p;
  }
  return std::nullopt;
}

}  // namespace confset
