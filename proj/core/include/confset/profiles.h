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

#ifndef CONFSET_PROFILES_H_
#define CONFSET_PROFILES_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "confset/types.h"

namespace confset {

// Expected shape of one benchmark dataset after preprocessing: the option
// letters run from `first` to `last` inclusive.
struct DatasetProfile {
  std::string dataset_id;
  std::string description;
  OptionLabel first = OptionLabel::FromIndex(0);
  OptionLabel last = OptionLabel::FromIndex(kMaxOptions - 1);
  std::optional<std::size_t> expected_count;

  int width() const { return last.index() - first.index() + 1; }
  bool Contains(OptionLabel label) const {
    return first <= label && label <= last;
  }
  std::string RangeString() const;  // "A-F"
};

// AI2D, ScienceQA, MathVision, WorldMedQAV, MMMU, MMMU-Pro.
std::span<const DatasetProfile> BuiltinProfiles();

// Case-insensitive lookup; "-" and "_" are interchangeable.
std::optional<DatasetProfile> FindProfile(std::string_view dataset_id);

}  // namespace confset

#endif  // CONFSET_PROFILES_H_
