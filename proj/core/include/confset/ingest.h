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

#ifndef CONFSET_INGEST_H_
#define CONFSET_INGEST_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "confset/profiles.h"
#include "confset/types.h"

namespace confset {

// Record files are UTF-8, one JSON object per line:
//
//   {"record_id": "q-0001", "dataset_id": "AI2D", "model_id": "m",
//    "logprobs": {"A": -0.1, "B": -2.4}, "true_label": "A",
//    "predicted_label": "A", "multi_image": false}
//
// `multi_image` is optional and defaults to false. Letters are upper-cased on
// parse. Unknown keys are ignored. Blank lines are skipped; CR before LF is
// stripped.

// Parses one line. Throws MalformedRecord tagged with `line_number`.
EvalRecord ParseRecordLine(std::string_view line, std::size_t line_number);

// Streams records in input order. Throws MalformedRecord (with line) or
// DuplicateRecord when a record_id repeats within one (dataset, model).
std::vector<EvalRecord> ParseRecords(std::istream& in);
// Throws IoError if the file cannot be opened.
std::vector<EvalRecord> ParseRecordFile(const std::filesystem::path& path);

// Single line, no trailing newline, fixed key order. Numbers are written with
// the shortest representation that round-trips.
std::string SerializeRecord(const EvalRecord& record);
void WriteRecords(std::ostream& out, std::span<const EvalRecord> records);
void WriteRecordFile(const std::filesystem::path& path,
                     std::span<const EvalRecord> records);

// Fills every letter of the profile range the record lacks with a score far
// below the record's minimum, so the filler mass after softmax stays under
// 1e-6 in total. Existing options are untouched. Throws ProfileViolation when
// the record has an option outside the range.
EvalRecord PadOptions(const EvalRecord& record, const DatasetProfile& profile);

struct ValidationReport {
  std::string dataset_id;
  std::string option_range;
  std::size_t total_records = 0;
  // Records that are neither excluded nor out of range.
  std::size_t accepted_records = 0;
  std::optional<std::size_t> expected_count;
  bool count_mismatch = false;
  std::vector<std::string> range_violations;
  std::vector<std::string> dataset_mismatches;
  // record_ids flagged multi_image.
  std::vector<std::string> multi_image_exclusions;
  // True-label frequencies over accepted records, indexed by letter.
  std::array<std::size_t, kMaxOptions> true_label_histogram{};

  std::size_t ViolationCount() const;
  bool ok() const { return ViolationCount() == 0; }
  std::string ToText() const;
};

ValidationReport ValidateCorpus(std::span<const EvalRecord> records,
                                const DatasetProfile& profile);

}  // namespace confset

#endif  // CONFSET_INGEST_H_
