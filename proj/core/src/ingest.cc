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

#include "confset/ingest.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "confset/errors.h"
#include "json.hpp"

namespace confset {
namespace {

using nlohmann::json;

[[noreturn]] void Malformed(std::size_t line, const std::string& message) {
  throw Error(ErrorCode::kMalformedRecord, message, line);
}

OptionLabel StrictLetter(const std::string& token, std::size_t line,
                         const char* field) {
  if (token.size() == 1) {
    const char upper =
        static_cast<char>(std::toupper(static_cast<unsigned char>(token[0])));
    if (upper >= 'A' && upper < 'A' + kMaxOptions) {
      return OptionLabel::FromLetter(upper);
    }
  }
  Malformed(line, std::string(field) + ": expected a single letter A-J, got \"" +
                      token + "\"");
}

const json& Require(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) Malformed(line, std::string("missing field ") + key);
  return *it;
}

std::string RequireString(const json& obj, const char* key, std::size_t line) {
  const json& v = Require(obj, key, line);
  if (!v.is_string()) {
    Malformed(line, std::string("field ") + key + " must be a string");
  }
  return v.get<std::string>();
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
  });
}

}  // namespace

EvalRecord ParseRecordLine(std::string_view line, std::size_t line_number) {
  json obj;
  try {
    obj = json::parse(line.begin(), line.end());
  } catch (const json::exception& e) {
    Malformed(line_number, std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) Malformed(line_number, "line is not a JSON object");

  EvalRecord r;
  r.record_id = RequireString(obj, "record_id", line_number);
  r.dataset_id = RequireString(obj, "dataset_id", line_number);
  r.model_id = RequireString(obj, "model_id", line_number);

  const json& logprobs = Require(obj, "logprobs", line_number);
  if (!logprobs.is_object()) {
    Malformed(line_number, "field logprobs must be an object");
  }
  for (const auto& [key, value] : logprobs.items()) {
    const OptionLabel label = StrictLetter(key, line_number, "logprobs key");
    if (!value.is_number()) {
      Malformed(line_number, "logprobs[" + key + "] must be a number");
    }
    const double v = value.get<double>();
    if (!std::isfinite(v)) {
      Malformed(line_number, "logprobs[" + key + "] is not finite");
    }
    if (!r.logprobs.emplace(label, v).second) {
      Malformed(line_number, "option " + label.str() + " appears twice");
    }
  }
  if (r.logprobs.size() < static_cast<std::size_t>(kMinOptions)) {
    Malformed(line_number, "logprobs needs at least 2 options");
  }

  r.true_label = StrictLetter(RequireString(obj, "true_label", line_number),
                              line_number, "true_label");
  r.predicted_label =
      StrictLetter(RequireString(obj, "predicted_label", line_number),
                   line_number, "predicted_label");
  if (!r.logprobs.contains(r.true_label)) {
    Malformed(line_number,
              "true_label " + r.true_label.str() + " is not in logprobs");
  }
  if (!r.logprobs.contains(r.predicted_label)) {
    Malformed(line_number, "predicted_label " + r.predicted_label.str() +
                               " is not in logprobs");
  }

  if (auto it = obj.find("multi_image"); it != obj.end()) {
    if (!it->is_boolean()) {
      Malformed(line_number, "field multi_image must be a boolean");
    }
    r.multi_image = it->get<bool>();
  }
  return r;
}

std::vector<EvalRecord> ParseRecords(std::istream& in) {
  std::vector<EvalRecord> out;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsBlank(line)) continue;
    EvalRecord r = ParseRecordLine(line, line_number);
    if (!seen.emplace(r.dataset_id, r.model_id, r.record_id).second) {
      throw Error(ErrorCode::kDuplicateRecord,
                  "record_id '" + r.record_id + "' repeats for (" +
                      r.dataset_id + ", " + r.model_id + ")",
                  line_number);
    }
    out.push_back(std::move(r));
  }
  if (in.bad()) throw Error(ErrorCode::kIoError, "read error");
  return out;
}

std::vector<EvalRecord> ParseRecordFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  return ParseRecords(in);
}

std::string SerializeRecord(const EvalRecord& record) {
  nlohmann::ordered_json obj;
  obj["record_id"] = record.record_id;
  obj["dataset_id"] = record.dataset_id;
  obj["model_id"] = record.model_id;
  nlohmann::ordered_json logprobs = nlohmann::ordered_json::object();
  for (const auto& [label, value] : record.logprobs) {
    logprobs[label.str()] = value;
  }
  obj["logprobs"] = std::move(logprobs);
  obj["true_label"] = record.true_label.str();
  obj["predicted_label"] = record.predicted_label.str();
  if (record.multi_image) obj["multi_image"] = true;
  return obj.dump();
}

void WriteRecords(std::ostream& out, std::span<const EvalRecord> records) {
  for (const EvalRecord& r : records) out << SerializeRecord(r) << '\n';
}

void WriteRecordFile(const std::filesystem::path& path,
                     std::span<const EvalRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  WriteRecords(out, records);
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

EvalRecord PadOptions(const EvalRecord& record, const DatasetProfile& profile) {
  double min_value = INFINITY;
  for (const auto& [label, value] : record.logprobs) {
    if (!profile.Contains(label)) {
      throw Error(ErrorCode::kProfileViolation,
                  "record '" + record.record_id + "' has option " +
                      label.str() + " outside " + profile.RangeString());
    }
    min_value = std::min(min_value, value);
  }
  const auto missing = static_cast<std::size_t>(profile.width()) -
                       record.logprobs.size();
  if (missing == 0) return record;

  // Each filler sits ln(1e6 * missing) below the minimum, which caps the
  // combined filler mass at 1e-6 times the smallest existing probability.
  const double filler =
      min_value - std::log(1e6 * static_cast<double>(missing));
  EvalRecord padded = record;
  for (int i = profile.first.index(); i <= profile.last.index(); ++i) {
    padded.logprobs.emplace(OptionLabel::FromIndex(i), filler);
  }
  return padded;
}

std::size_t ValidationReport::ViolationCount() const {
  return range_violations.size() + dataset_mismatches.size() +
         multi_image_exclusions.size() + (count_mismatch ? 1 : 0);
}

std::string ValidationReport::ToText() const {
  std::ostringstream out;
  out << "dataset: " << dataset_id << " (options " << option_range << ")\n";
  out << "records: " << total_records << " total, " << accepted_records
      << " accepted\n";
  out << "expected count: ";
  if (expected_count) {
    out << *expected_count << (count_mismatch ? " (MISMATCH)" : " (ok)");
  } else {
    out << "n/a";
  }
  out << '\n';
  out << "multi-image exclusions: " << multi_image_exclusions.size() << '\n';
  for (const std::string& id : multi_image_exclusions) {
    out << "  excluded " << id << '\n';
  }
  out << "range violations: " << range_violations.size() << '\n';
  for (const std::string& v : range_violations) out << "  " << v << '\n';
  out << "dataset mismatches: " << dataset_mismatches.size() << '\n';
  for (const std::string& v : dataset_mismatches) out << "  " << v << '\n';
  out << "true-label histogram:";
  const int last = option_range.empty() ? kMaxOptions - 1
                                        : option_range.back() - 'A';
  for (int i = 0; i <= last && i < kMaxOptions; ++i) {
    out << ' ' << static_cast<char>('A' + i) << '='
        << true_label_histogram[static_cast<std::size_t>(i)];
  }
  out << '\n';
  out << "violations: " << ViolationCount() << '\n';
  return out.str();
}

ValidationReport ValidateCorpus(std::span<const EvalRecord> records,
                                const DatasetProfile& profile) {
  ValidationReport report;
  report.dataset_id = profile.dataset_id;
  report.option_range = profile.RangeString();
  report.total_records = records.size();
  report.expected_count = profile.expected_count;
  const auto profile_key = FindProfile(profile.dataset_id);

  for (const EvalRecord& r : records) {
    if (r.multi_image) {
      report.multi_image_exclusions.push_back(r.record_id);
      continue;
    }
    bool in_range = true;
    for (const auto& [label, value] : r.logprobs) {
      if (!profile.Contains(label)) {
        report.range_violations.push_back(r.record_id + ": option " +
                                          label.str() + " outside " +
                                          profile.RangeString());
        in_range = false;
        break;
      }
    }
    const auto record_profile = FindProfile(r.dataset_id);
    const bool same_dataset =
        r.dataset_id == profile.dataset_id ||
        (profile_key && record_profile &&
         record_profile->dataset_id == profile_key->dataset_id);
    if (!same_dataset) {
      report.dataset_mismatches.push_back(r.record_id + ": dataset_id '" +
                                          r.dataset_id + "' is not '" +
                                          profile.dataset_id + "'");
    }
    if (!in_range) continue;
    ++report.accepted_records;
    ++report.true_label_histogram[static_cast<std::size_t>(
        r.true_label.index())];
  }
  if (profile.expected_count) {
    report.count_mismatch = report.accepted_records != *profile.expected_count;
  }
  return report;
}

}  // namespace confset
