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

#ifndef CONFSET_MODELCLIENT_H_
#define CONFSET_MODELCLIENT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "confset/prompts.h"
#include "confset/types.h"

namespace confset {

// Exponential backoff with full jitter: before retry i (0-based) the client
// sleeps a uniform draw from [0, min(max_backoff, base * 2^i)] seconds.
struct RetryPolicy {
  int max_attempts = 3;
  double backoff_base_seconds = 1.0;
  double max_backoff_seconds = 30.0;
};

// A chat-completions endpoint that returns token log-probabilities.
struct EndpointConfig {
  std::string base_url;  // e.g. "https://openrouter.ai/api/v1"
  std::string api_key;   // sent as a bearer token when non-empty
  std::string model_id;
  double timeout_seconds = 60.0;
  int max_concurrency = 4;
  RetryPolicy retry;
  int top_logprobs = 20;
  int max_tokens = 1;
  // Seeds backoff jitter only; never influences emitted records.
  std::uint64_t jitter_seed = 0;
};

inline constexpr std::string_view kDefaultApiKeyVariable = "CONFSET_API_KEY";

// Throws InvalidConfig on a non-positive timeout, concurrency, attempt
// count, or top_logprobs, or an empty base_url/model_id.
void ValidateEndpointConfig(const EndpointConfig& config);

// Empty string when the variable is unset.
std::string ApiKeyFromEnvironment(std::string_view variable);

struct LogprobAnswer {
  LogProbMap logprobs;
  OptionLabel predicted_label;
};

// Request body: the messages, temperature 0, max_tokens, logprobs on, and
// top_logprobs alternatives.
std::string BuildChatRequest(const EndpointConfig& config,
                             std::span<const ChatMessage> messages);

// Reads the decoded answer and the option-letter log-probabilities at the
// answer position (the first generated token that is not whitespace). Letters
// missing from the top alternatives get (min returned log-prob - ln 1e6).
// Throws CapabilityError when the response carries no token log-probs,
// UnparseableAnswer when the decoded text is not exactly one option letter,
// and TransportError when the body is not a chat-completions response.
LogprobAnswer ExtractAnswer(std::string_view response_body,
                            std::span<const OptionLabel> option_letters);

// POSTs to {base_url}/chat/completions with retries. Throws TransportError
// after the final failed attempt or on a non-retryable HTTP status, plus the
// errors of ExtractAnswer.
LogprobAnswer FetchLogprobs(const EndpointConfig& config,
                            std::span<const ChatMessage> messages,
                            std::span<const OptionLabel> option_letters);

// One multiple-choice question to send to a model. Question files are JSON
// lines with keys record_id, dataset_id, question, options (array of strings,
// lettered A, B, ... in order), true_label, and optional image and
// multi_image.
struct Question {
  std::string record_id;
  std::string dataset_id;
  std::string question;
  std::vector<std::string> options;
  OptionLabel true_label = OptionLabel::FromIndex(0);
  std::optional<std::string> image_ref;
  bool multi_image = false;
};

Question ParseQuestionLine(std::string_view line, std::size_t line_number);
std::vector<Question> ParseQuestionFile(const std::filesystem::path& path);

struct CollectFailure {
  std::string record_id;
  std::string error;
};

struct CollectSummary {
  std::size_t written = 0;
  std::vector<CollectFailure> failures;
};

// Sends every question with at most config.max_concurrency requests in
// flight and streams each finished record to `output` as a record line.
// Failed questions are skipped and appended to `failure_log` as
// {"record_id": ..., "error": ...} lines. Output order is completion order.
// Throws IoError if either file cannot be opened.
CollectSummary CollectCorpus(const EndpointConfig& config,
                             std::span<const PromptTemplate> templates,
                             std::span<const Question> questions,
                             const std::filesystem::path& output,
                             const std::filesystem::path& failure_log);

}  // namespace confset

#endif  // CONFSET_MODELCLIENT_H_
