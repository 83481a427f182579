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

#include "confset/modelclient.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>

#include "confset/errors.h"
#include "confset/ingest.h"
#include "confset/random.h"
#include "httplib.h"
#include "json.hpp"

namespace confset {
namespace {

using nlohmann::json;

// ln(1e6): log-prob gap between the least likely returned alternative and a
// letter the endpoint did not return.
constexpr double kMissingLetterGap = 13.815510557964274;

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

// Exact uppercase option letter, whitespace ignored.
std::optional<OptionLabel> LetterToken(std::string_view token,
                                       std::span<const OptionLabel> letters) {
  token = Trim(token);
  if (token.size() != 1) return std::nullopt;
  for (OptionLabel l : letters) {
    if (l.letter() == token[0]) return l;
  }
  return std::nullopt;
}

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;    // request path
};

Endpoint SplitUrl(const std::string& base_url) {
  const auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidConfig,
                "base_url needs a scheme: " + base_url);
  }
  const auto path_start = base_url.find('/', scheme_end + 3);
  Endpoint e;
  e.origin = base_url.substr(0, path_start);
  std::string prefix =
      path_start == std::string::npos ? "" : base_url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  e.path = prefix + "/chat/completions";
  return e;
}

bool Retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

void ValidateEndpointConfig(const EndpointConfig& config) {
  auto fail = [](const std::string& m) {
    throw Error(ErrorCode::kInvalidConfig, m);
  };
  if (config.base_url.empty()) fail("base_url is empty");
  if (config.model_id.empty()) fail("model_id is empty");
  if (!(config.timeout_seconds > 0.0)) fail("timeout must be positive");
  if (config.max_concurrency < 1) fail("max_concurrency must be >= 1");
  if (config.retry.max_attempts < 1) fail("max_attempts must be >= 1");
  if (config.retry.backoff_base_seconds < 0.0 ||
      config.retry.max_backoff_seconds < 0.0) {
    fail("backoff durations must be non-negative");
  }
  if (config.top_logprobs < 1) fail("top_logprobs must be >= 1");
  if (config.max_tokens < 1) fail("max_tokens must be >= 1");
}

std::string ApiKeyFromEnvironment(std::string_view variable) {
  const char* value = std::getenv(std::string(variable).c_str());
  return value ? std::string(value) : std::string();
}

std::string BuildChatRequest(const EndpointConfig& config,
                             std::span<const ChatMessage> messages) {
  nlohmann::ordered_json body;
  body["model"] = config.model_id;
  nlohmann::ordered_json msgs = nlohmann::ordered_json::array();
  for (const ChatMessage& m : messages) {
    nlohmann::ordered_json msg;
    msg["role"] = m.role;
    if (m.image_ref) {
      nlohmann::ordered_json text_part;
      text_part["type"] = "text";
      text_part["text"] = m.text;
      nlohmann::ordered_json image_part;
      image_part["type"] = "image_url";
      image_part["image_url"]["url"] = *m.image_ref;
      msg["content"] = nlohmann::ordered_json::array({text_part, image_part});
    } else {
      msg["content"] = m.text;
    }
    msgs.push_back(std::move(msg));
  }
  body["messages"] = std::move(msgs);
  body["temperature"] = 0;
  body["max_tokens"] = config.max_tokens;
  body["logprobs"] = true;
  body["top_logprobs"] = config.top_logprobs;
  return body.dump();
}

LogprobAnswer ExtractAnswer(std::string_view response_body,
                            std::span<const OptionLabel> option_letters) {
  json doc;
  try {
    doc = json::parse(response_body.begin(), response_body.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kTransportError,
                std::string("response is not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("choices") ||
      !doc["choices"].is_array() || doc["choices"].empty()) {
    throw Error(ErrorCode::kTransportError, "response has no choices");
  }
  const json& choice = doc["choices"][0];

  const json* content = nullptr;
  if (auto lp = choice.find("logprobs"); lp != choice.end() && lp->is_object()) {
    if (auto c = lp->find("content"); c != lp->end() && c->is_array()) {
      content = &*c;
    }
  }
  if (content == nullptr || content->empty()) {
    throw Error(ErrorCode::kCapabilityError,
                "endpoint returned no token log-probabilities");
  }

  std::string decoded;
  if (auto msg = choice.find("message");
      msg != choice.end() && msg->is_object()) {
    if (auto c = msg->find("content"); c != msg->end() && c->is_string()) {
      decoded = c->get<std::string>();
    }
  }
  const auto predicted = LetterToken(decoded, option_letters);
  if (!predicted) {
    throw Error(ErrorCode::kUnparseableAnswer,
                "decoded answer is not a single option letter: \"" + decoded +
                    "\"");
  }

  const json* answer = nullptr;
  for (const json& entry : *content) {
    if (entry.is_object() && entry.contains("token") &&
        entry["token"].is_string() &&
        !Trim(entry["token"].get<std::string>()).empty()) {
      answer = &entry;
      break;
    }
  }
  if (answer == nullptr) {
    throw Error(ErrorCode::kUnparseableAnswer,
                "no non-whitespace token in the log-probabilities");
  }

  LogProbMap found;
  double min_logprob = INFINITY;
  auto consider = [&](const json& alt) {
    if (!alt.is_object() || !alt.contains("token") ||
        !alt.contains("logprob") || !alt["token"].is_string() ||
        !alt["logprob"].is_number()) {
      return;
    }
    const double lp = alt["logprob"].get<double>();
    if (!std::isfinite(lp)) return;
    min_logprob = std::min(min_logprob, lp);
    if (auto label = LetterToken(alt["token"].get<std::string>(),
                                 option_letters)) {
      auto [it, inserted] = found.emplace(*label, lp);
      if (!inserted) it->second = std::max(it->second, lp);
    }
  };
  consider(*answer);
  if (auto top = answer->find("top_logprobs");
      top != answer->end() && top->is_array()) {
    for (const json& alt : *top) consider(alt);
  }
  if (found.empty()) {
    throw Error(ErrorCode::kUnparseableAnswer,
                "no option letter among the answer-position alternatives");
  }

  LogprobAnswer out{{}, *predicted};
  const double floor = min_logprob - kMissingLetterGap;
  for (OptionLabel l : option_letters) {
    auto it = found.find(l);
    out.logprobs[l] = it == found.end() ? floor : it->second;
  }
  return out;
}

LogprobAnswer FetchLogprobs(const EndpointConfig& config,
                            std::span<const ChatMessage> messages,
                            std::span<const OptionLabel> option_letters) {
  ValidateEndpointConfig(config);
  const Endpoint endpoint = SplitUrl(config.base_url);
  const std::string body = BuildChatRequest(config, messages);

  httplib::Client client(endpoint.origin);
  if (!client.is_valid()) {
    throw Error(ErrorCode::kTransportError,
                "cannot use endpoint " + endpoint.origin +
                    " (is TLS support compiled in?)");
  }
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(config.timeout_seconds));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!config.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config.api_key);
  }

  SplitMix64 jitter(config.jitter_seed ^ body.size());
  std::string last_error;
  for (int attempt = 0; attempt < config.retry.max_attempts; ++attempt) {
    if (attempt > 0) {
      const double cap =
          std::min(config.retry.max_backoff_seconds,
                   config.retry.backoff_base_seconds *
                       std::ldexp(1.0, attempt - 1));
      std::this_thread::sleep_for(
          std::chrono::duration<double>(cap * jitter.UniformDouble()));
    }
    auto res = client.Post(endpoint.path, headers, body, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 200 && res->status < 300) {
      return ExtractAnswer(res->body, option_letters);
    }
    last_error = "HTTP " + std::to_string(res->status);
    if (!Retryable(res->status)) {
      throw Error(ErrorCode::kTransportError,
                  last_error + " (not retryable): " + res->body);
    }
  }
  throw Error(ErrorCode::kTransportError,
              last_error + " after " +
                  std::to_string(config.retry.max_attempts) + " attempt(s)");
}

Question ParseQuestionLine(std::string_view line, std::size_t line_number) {
  auto malformed = [&](const std::string& m) -> Error {
    return Error(ErrorCode::kMalformedRecord, m, line_number);
  };
  json obj;
  try {
    obj = json::parse(line.begin(), line.end());
  } catch (const json::exception& e) {
    throw malformed(std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw malformed("line is not a JSON object");
  auto str = [&](const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
      throw malformed(std::string("missing string field ") + key);
    }
    return it->get<std::string>();
  };
  Question q;
  q.record_id = str("record_id");
  q.dataset_id = str("dataset_id");
  q.question = str("question");
  auto opts = obj.find("options");
  if (opts == obj.end() || !opts->is_array() || opts->size() < 2 ||
      opts->size() > static_cast<std::size_t>(kMaxOptions)) {
    throw malformed("options must be an array of 2..10 strings");
  }
  for (const json& o : *opts) {
    if (!o.is_string()) throw malformed("options must be strings");
    q.options.push_back(o.get<std::string>());
  }
  const auto truth = OptionLabel::Parse(str("true_label"));
  if (!truth || truth->index() >= static_cast<int>(q.options.size())) {
    throw malformed("true_label must name one of the options");
  }
  q.true_label = *truth;
  if (auto it = obj.find("image"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) throw malformed("image must be a string");
    q.image_ref = it->get<std::string>();
  }
  if (auto it = obj.find("multi_image"); it != obj.end()) {
    if (!it->is_boolean()) throw malformed("multi_image must be a boolean");
    q.multi_image = it->get<bool>();
  }
  return q;
}

std::vector<Question> ParseQuestionFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<Question> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    out.push_back(ParseQuestionLine(line, line_number));
  }
  return out;
}

CollectSummary CollectCorpus(const EndpointConfig& config,
                             std::span<const PromptTemplate> templates,
                             std::span<const Question> questions,
                             const std::filesystem::path& output,
                             const std::filesystem::path& failure_log) {
  ValidateEndpointConfig(config);
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + output.string());
  std::ofstream failures(failure_log, std::ios::binary | std::ios::trunc);
  if (!failures) {
    throw Error(ErrorCode::kIoError, "cannot write " + failure_log.string());
  }

  CollectSummary summary;
  std::mutex writer;
  std::atomic<std::size_t> next{0};

  auto fail = [&](const Question& q, const std::string& message) {
    nlohmann::ordered_json entry;
    entry["record_id"] = q.record_id;
    entry["error"] = message;
    std::lock_guard<std::mutex> lock(writer);
    failures << entry.dump() << '\n' << std::flush;
    summary.failures.push_back({q.record_id, message});
  };

  auto work = [&]() {
    for (std::size_t i = next++; i < questions.size(); i = next++) {
      const Question& q = questions[i];
      try {
        std::optional<PromptTemplate> tmpl;
        for (const PromptTemplate& t : templates) {
          if (t.dataset_id == q.dataset_id) tmpl = t;
        }
        if (!tmpl) tmpl = FindTemplate(q.dataset_id);
        if (!tmpl) {
          fail(q, "no prompt template for dataset '" + q.dataset_id + "'");
          continue;
        }
        std::vector<AnswerOption> options;
        std::vector<OptionLabel> letters;
        for (std::size_t j = 0; j < q.options.size(); ++j) {
          letters.push_back(OptionLabel::FromIndex(static_cast<int>(j)));
          options.emplace_back(letters.back(), q.options[j]);
        }
        const auto messages =
            RenderPrompt(*tmpl, q.question, options, q.image_ref);
        LogprobAnswer answer = FetchLogprobs(config, messages, letters);

        EvalRecord record;
        record.record_id = q.record_id;
        record.dataset_id = q.dataset_id;
        record.model_id = config.model_id;
        record.logprobs = std::move(answer.logprobs);
        record.true_label = q.true_label;
        record.predicted_label = answer.predicted_label;
        record.multi_image = q.multi_image;
        const std::string line = SerializeRecord(record);

        std::lock_guard<std::mutex> lock(writer);
        out << line << '\n' << std::flush;
        ++summary.written;
      } catch (const std::exception& e) {
        fail(q, e.what());
      }
    }
  };

  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(config.max_concurrency), questions.size());
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();

  if (!out || !failures) {
    throw Error(ErrorCode::kIoError, "write failed: " + output.string());
  }
  return summary;
}

}  // namespace confset
