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

#ifndef CONFSET_PROMPTS_H_
#define CONFSET_PROMPTS_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "confset/types.h"

namespace confset {

inline constexpr std::string_view kQuestionPlaceholder = "{QUESTION}";
inline constexpr std::string_view kOptionsPlaceholder = "{OPTIONS}";
inline constexpr std::string_view kAnswerDirective =
    "Only respond with the option letter";

// Dataset-specific system message plus a zero-shot instruction holding the
// {QUESTION} and {OPTIONS} placeholders.
struct PromptTemplate {
  std::string dataset_id;
  std::string system_message;
  std::string instruction;
};

std::span<const PromptTemplate> BuiltinTemplates();
// Same matching rules as FindProfile.
std::optional<PromptTemplate> FindTemplate(std::string_view dataset_id);

struct ChatMessage {
  std::string role;  // "system" or "user"
  std::string text;
  // Opaque attachment reference (URL or data URI) sent with the user turn.
  std::optional<std::string> image_ref;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

using AnswerOption = std::pair<OptionLabel, std::string>;

// "A. first\nB. second" with no trailing newline.
std::string RenderOptions(std::span<const AnswerOption> options);

// System message followed by the user turn. Placeholders are substituted in a
// single pass, so placeholder text inside the question is left alone. Throws
// InvalidOptions unless the options are non-empty and lettered A, B, C, ...
// in order.
std::vector<ChatMessage> RenderPrompt(const PromptTemplate& tmpl,
                                      std::string_view question,
                                      std::span<const AnswerOption> options,
                                      std::optional<std::string> image_ref);

}  // namespace confset

#endif  // CONFSET_PROMPTS_H_
