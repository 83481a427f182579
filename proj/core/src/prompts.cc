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

#include "confset/prompts.h"

#include <array>
#include <cctype>

#include "confset/errors.h"

namespace confset {
namespace {

std::string Instruction(std::string_view domain, std::string_view letters) {
  std::string out = "I will show you an image along with a multiple-choice ";
  out += domain;
  out += " question.\n";
  out += "Please select the correct answer from the given options.\n";
  out += kAnswerDirective;
  out += " (";
  out += letters;
  out += ").\n";
  out += kQuestionPlaceholder;
  out += '\n';
  out += kOptionsPlaceholder;
  return out;
}

const std::array<PromptTemplate, 6>& Templates() {
  static const std::array<PromptTemplate, 6> kTemplates = {
      PromptTemplate{
          "AI2D",
          "You are a scientific diagram analyzer.\n"
          "- Analyze the diagram carefully\n"
          "- Answer ONLY with the correct option letter (A, B, C, D, E, or F)\n"
          "- Never explain your reasoning\n"
          "- If uncertain, guess from the provided options",
          Instruction("scientific diagram", "A, B, C, D, E, F")},
      PromptTemplate{
          "ScienceQA",
          "You are a science question answerer.\n"
          "- Use the image and question to select ONE correct option\n"
          "- Respond STRICTLY with just A, B, C, D, or E\n"
          "- No explanations or additional text\n"
          "- Must choose from given options",
          Instruction("science", "A, B, C, D, E")},
      PromptTemplate{
          "MathVision",
          "You are a math problem solver.\n"
          "- Analyze the image and question precisely\n"
          "- Output MUST be exactly one letter: A, B, C, D, E, or F\n"
          "- Never show working\n"
          "- Select even if uncertain",
          Instruction("math", "A, B, C, D, E, F")},
      PromptTemplate{
          "WorldMedQAV",
          "You are a medical image diagnostician.\n"
          "- Examine the image and question thoroughly\n"
          "- Respond ONLY with the letter (A-F) of the most likely answer\n"
          "- No disclaimers or explanations\n"
          "- Choose from options even if unsure",
          Instruction("medical image", "A, B, C, D, E, F")},
      PromptTemplate{
          "MMMU",
          "You are a multi-disciplinary expert.\n"
          "- Combine image understanding with question requirements\n"
          "- Output EXACTLY one letter: A, B, C, D, or E\n"
          "- No additional text under any circumstances\n"
          "- Must select from provided options",
          Instruction("multi-disciplinary", "A, B, C, D, E")},
      PromptTemplate{
          "MMMU-Pro",
          "You are a multi-disciplinary expert.\n"
          "- Combine image understanding with question requirements\n"
          "- Output EXACTLY one letter: A, B, C, D, E, F, G, H, I, J\n"
          "- No additional text under any circumstances\n"
          "- Must select from provided options",
          Instruction("multi-disciplinary", "A, B, C, D, E, F, G, H, I, J")},
  };
  return kTemplates;
}

std::string Canonical(std::string_view id) {
  std::string out;
  for (char c : id) {
    if (c == '_') c = '-';
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace

std::span<const PromptTemplate> BuiltinTemplates() { return Templates(); }

std::optional<PromptTemplate> FindTemplate(std::string_view dataset_id) {
  const std::string wanted = Canonical(dataset_id);
  for (const PromptTemplate& t : Templates()) {
    if (Canonical(t.dataset_id) == wanted) return t;
  }
  return std::nullopt;
}

std::string RenderOptions(std::span<const AnswerOption> options) {
  std::string out;
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (i) out += '\n';
    out += options[i].first.letter();
    out += ". ";
    out += options[i].second;
  }
  return out;
}

std::vector<ChatMessage> RenderPrompt(const PromptTemplate& tmpl,
                                      std::string_view question,
                                      std::span<const AnswerOption> options,
                                      std::optional<std::string> image_ref) {
  if (options.empty()) {
    throw Error(ErrorCode::kInvalidOptions, "no answer options");
  }
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (options[i].first.index() != static_cast<int>(i)) {
      throw Error(ErrorCode::kInvalidOptions,
                  "option letters must run A, B, C, ... in order; position " +
                      std::to_string(i + 1) + " is " +
                      options[i].first.str());
    }
  }
  const std::string rendered_options = RenderOptions(options);

  std::string user;
  std::string_view rest = tmpl.instruction;
  while (!rest.empty()) {
    if (rest.starts_with(kQuestionPlaceholder)) {
      user += question;
      rest.remove_prefix(kQuestionPlaceholder.size());
    } else if (rest.starts_with(kOptionsPlaceholder)) {
      user += rendered_options;
      rest.remove_prefix(kOptionsPlaceholder.size());
    } else {
      user += rest.front();
      rest.remove_prefix(1);
    }
  }
  return {ChatMessage{"system", tmpl.system_message, std::nullopt},
          ChatMessage{"user", std::move(user), std::move(image_ref)}};
}

}  // namespace confset
