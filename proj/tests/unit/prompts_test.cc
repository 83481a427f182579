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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "confset/errors.h"
#include "confset/profiles.h"
#include "confset/prompts.h"

namespace confset {
namespace {

const std::filesystem::path kGolden =
    std::filesystem::path(CONFSET_GOLDEN_DIR) / "prompts";

std::string ReadGolden(const std::string& name) {
  std::ifstream in(kGolden / name, std::ios::binary);
  EXPECT_TRUE(in) << name;
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<AnswerOption> Options(std::vector<std::string> texts) {
  std::vector<AnswerOption> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.emplace_back(OptionLabel::FromIndex(static_cast<int>(i)), texts[i]);
  }
  return out;
}

TEST(PromptTemplatesTest, MatchGoldenFilesByteForByte) {
  const auto templates = BuiltinTemplates();
  ASSERT_EQ(templates.size(), 6u);
  for (const auto& t : templates) {
    EXPECT_EQ(t.system_message, ReadGolden(t.dataset_id + ".system.txt"))
        << t.dataset_id;
    EXPECT_EQ(t.instruction, ReadGolden(t.dataset_id + ".instruction.txt"))
        << t.dataset_id;
    EXPECT_NE(t.instruction.find(kAnswerDirective), std::string::npos);
    EXPECT_NE(t.instruction.find(kQuestionPlaceholder), std::string::npos);
    EXPECT_NE(t.instruction.find(kOptionsPlaceholder), std::string::npos);
  }
}

TEST(PromptTemplatesTest, OneTemplatePerProfile) {
  for (const auto& p : BuiltinProfiles()) {
    const auto t = FindTemplate(p.dataset_id);
    ASSERT_TRUE(t.has_value()) << p.dataset_id;
    EXPECT_EQ(t->dataset_id, p.dataset_id);
  }
  EXPECT_TRUE(FindTemplate("mmmu_pro").has_value());
  EXPECT_FALSE(FindTemplate("ImageNet").has_value());
}

TEST(RenderPromptTest, ScienceQaSample) {
  const auto msgs = RenderPrompt(
      *FindTemplate("ScienceQA"), "Which of these states is farthest north?",
      Options({"West Virginia", "Louisiana", "Arizona", "Oklahoma"}),
      "https://example.org/map.png");
  ASSERT_EQ(msgs.size(), 2u);
  EXPECT_EQ(msgs[0].role, "system");
  EXPECT_EQ(msgs[0].text, ReadGolden("ScienceQA.system.txt"));
  EXPECT_FALSE(msgs[0].image_ref.has_value());
  EXPECT_EQ(msgs[1].role, "user");
  EXPECT_EQ(msgs[1].text, ReadGolden("ScienceQA.rendered.txt"));
  EXPECT_EQ(msgs[1].image_ref, "https://example.org/map.png");
}

TEST(RenderPromptTest, PlaceholdersInsideQuestionAreLeftAlone) {
  const auto msgs = RenderPrompt(*FindTemplate("MMMU"), "What is {OPTIONS}?",
                                 Options({"x", "y"}), std::nullopt);
  EXPECT_NE(msgs[1].text.find("What is {OPTIONS}?\nA. x\nB. y"),
            std::string::npos);
}

TEST(RenderPromptTest, InvalidOptions) {
  const auto t = *FindTemplate("AI2D");
  for (const auto& opts :
       {std::vector<AnswerOption>{},
        std::vector<AnswerOption>{{OptionLabel::FromLetter('A'), "a"},
                                  {OptionLabel::FromLetter('C'), "c"}},
        std::vector<AnswerOption>{{OptionLabel::FromLetter('B'), "b"}}}) {
    try {
      RenderPrompt(t, "q", opts, std::nullopt);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidOptions);
    }
  }
}

TEST(RenderPromptTest, Deterministic) {
  const auto t = *FindTemplate("MMMU-Pro");
  const auto opts = Options({"1", "2", "3", "4", "5", "6", "7", "8", "9", "10"});
  const auto a = RenderPrompt(t, "Pick.", opts, std::nullopt);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(RenderPrompt(t, "Pick.", opts, std::nullopt), a);
  }
  EXPECT_EQ(RenderOptions(opts).substr(0, 8), "A. 1\nB. ");
}

}  // namespace
}  // namespace confset
