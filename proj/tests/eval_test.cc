// Copyright 2026 The HetQA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hetqa/eval.h"

#include <chrono>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "hetqa/errors.h"
#include "hetqa/text_util.h"
#include "test_support.h"

namespace hetqa {
namespace {

TEST(MetricsTest, FormatCases) {
  for (const auto &c : testing::FormatCases()) {
    EXPECT_EQ(ExactMatch(c.gold, c.prediction), c.exact) << c.gold << " | " << c.prediction;
    EXPECT_EQ(SupersetMatch(c.gold, c.prediction), c.superset) << c.gold << " | " << c.prediction;
  }
}

TEST(MetricsTest, ExactMatchImpliesSupersetOnRandomPairs) {
  auto start = std::chrono::steady_clock::now();
  size_t exact = 0;
  size_t superset_only = 0;
  for (const auto &[gold, prediction] : testing::RandomAnswerPairs(10000, 17)) {
    bool em = ExactMatch(gold, prediction);
    bool sup = SupersetMatch(gold, prediction);
    ASSERT_TRUE(!em || sup) << gold << " | " << prediction;
    exact += em;
    superset_only += sup && !em;
  }
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
  // The generator must exercise both sides of the implication.
  EXPECT_GT(exact, 500u);
  EXPECT_GT(superset_only, 500u);
}

TEST(MetricsTest, ExactMatchIsSymmetricAndReflexive) {
  for (const auto &[gold, prediction] : testing::RandomAnswerPairs(2000, 3)) {
    ASSERT_EQ(ExactMatch(gold, prediction), ExactMatch(prediction, gold));
    ASSERT_TRUE(ExactMatch(gold, gold));
  }
}

TEST(MetricsTest, EmptyGoldIsSupersetOfAnything) {
  EXPECT_TRUE(SupersetMatch("", "whatever"));
  EXPECT_FALSE(ExactMatch("", "whatever"));
}

TEST(JudgeTest, ParsesVerdicts) {
  EXPECT_EQ(ParseJudgeVerdict("Yes"), true);
  EXPECT_EQ(ParseJudgeVerdict(" yes, they match"), true);
  EXPECT_EQ(ParseJudgeVerdict("No."), false);
  EXPECT_EQ(ParseJudgeVerdict("Nope"), std::nullopt);
  EXPECT_EQ(ParseJudgeVerdict("Yesterday"), std::nullopt);
  EXPECT_EQ(ParseJudgeVerdict(""), std::nullopt);
}

TEST(JudgeTest, MockJudgeAcceptsParaphrase) {
  LlmClient llm(std::make_shared<MockBackend>());
  const auto &c = testing::FormatCases()[4];
  EXPECT_TRUE(JudgeMatch(c.question, c.gold, c.prediction, llm));
  EXPECT_FALSE(JudgeMatch("q", "Goodbye Yellow Brick Road", "Empty Sky", llm));
  LlmClient unclear(std::make_shared<MockBackend>(std::vector<MockRule>{{"judge", {}, "Maybe"}}));
  EXPECT_FALSE(JudgeMatch("q", "a", "a", unclear));
}

TEST(CategorizeTest, PlantedFailures) {
  auto failures = testing::PlantedFailures();
  ASSERT_EQ(failures.size(), 40u);
  ErrorBreakdown b = CategorizeErrors(failures);
  EXPECT_EQ(b.total_errors, 40u);
  EXPECT_EQ(b.gold_in_kb, 5u);
  EXPECT_EQ(b.gold_in_text, 9u);
  EXPECT_EQ(b.gold_in_tables, 7u);
  EXPECT_EQ(b.gold_in_evidence, 18u);
}

TEST(CategorizeTest, KbCountsOnlyTheAnswerSpan) {
  Prediction p;
  p.question = "Is Vienna the capital of Austria?";
  p.gold = "Vienna";
  p.evidences = {{EvidenceKind::kKb,
                  "Wikidata says the answer to \"Is Vienna the capital of Austria?\" is: ."}};
  EXPECT_EQ(CategorizeErrors({p}).gold_in_evidence, 0u);
  p.evidences[0].second = "Wikidata says the answer to \"Is it?\" is: Vienna, Graz.";
  EXPECT_EQ(CategorizeErrors({p}).gold_in_kb, 1u);
}

TEST(CategorizeTest, CountsAreOrderIndependent) {
  auto failures = testing::PlantedFailures();
  std::reverse(failures.begin(), failures.end());
  EXPECT_EQ(CategorizeErrors(failures), CategorizeErrors(testing::PlantedFailures()));
}

TEST(ReportTest, JudgeDecidesFailuresWhenPresent) {
  Prediction hit{"q1", "Kurt Cobain", "Kurt Cobain and Krist Novoselic", {}};
  Prediction miss{"q2", "Empty Sky", "Goodbye", {{EvidenceKind::kText, "Empty Sky was first."}}};
  std::vector<ExampleScore> scores = {{false, true, std::nullopt}, {false, false, true}};
  MetricReport r = BuildReport("Text", {hit, miss}, scores);
  EXPECT_EQ(r.n, 2u);
  EXPECT_EQ(r.judged, 1u);
  EXPECT_DOUBLE_EQ(r.em_rate, 0.0);
  EXPECT_DOUBLE_EQ(r.superset_rate, 0.5);
  ASSERT_TRUE(r.judge_rate.has_value());
  EXPECT_DOUBLE_EQ(*r.judge_rate, 1.0);
  EXPECT_EQ(r.errors.total_errors, 0u);

  scores[1].judge = false;
  r = BuildReport("Text", {hit, miss}, scores);
  EXPECT_EQ(r.errors.total_errors, 1u);
  EXPECT_EQ(r.errors.gold_in_text, 1u);
  EXPECT_THROW(BuildReport("x", {hit}, scores), InvalidArgument);
}

TEST(ReportTest, TextAndJsonRendering) {
  MetricReport r;
  r.config = "Text+Tables+KB";
  r.n = 40;
  r.em_rate = 0.25;
  r.superset_rate = 0.5;
  r.errors = CategorizeErrors(testing::PlantedFailures());
  std::string text = ReportToText({r});
  EXPECT_NE(text.find("Exact Match"), std::string::npos);
  EXPECT_NE(text.find("Superset"), std::string::npos);
  EXPECT_NE(text.find("Judge Match"), std::string::npos);
  EXPECT_NE(text.find("Text+Tables+KB"), std::string::npos);
  EXPECT_NE(text.find("Gold in Evidence"), std::string::npos);
  auto j = nlohmann::json::parse(ReportToJson({r}));
  EXPECT_EQ(j["reports"][0]["errors"]["gold_in_evidence"], 18);
  EXPECT_TRUE(j["reports"][0]["judge_rate"].is_null());
}

TEST(PredictionsJsonTest, ArrayOfIndentedObjectsRoundTrips) {
  auto failures = testing::PlantedFailures();
  failures.resize(3);
  std::string text = PredictionsToJson(failures);
  EXPECT_EQ(text.rfind("[\n    {\n        \"question\": ", 0), 0u) << text.substr(0, 60);
  auto j = nlohmann::json::parse(text);
  ASSERT_EQ(j.size(), 3u);
  for (size_t i = 0; i < 3; ++i) EXPECT_EQ(ParsePrediction(j[i].dump()), failures[i]);
  EXPECT_EQ(PredictionsToJson({}), "[]\n");
}

TEST(DatasetTest, ReadsJsonLines) {
  auto ds = LoadDataset(testing::FixturePath("e2e/dataset.jsonl"));
  ASSERT_EQ(ds.size(), 20u);
  EXPECT_EQ(ds[0].id, "q01");
  EXPECT_EQ(ds[0].gold_sources, (std::vector<std::string>{"TEXT"}));
}

TEST(DatasetTest, ErrorsNameTheLine) {
  std::istringstream in(
      "{\"question\": \"a?\", \"gold\": \"b\", \"entities\": [{\"kb_id\": \"Q1\"}]}\n\n"
      "{\"question\": \"c?\"}\n");
  try {
    ReadDataset(in, "dev.jsonl");
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument &e) {
    EXPECT_EQ(std::string(e.what()).rfind("dev.jsonl:3: ", 0), 0u) << e.what();
  }
  std::istringstream bad_id("{\"question\": \"a?\", \"gold\": \"b\", \"entities\": [{\"kb_id\": \"P1\"}]}");
  EXPECT_THROW(ReadDataset(bad_id), InvalidArgument);
  std::istringstream empty_gold("{\"question\": \"a?\", \"gold\": \" \"}");
  EXPECT_THROW(ReadDataset(empty_gold), InvalidArgument);
  EXPECT_THROW(LoadDataset("/nonexistent.jsonl"), InvalidArgument);
}

}  // namespace
}  // namespace hetqa
