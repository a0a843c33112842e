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

#include "hetqa/entity_link.h"

#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "hetqa/errors.h"
#include "hetqa/text_util.h"
#include "test_support.h"

namespace hetqa {
namespace {

TEST(MentionReplyTest, ParsesNumberedMentions) {
  auto m = ParseMentionReply(
      "1. LeBron James is American basketball player (born 1984)\n"
      "2. National Basketball Association is North American professional sports league");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0], (Mention{"LeBron James", "American basketball player (born 1984)"}));
  EXPECT_EQ(m[1].surface, "National Basketball Association");
  EXPECT_EQ(m[1].description, "North American professional sports league");
}

TEST(MentionReplyTest, SplitsAtTheFirstIs) {
  auto m = ParseMentionReply(
      "1. Washington Commanders or Washington Redskins is American football team in the "
      "National Football League");
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].surface, "Washington Commanders or Washington Redskins");
  EXPECT_EQ(m[0].description, "American football team in the National Football League");
}

TEST(MentionReplyTest, FewShotAnswersAllParse) {
  const PromptTemplate &t = PromptLibrary::Builtin().Get(stage::kEntityDetection);
  for (const FewShotBlock &shot : t.few_shot) {
    auto m = ParseMentionReply(shot.assistant);
    EXPECT_FALSE(m.empty()) << shot.assistant;
    for (const auto &mention : m) EXPECT_LE(SplitWords(mention.description).size(), 10u);
  }
}

TEST(MentionReplyTest, MalformedLinesAreSkipped) {
  auto m = ParseMentionReply("Sure! Here they are:\n1. Sparta is city-state in ancient Greece\n"
                             "- Athens\n2.  is nothing\nNone\r\n3) M.O.V.E is a Japanese musical group\r");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].surface, "Sparta");
  EXPECT_EQ(m[1].surface, "M.O.V.E");
  EXPECT_TRUE(ParseMentionReply("None").empty());
}

TEST(MentionReplyTest, DescriptionsNeverExceedTenWords) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    std::string reply;
    int lines = 1 + static_cast<int>(rng() % 4);
    for (int i = 1; i <= lines; ++i) {
      reply += std::to_string(i) + ". Entity" + std::to_string(i) + " is";
      int words = 1 + static_cast<int>(rng() % 25);
      for (int w = 0; w < words; ++w) reply += " w" + std::to_string(w);
      reply += "\n";
    }
    auto m = ParseMentionReply(reply);
    ASSERT_EQ(m.size(), static_cast<size_t>(lines));
    for (const auto &mention : m) {
      auto words = SplitWords(mention.description);
      ASSERT_LE(words.size(), kMaxDescriptionWords);
      ASSERT_EQ(words.front(), "w0");
    }
  }
}

TEST(KbIdTest, Validity) {
  EXPECT_TRUE(IsValidKbId("Q392"));
  EXPECT_FALSE(IsValidKbId("Q"));
  EXPECT_FALSE(IsValidKbId("P412"));
  EXPECT_FALSE(IsValidKbId("Q39a"));
}

TEST(EntitySetTest, DeduplicateKeepsFirstPositionAndBestScore) {
  EntitySet s = Deduplicate({{"Dylan", "Q392", "Bob Dylan", 0.5},
                             {"Japan", "Q17", "Japan", 0.9},
                             {"Bob Dylan", "Q392", "Bob Dylan", 0.8}},
                            EntityMode::kLinkerOnly);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.entities[0].surface, "Bob Dylan");
  EXPECT_EQ(s.entities[0].score, 0.8);
  EXPECT_EQ(s.entities[1].kb_id, "Q17");
  EXPECT_NE(s.Find("Q17"), nullptr);
  EXPECT_EQ(s.Find("Q1"), nullptr);
}

TEST(EntitySetTest, MergeIsAUnionPreferringEnriched) {
  EntitySet base{{{"Japan", "Q17", "Japan", 0.5}, {"Tokyo", "Q1490", "Tokyo", 0.9}},
                 EntityMode::kLinkerOnly};
  EntitySet enriched{{{"Japan", "Q17", "Japan", 0.7}, {"Academy Award", "Q19020", "", 0.8}},
                     EntityMode::kLlmEnriched};
  EntitySet merged = Merge(base, enriched);
  ASSERT_EQ(merged.size(), 3u);
  EXPECT_EQ(merged.mode, EntityMode::kLlmEnriched);
  EXPECT_EQ(merged.entities[0].score, 0.7);
  EXPECT_EQ(merged.entities[1].kb_id, "Q1490");
  EXPECT_EQ(merged.entities[2].kb_id, "Q19020");
  // Every id from either side survives; ids stay unique.
  EXPECT_EQ(Merge(merged, merged).size(), 3u);
  EXPECT_EQ(Merge(EntitySet{}, base).size(), 2u);
}

TEST(EntityModeTest, Names) {
  for (auto mode : {EntityMode::kLinkerOnly, EntityMode::kLlmEnriched, EntityMode::kOracle}) {
    EXPECT_EQ(ParseEntityMode(EntityModeName(mode)), mode);
  }
  EXPECT_THROW(ParseEntityMode("psychic"), InvalidArgument);
}

class LinkerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    shim_.LoadFixture(testing::FixturePath("e2e/shim.json"));
    shim_.Start();
  }
  LlmClient MentionLlm(const std::string &reply) {
    return LlmClient(std::make_shared<MockBackend>(
        std::vector<MockRule>{{"entity_detection", {}, reply}}));
  }
  testing::FixtureShim shim_;
};

constexpr char kOscarQuestion[] = "Who won the Academy Award for best actress in 1952?";

TEST_F(LinkerTest, LinkerAloneMissesAcademyAward) {
  EntitySet s = Link(kOscarQuestion, {}, shim_.At());
  EXPECT_TRUE(s.empty());
  EXPECT_EQ(s.mode, EntityMode::kLinkerOnly);
}

TEST_F(LinkerTest, DescriptionHintRecoversAcademyAward) {
  std::vector<Mention> hints = {{"Academy Award", "annual awards for artistic merit in film"}};
  EntitySet s = Link(kOscarQuestion, hints, shim_.At());
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.entities[0].kb_id, "Q19020");
  EXPECT_EQ(s.mode, EntityMode::kLlmEnriched);
  auto body = nlohmann::json::parse(shim_.Bodies("/link").back());
  EXPECT_EQ(body["text"], std::string(kOscarQuestion) +
                              "; Academy Award is annual awards for artistic merit in film");
}

TEST_F(LinkerTest, EnrichedResolutionMergesBothPasses) {
  LlmClient llm = MentionLlm("1. Academy Award is annual film awards\n2. Japan is country");
  EntityResolution r = ResolveEntities(std::string(kOscarQuestion) + " In Japan?",
                                       EntityMode::kLlmEnriched, {}, llm, shim_.At());
  EXPECT_TRUE(r.failures.empty());
  ASSERT_EQ(r.entities.size(), 2u);
  EXPECT_EQ(r.entities.entities[0].kb_id, "Q17");
  EXPECT_EQ(r.entities.entities[1].kb_id, "Q19020");
  EXPECT_EQ(shim_.Count("/link"), 2);
}

TEST_F(LinkerTest, LinkerOnlyModeSkipsTheLlm) {
  LlmClient llm(std::make_shared<FailingBackend>());
  EntityResolution r =
      ResolveEntities("Is Tokyo the capital of Japan?", EntityMode::kLinkerOnly, {}, llm, shim_.At());
  EXPECT_TRUE(r.failures.empty());
  EXPECT_EQ(r.entities.size(), 2u);
}

TEST_F(LinkerTest, OracleModeMakesNoCalls) {
  LlmClient llm(std::make_shared<FailingBackend>());
  std::vector<LinkedEntity> gold = {{"Bob Dylan", "Q392", "Bob Dylan", 1.0}};
  EntityResolution r = ResolveEntities("anything", EntityMode::kOracle, gold, llm, shim_.At());
  EXPECT_EQ(r.entities.entities, gold);
  EXPECT_EQ(r.entities.mode, EntityMode::kOracle);
  EXPECT_EQ(shim_.Count("/link"), 0);
}

TEST_F(LinkerTest, DetectionFailureFallsBackToLinker) {
  LlmClient llm(std::make_shared<FailingBackend>());
  EntityResolution r = ResolveEntities("What is the voice type of Bob Dylan?",
                                       EntityMode::kLlmEnriched, {}, llm, shim_.At());
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_NE(r.failures[0].find("entity detection"), std::string::npos);
  ASSERT_EQ(r.entities.size(), 1u);
  EXPECT_EQ(r.entities.entities[0].kb_id, "Q392");
}

TEST_F(LinkerTest, InvalidEntitiesInReplyAreDropped) {
  shim_.OverrideRoute("/link", 200, R"({"entities": [
      {"surface": "a", "kb_id": "P1", "score": 0.5},
      {"surface": "b", "kb_id": "Q2", "score": 1.5},
      {"surface": "c", "kb_id": "Q3", "score": 0.4}]})");
  EntitySet s = Link("a b c", {}, shim_.At());
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.entities[0].kb_id, "Q3");
  EXPECT_EQ(s.entities[0].label, "c");
}

TEST_F(LinkerTest, ErrorsAreTyped) {
  shim_.OverrideRoute("/link", 200, "not json");
  EXPECT_THROW(Link("x", {}, shim_.At()), ProtocolError);
  shim_.OverrideRoute("/link", 502, "down");
  EXPECT_THROW(Link("x", {}, shim_.At()), LinkerUnavailable);
  EXPECT_THROW(Link("x", {}, testing::UnreachableConfig().linker, std::chrono::milliseconds(300)),
               LinkerUnavailable);
}

TEST(LinkerOfflineTest, ResolutionDegradesToEmptySet) {
  LlmClient llm(std::make_shared<FailingBackend>());
  EntityResolution r = ResolveEntities("Who is Bob Dylan?", EntityMode::kLlmEnriched, {}, llm,
                                       testing::UnreachableConfig().linker,
                                       std::chrono::milliseconds(300));
  EXPECT_TRUE(r.entities.empty());
  EXPECT_EQ(r.failures.size(), 2u);
}

}  // namespace
}  // namespace hetqa
