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

#include "hetqa/triplets.h"

#include <chrono>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "hetqa/errors.h"

namespace hetqa {
namespace {

struct Corpus {
  std::vector<PositivePair> positives;
  std::vector<std::string> pool;
};

Corpus MakeCorpus(size_t positives, size_t pool) {
  Corpus c;
  for (size_t i = 0; i < pool; ++i) c.pool.push_back("doc" + std::to_string(i));
  for (size_t i = 0; i < positives; ++i) {
    c.positives.push_back({"question " + std::to_string(i), c.pool[(i * 7) % pool]});
  }
  return c;
}

std::string Tsv(const std::vector<TrainingTriplet> &t) {
  std::ostringstream out;
  WriteTripletsTsv(t, out);
  return out.str();
}

TEST(TripletsTest, FullScaleRunIsValidAndReproducible) {
  Corpus c = MakeCorpus(9500, 20000);
  auto start = std::chrono::steady_clock::now();
  auto a = GenerateTriplets(c.positives, c.pool, 10, 42);
  auto b = GenerateTriplets(c.positives, c.pool, 10, 42);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(10));
  ASSERT_EQ(a.size(), 95000u);
  EXPECT_EQ(Tsv(a), Tsv(b));
  for (size_t i = 0; i < c.positives.size(); ++i) {
    std::set<std::string> negatives;
    for (size_t j = 0; j < 10; ++j) {
      const TrainingTriplet &t = a[i * 10 + j];
      ASSERT_EQ(t.query, c.positives[i].query);
      ASSERT_EQ(t.positive_id, c.positives[i].positive_id);
      ASSERT_NE(t.negative_id, t.positive_id);
      negatives.insert(t.negative_id);
    }
    ASSERT_EQ(negatives.size(), 10u) << "negatives repeat for query " << i;
  }
}

TEST(TripletsTest, SeedChangesSampling) {
  Corpus c = MakeCorpus(100, 500);
  EXPECT_NE(GenerateTriplets(c.positives, c.pool, 10, 1),
            GenerateTriplets(c.positives, c.pool, 10, 2));
}

TEST(TripletsTest, NegativesComeFromThePool) {
  Corpus c = MakeCorpus(50, 30);
  std::set<std::string> pool(c.pool.begin(), c.pool.end());
  for (const auto &t : GenerateTriplets(c.positives, c.pool, 5, 3)) {
    EXPECT_TRUE(pool.count(t.negative_id));
  }
}

TEST(TripletsTest, SmallestPoolExcludesOnlyThePositive) {
  // With n+1 distinct ids every other id must be drawn exactly once.
  Corpus c = MakeCorpus(20, 11);
  auto t = GenerateTriplets(c.positives, c.pool, 10, 9);
  ASSERT_EQ(t.size(), 200u);
  for (size_t i = 0; i < 20; ++i) {
    std::set<std::string> seen;
    for (size_t j = 0; j < 10; ++j) seen.insert(t[i * 10 + j].negative_id);
    EXPECT_EQ(seen.size(), 10u);
    EXPECT_FALSE(seen.count(c.positives[i].positive_id));
  }
}

TEST(TripletsTest, PoolTooSmallReportsShortfall) {
  Corpus c = MakeCorpus(3, 8);
  try {
    GenerateTriplets(c.positives, c.pool, 10, 0);
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument &e) {
    EXPECT_NE(std::string(e.what()).find("short by 3"), std::string::npos) << e.what();
  }
}

TEST(TripletsTest, UnknownPositiveIsRejected) {
  Corpus c = MakeCorpus(3, 20);
  c.positives.push_back({"q", "elsewhere"});
  EXPECT_THROW(GenerateTriplets(c.positives, c.pool, 10, 0), InvalidArgument);
}

TEST(TripletsTest, TsvRoundTripOfPositives) {
  std::istringstream in("who wrote it?\tdoc1\r\n\nwhere\tdoc2\n");
  auto p = ReadPositivesTsv(in);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].query, "who wrote it?");
  EXPECT_EQ(p[1].positive_id, "doc2");
  std::istringstream bad("no tab here\n");
  EXPECT_THROW(ReadPositivesTsv(bad), InvalidArgument);
  EXPECT_EQ(Tsv({{"a\tb", "p", "n"}}), "a b\tp\tn\n");
}

}  // namespace
}  // namespace hetqa
