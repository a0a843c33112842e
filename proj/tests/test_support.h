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

// Helpers shared by the unit, end-to-end and acceptance tests.

#ifndef HETQA_TESTS_TEST_SUPPORT_H_
#define HETQA_TESTS_TEST_SUPPORT_H_

#include <memory>
#include <string>
#include <vector>

#include "fixture_shim.h"
#include "hetqa/eval.h"
#include "hetqa/index.h"
#include "hetqa/pipeline.h"

namespace hetqa::testing {

// Absolute path of a file under tests/fixtures.
std::string FixturePath(const std::string &relative);
std::string ReadFile(const std::string &path);
void WriteFile(const std::string &path, const std::string &content);

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;
  const std::string &path() const { return path_; }
  std::string File(const std::string &name) const { return path_ + "/" + name; }

 private:
  std::string path_;
};

std::vector<Passage> ReadPassages(const std::string &path);

// Passages of every table and infobox extracted from a directory of pages.
std::vector<Passage> ExtractTablePassages(const std::string &wiki_dir);

// The 50-document fixture corpus (30 text passages, 15 tables, 5
// infoboxes) with BM25 indexes on disk, the fixture shim serving the KB
// services and the mock LLM rules.
class E2eEnvironment {
 public:
  E2eEnvironment();

  // Config with every source enabled and the mock backend.
  PipelineConfig Config() const;
  std::vector<DatasetExample> Dataset() const;
  // Writes Config() as a JSON file and returns its path.
  std::string WriteConfig(const std::string &name, const std::string &sources = "") const;

  const TempDir &dir() const { return dir_; }
  FixtureShim &shim() { return shim_; }
  size_t text_docs() const { return text_docs_; }
  size_t table_docs() const { return table_docs_; }
  size_t infobox_docs() const { return infobox_docs_; }

 private:
  TempDir dir_;
  FixtureShim shim_;
  size_t text_docs_ = 0;
  size_t table_docs_ = 0;
  size_t infobox_docs_ = 0;
};

// A config whose every endpoint points at a closed local port.
PipelineConfig UnreachableConfig();

struct MetricCase {
  std::string question;
  std::string gold;
  std::string prediction;
  bool exact;
  bool superset;
};

// The five answer-format cases where exact match misjudges a prediction.
const std::vector<MetricCase> &FormatCases();

// Gold/prediction pairs mixing case, punctuation, articles, quotes and
// containment, drawn deterministically from `seed`.
std::vector<std::pair<std::string, std::string>> RandomAnswerPairs(size_t n, uint64_t seed);

// Forty failed predictions with the gold answer planted in KB-only (3),
// TEXT-only (7), TABLE/INFOBOX-only (5) and two-source (3) evidence, and in
// none for the rest, alongside decoys that must not count: gold inside the
// KB question text, in LLM_CLAIM evidence, or only partially present.
// Expected: kb 5, text 9, tables 7, in evidence 18.
std::vector<Prediction> PlantedFailures();

}  // namespace hetqa::testing

#endif  // HETQA_TESTS_TEST_SUPPORT_H_
