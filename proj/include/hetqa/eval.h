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

// Evaluation harness: dataset loading, EM / Superset / judge metrics,
// batch runs over a pipeline and evidence-source error analysis.

#ifndef HETQA_EVAL_H_
#define HETQA_EVAL_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hetqa/entity_link.h"
#include "hetqa/evidence.h"
#include "hetqa/llm.h"
#include "hetqa/pipeline.h"

namespace hetqa {

struct DatasetExample {
  std::string id;
  std::string question;
  std::string gold;
  std::vector<std::string> gold_sources;
  std::vector<LinkedEntity> entities;  // optional, for ORACLE entity mode
};

// JSON lines with id, question, gold, gold_sources and optional entities.
// Blank lines are skipped. Throws InvalidArgument naming the line number.
std::vector<DatasetExample> ReadDataset(std::istream &in, const std::string &name = "<dataset>");
std::vector<DatasetExample> LoadDataset(const std::string &path);

bool ExactMatch(std::string_view gold, std::string_view prediction);
// Normalized gold is a contiguous substring of the normalized prediction.
bool SupersetMatch(std::string_view gold, std::string_view prediction);

// "yes..." -> true, "no..." -> false (case-insensitive), else nullopt.
std::optional<bool> ParseJudgeVerdict(std::string_view reply);
// Unparseable replies count as false. Throws BackendUnavailable.
bool JudgeMatch(std::string_view question, std::string_view gold, std::string_view prediction,
                const LlmClient &llm);

struct ErrorBreakdown {
  size_t total_errors = 0;
  size_t gold_in_evidence = 0;
  size_t gold_in_kb = 0;
  size_t gold_in_text = 0;
  size_t gold_in_tables = 0;  // TABLE and INFOBOX evidence

  bool operator==(const ErrorBreakdown &) const = default;
};

// Counts failures whose normalized gold occurs in evidence of each kind.
// For KB evidence only the answer span is searched, since the sentence
// repeats the question. Failures without gold are not counted.
ErrorBreakdown CategorizeErrors(const std::vector<Prediction> &failures);

struct ExampleScore {
  bool exact = false;
  bool superset = false;
  std::optional<bool> judge;  // nullopt when not judged

  // The judge decides when it ran, Superset otherwise.
  bool correct() const { return judge.has_value() ? *judge : superset; }
};

struct MetricReport {
  std::string config;
  size_t n = 0;
  size_t judged = 0;
  double em_rate = 0.0;
  double superset_rate = 0.0;
  std::optional<double> judge_rate;  // over judged examples
  ErrorBreakdown errors;
};

MetricReport BuildReport(std::string config, const std::vector<Prediction> &predictions,
                         const std::vector<ExampleScore> &scores);

struct EvalOptions {
  bool judge = true;
  int workers = 4;
};

struct EvalRun {
  std::vector<Prediction> predictions;  // dataset order
  std::vector<ExampleScore> scores;
  std::vector<AskDiagnostics> diagnostics;
  MetricReport report;
};

// Throws InvalidArgument for an empty dataset.
EvalRun RunEval(const std::vector<DatasetExample> &dataset, const Pipeline &pipeline,
                const EvalOptions &options = {});

// JSON array of predictions, 4-space indentation.
std::string PredictionsToJson(const std::vector<Prediction> &predictions);
std::string ReportToJson(const std::vector<MetricReport> &reports);
// Plain-text tables: metrics per config, then error cases by category.
std::string ReportToText(const std::vector<MetricReport> &reports);

}  // namespace hetqa

#endif  // HETQA_EVAL_H_
