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

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "hetqa/errors.h"
#include "hetqa/kb_pipeline.h"
#include "hetqa/text_util.h"

namespace hetqa {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string Percent(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", rate * 100.0);
  return buf;
}

std::string Count(size_t count, size_t total) {
  char buf[64];
  double pct = total == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(total);
  std::snprintf(buf, sizeof(buf), "%zu (%.2f%%)", count, pct);
  return buf;
}

std::string Pad(std::string s, size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

bool Contains(const std::string &normalized_gold, std::string_view text) {
  return NormalizeAnswer(text).find(normalized_gold) != std::string::npos;
}

}  // namespace

std::vector<DatasetExample> ReadDataset(std::istream &in, const std::string &name) {
  std::vector<DatasetExample> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto fail = [&](const std::string &why) {
      return InvalidArgument(name + ":" + std::to_string(line_no) + ": " + why);
    };
    DatasetExample ex;
    try {
      json j = json::parse(line);
      ex.id = j.contains("id") ? (j.at("id").is_string() ? j.at("id").get<std::string>()
                                                         : j.at("id").dump())
                               : std::to_string(line_no);
      ex.question = j.at("question").get<std::string>();
      ex.gold = j.at("gold").get<std::string>();
      if (j.contains("gold_sources")) {
        ex.gold_sources = j.at("gold_sources").get<std::vector<std::string>>();
      }
      for (const json &e : j.value("entities", json::array())) {
        LinkedEntity entity;
        entity.surface = e.value("surface", "");
        entity.kb_id = e.at("kb_id").get<std::string>();
        entity.label = e.value("label", entity.surface);
        entity.score = e.value("score", 1.0);
        if (!IsValidKbId(entity.kb_id)) throw fail("invalid kb_id " + entity.kb_id);
        ex.entities.push_back(std::move(entity));
      }
    } catch (const json::exception &e) {
      throw fail(e.what());
    }
    if (Trim(ex.question).empty()) throw fail("empty question");
    if (Trim(ex.gold).empty()) throw fail("empty gold");
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<DatasetExample> LoadDataset(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read dataset: " + path);
  return ReadDataset(in, path);
}

bool ExactMatch(std::string_view gold, std::string_view prediction) {
  return NormalizeAnswer(gold) == NormalizeAnswer(prediction);
}

bool SupersetMatch(std::string_view gold, std::string_view prediction) {
  return NormalizeAnswer(prediction).find(NormalizeAnswer(gold)) != std::string::npos;
}

std::optional<bool> ParseJudgeVerdict(std::string_view reply) {
  std::string r = ToLower(Trim(reply));
  auto starts = [&](std::string_view word) {
    if (r.compare(0, word.size(), word) != 0) return false;
    return r.size() == word.size() || !std::isalnum(static_cast<unsigned char>(r[word.size()]));
  };
  if (starts("yes")) return true;
  if (starts("no")) return false;
  return std::nullopt;
}

bool JudgeMatch(std::string_view question, std::string_view gold, std::string_view prediction,
                const LlmClient &llm) {
  std::string reply = llm.Run(stage::kJudge, {{"question", std::string(question)},
                                              {"gold", std::string(gold)},
                                              {"prediction", std::string(prediction)}});
  return ParseJudgeVerdict(reply).value_or(false);
}

ErrorBreakdown CategorizeErrors(const std::vector<Prediction> &failures) {
  ErrorBreakdown b;
  b.total_errors = failures.size();
  for (const Prediction &p : failures) {
    if (!p.gold) continue;
    std::string gold = NormalizeAnswer(*p.gold);
    if (gold.empty()) continue;
    bool kb = false;
    bool text = false;
    bool tables = false;
    for (const auto &[kind, evidence] : p.evidences) {
      switch (kind) {
        case EvidenceKind::kKb:
          kb = kb || Contains(gold, KbAnswerSpan(evidence));
          break;
        case EvidenceKind::kText:
          text = text || Contains(gold, evidence);
          break;
        case EvidenceKind::kTable:
        case EvidenceKind::kInfobox:
          tables = tables || Contains(gold, evidence);
          break;
        case EvidenceKind::kLlmClaim:
          break;
      }
    }
    b.gold_in_kb += kb;
    b.gold_in_text += text;
    b.gold_in_tables += tables;
    b.gold_in_evidence += (kb || text || tables);
  }
  return b;
}

MetricReport BuildReport(std::string config, const std::vector<Prediction> &predictions,
                         const std::vector<ExampleScore> &scores) {
  if (predictions.size() != scores.size()) {
    throw InvalidArgument("predictions and scores differ in length");
  }
  MetricReport r;
  r.config = std::move(config);
  r.n = scores.size();
  size_t em = 0;
  size_t superset = 0;
  size_t judge = 0;
  std::vector<Prediction> failures;
  for (size_t i = 0; i < scores.size(); ++i) {
    const ExampleScore &s = scores[i];
    em += s.exact;
    superset += s.superset;
    if (s.judge) {
      ++r.judged;
      judge += *s.judge;
    }
    if (!s.correct()) failures.push_back(predictions[i]);
  }
  if (r.n > 0) {
    r.em_rate = static_cast<double>(em) / static_cast<double>(r.n);
    r.superset_rate = static_cast<double>(superset) / static_cast<double>(r.n);
  }
  if (r.judged > 0) r.judge_rate = static_cast<double>(judge) / static_cast<double>(r.judged);
  r.errors = CategorizeErrors(failures);
  return r;
}

EvalRun RunEval(const std::vector<DatasetExample> &dataset, const Pipeline &pipeline,
                const EvalOptions &options) {
  if (dataset.empty()) throw InvalidArgument("empty dataset");
  EvalRun run;
  run.predictions.resize(dataset.size());
  run.scores.resize(dataset.size());
  run.diagnostics.resize(dataset.size());

  std::atomic<size_t> next{0};
  std::mutex error_mu;
  std::exception_ptr error;
  auto worker = [&] {
    for (size_t i = next++; i < dataset.size(); i = next++) {
      try {
        const DatasetExample &ex = dataset[i];
        AskResult result = pipeline.Ask(ex.question, ex.entities);
        run.predictions[i] = MakePrediction(ex.question, ex.gold, result.answer);
        run.diagnostics[i] = std::move(result.diagnostics);
        ExampleScore &s = run.scores[i];
        const std::string &answer = result.answer.text;
        s.exact = ExactMatch(ex.gold, answer);
        s.superset = SupersetMatch(ex.gold, answer);
        if (options.judge) {
          try {
            s.judge = JudgeMatch(ex.question, ex.gold, answer, pipeline.llm());
          } catch (const BackendUnavailable &e) {
            run.diagnostics[i].failures.push_back(std::string("judge: ") + e.what());
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next = dataset.size();
      }
    }
  };
  size_t workers = std::min<size_t>(std::max(options.workers, 1), dataset.size());
  std::vector<std::thread> threads;
  for (size_t w = 1; w < workers; ++w) threads.emplace_back(worker);
  worker();
  for (std::thread &t : threads) t.join();
  if (error) std::rethrow_exception(error);

  run.report = BuildReport(SourcesLabel(pipeline.config().sources), run.predictions, run.scores);
  return run;
}

std::string PredictionsToJson(const std::vector<Prediction> &predictions) {
  std::string out = "[";
  for (size_t i = 0; i < predictions.size(); ++i) {
    std::string item = SerializePrediction(predictions[i], 4);
    // Nest one level: indent every line of the object by four spaces.
    std::string nested = "\n    ";
    for (char c : item) {
      nested.push_back(c);
      if (c == '\n') nested.append("    ");
    }
    out += nested;
    if (i + 1 < predictions.size()) out.push_back(',');
  }
  out += predictions.empty() ? "]\n" : "\n]\n";
  return out;
}

std::string ReportToJson(const std::vector<MetricReport> &reports) {
  ordered_json arr = ordered_json::array();
  for (const MetricReport &r : reports) {
    ordered_json j;
    j["config"] = r.config;
    j["n"] = r.n;
    j["judged"] = r.judged;
    j["em_rate"] = r.em_rate;
    j["superset_rate"] = r.superset_rate;
    j["judge_rate"] = r.judge_rate ? ordered_json(*r.judge_rate) : ordered_json(nullptr);
    ordered_json e;
    e["total_errors"] = r.errors.total_errors;
    e["gold_in_evidence"] = r.errors.gold_in_evidence;
    e["gold_in_kb"] = r.errors.gold_in_kb;
    e["gold_in_text"] = r.errors.gold_in_text;
    e["gold_in_tables"] = r.errors.gold_in_tables;
    j["errors"] = std::move(e);
    arr.push_back(std::move(j));
  }
  ordered_json root;
  root["reports"] = std::move(arr);
  return root.dump(4) + "\n";
}

std::string ReportToText(const std::vector<MetricReport> &reports) {
  size_t width = 8;
  for (const MetricReport &r : reports) width = std::max(width, r.config.size());
  width += 2;
  std::string out = Pad("", width) + Pad("Exact Match", 14) + Pad("Superset", 14) + "Judge Match\n";
  for (const MetricReport &r : reports) {
    out += Pad(r.config, width) + Pad(Percent(r.em_rate), 14) + Pad(Percent(r.superset_rate), 14) +
           (r.judge_rate ? Percent(*r.judge_rate) : std::string("--")) + "\n";
  }
  for (const MetricReport &r : reports) {
    const ErrorBreakdown &e = r.errors;
    out += "\nError cases (" + r.config + ", n=" + std::to_string(r.n) + ")\n";
    out += Pad("All Error Cases", 20) + Count(e.total_errors, e.total_errors) + "\n";
    out += Pad("Gold in Evidence", 20) + Count(e.gold_in_evidence, e.total_errors) + "\n";
    out += Pad("Gold in KB", 20) + Count(e.gold_in_kb, e.total_errors) + "\n";
    out += Pad("Gold in Text", 20) + Count(e.gold_in_text, e.total_errors) + "\n";
    out += Pad("Gold in Tables", 20) + Count(e.gold_in_tables, e.total_errors) + "\n";
  }
  return out;
}

}  // namespace hetqa
