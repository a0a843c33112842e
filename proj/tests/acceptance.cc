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

// Acceptance checks for the question answering pipeline. Prints one
// PASS/FAIL line per criterion and exits non-zero if any check fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hetqa/eval.h"
#include "hetqa/evidence.h"
#include "hetqa/kb_pipeline.h"
#include "hetqa/linearize.h"
#include "hetqa/pipeline.h"
#include "hetqa/service.h"
#include "hetqa/text_util.h"
#include "hetqa/triplets.h"
#include "hetqa/wikitext.h"
#include "test_support.h"

namespace hetqa {
namespace {

namespace ts = testing;

// Collects the reasons a criterion failed.
class Check {
 public:
  void Expect(bool ok, const std::string &what) {
    if (!ok) failures_.push_back(what);
  }
  bool ok() const { return failures_.empty(); }
  std::string Summary() const {
    std::string s;
    for (size_t i = 0; i < failures_.size() && i < 3; ++i) s += (i ? "; " : "") + failures_[i];
    if (failures_.size() > 3) s += "; +" + std::to_string(failures_.size() - 3) + " more";
    return s;
  }

 private:
  std::vector<std::string> failures_;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

size_t Count(std::string_view haystack, std::string_view needle) {
  size_t n = 0;
  for (size_t p = haystack.find(needle); p != std::string_view::npos;
       p = haystack.find(needle, p + needle.size())) {
    ++n;
  }
  return n;
}

void Linearization(Check &c, std::string &detail) {
  const std::string golden =
      "Fiction ; No.: 1, Title: \"The God of Small Things\", Publisher: Flamingo, Year: 1997, "
      "ISBN: ISBNT|0-00-655068-1.<tr> No.: 2, Title: \"The Ministry of Utmost Happiness\", "
      "Publisher: Hamish Hamilton, Year: 2017, ISBN: ISBNT|0-241-30397-4 .<tr>";
  auto start = Clock::now();
  WikiPage roy = ParsePage(ts::ReadFile(ts::FixturePath("wiki/Arundhati_Roy.wiki")),
                           "Arundhati Roy", 1);
  auto records = ExtractRecords(roy);
  c.Expect(records.size() == 1 && records[0].body == golden, "golden string differs");

  auto manifest = nlohmann::json::parse(ts::ReadFile(ts::FixturePath("tables/manifest.json")));
  size_t tables = 0;
  for (const auto &[file, expect] : manifest.items()) {
    WikiPage page = ParsePage(ts::ReadFile(ts::FixturePath("tables/" + file)), file, 1);
    auto recs = ExtractRecords(page);
    if (recs.size() != 1 || page.sections.empty() || page.sections[0].tables.empty()) {
      c.Expect(false, file + ": expected one table");
      continue;
    }
    ++tables;
    const std::string &body = recs[0].body;
    c.Expect(Count(body, "<tr>") == expect["rows"].get<size_t>(), file + ": <tr> count");
    for (const auto &cell : expect["cells"]) {
      c.Expect(body.find(cell.get<std::string>()) != std::string::npos,
               file + ": missing " + cell.get<std::string>());
    }
    const RawTable &t = page.sections[0].tables[0];
    for (const auto &row : t.grid) {
      for (size_t col = 0; col < row.size(); ++col) {
        if (row[col].empty()) continue;
        c.Expect(body.find(t.header[col] + ": " + row[col]) != std::string::npos,
                 file + ": cell not covered " + row[col]);
      }
    }
  }
  double secs = Seconds(start);
  c.Expect(tables == 20, "expected 20 hand-built tables, found " + std::to_string(tables));
  c.Expect(secs < 1.0, "took " + std::to_string(secs) + " s");
  detail = "golden + " + std::to_string(tables) + " tables";
}

void Metrics(Check &c, std::string &detail) {
  auto start = Clock::now();
  std::string em, sup;
  for (const auto &m : ts::FormatCases()) {
    bool e = ExactMatch(m.gold, m.prediction);
    bool s = SupersetMatch(m.gold, m.prediction);
    em += e ? 'T' : 'F';
    sup += s ? 'T' : 'F';
  }
  c.Expect(em == "TFFFF", "EM pattern " + em);
  c.Expect(sup == "TTFTF", "Superset pattern " + sup);
  size_t violations = 0;
  for (const auto &[gold, prediction] : ts::RandomAnswerPairs(10000, 2024)) {
    if (ExactMatch(gold, prediction) && !SupersetMatch(gold, prediction)) ++violations;
  }
  c.Expect(violations == 0, std::to_string(violations) + " pairs violate EM=>Superset");
  double secs = Seconds(start);
  c.Expect(secs < 5.0, "took " + std::to_string(secs) + " s");
  detail = "EM=" + em + " Superset=" + sup + ", 10000 random pairs";
}

void KbStrings(Check &c, std::string &detail) {
  KbResult baritone;
  baritone.kb_ids = {"Q6041"};
  baritone.labels = {"baritone"};
  KbResult no;
  no.boolean_answer = false;
  c.Expect(FormatKbEvidence("What is the voice type of the Bob Dylan?", baritone) ==
               "Wikidata says the answer to \"What is the voice type of the Bob Dylan?\" is: "
               "baritone.",
           "label string");
  c.Expect(FormatKbEvidence("Nirvana was founded by who?", KbResult{}) ==
               "Wikidata says the answer to \"Nirvana was founded by who?\" is: .",
           "empty string");
  c.Expect(FormatKbEvidence("Has Ericson Core started Career as music video director?", no) ==
               "Wikidata says the answer to \"Has Ericson Core started Career as music video "
               "director?\" is: no.",
           "boolean string");
  detail = "3 strings";
}

void Triplets(Check &c, std::string &detail) {
  std::vector<PositivePair> positives;
  std::vector<std::string> pool;
  for (size_t i = 0; i < 20000; ++i) pool.push_back("doc" + std::to_string(i));
  for (size_t i = 0; i < 9500; ++i) {
    positives.push_back({"question " + std::to_string(i), pool[(i * 13) % pool.size()]});
  }
  auto start = Clock::now();
  std::string runs[2];
  size_t count = 0;
  size_t self_negatives = 0;
  for (auto &out : runs) {
    auto triplets = GenerateTriplets(positives, pool, 10, 1234);
    count = triplets.size();
    for (const auto &t : triplets) self_negatives += t.positive_id == t.negative_id;
    std::ostringstream tsv;
    WriteTripletsTsv(triplets, tsv);
    out = tsv.str();
  }
  double secs = Seconds(start);
  c.Expect(count == 95000, "generated " + std::to_string(count));
  c.Expect(self_negatives == 0, std::to_string(self_negatives) + " negatives equal positives");
  c.Expect(runs[0] == runs[1], "seeded runs differ");
  c.Expect(secs < 10.0, "took " + std::to_string(secs) + " s");
  detail = std::to_string(count) + " triplets, 2 identical runs";
}

void EndToEnd(Check &c, std::string &detail) {
  auto start = Clock::now();
  ts::E2eEnvironment env;
  c.Expect(env.text_docs() == 30 && env.table_docs() == 15 && env.infobox_docs() == 5,
           "corpus is not 30/15/5");
  auto dataset = env.Dataset();
  c.Expect(dataset.size() == 20, "dataset has " + std::to_string(dataset.size()) + " questions");
  Pipeline pipeline(env.Config());
  EvalRun a = RunEval(dataset, pipeline, {true, 1});
  EvalRun b = RunEval(dataset, pipeline, {true, 4});
  c.Expect(a.report.em_rate >= 0.9, "EM " + std::to_string(a.report.em_rate));
  c.Expect(PredictionsToJson(a.predictions) == PredictionsToJson(b.predictions),
           "predictions not byte-stable");

  const unsigned chain[] = {kSourceText, kSourceText | kSourceTables,
                            kSourceText | kSourceTables | kSourceKb};
  std::vector<EvalRun> runs;
  for (unsigned s : chain) runs.push_back(RunEval(dataset, pipeline.WithSources(s), {false, 4}));
  size_t violations = 0;
  for (size_t q = 0; q < dataset.size(); ++q) {
    for (size_t i = 1; i < runs.size(); ++i) {
      const auto &small = runs[i - 1].predictions[q].evidences;
      const auto &large = runs[i].predictions[q].evidences;
      std::multiset<std::pair<EvidenceKind, std::string>> big(large.begin(), large.end());
      bool subset = small.size() <= large.size();
      for (const auto &item : small) subset = subset && big.count(item) > 0;
      violations += !subset;
    }
  }
  c.Expect(violations == 0, std::to_string(violations) + " pool monotonicity violations");
  double secs = Seconds(start);
  c.Expect(secs < 30.0, "took " + std::to_string(secs) + " s");
  std::ostringstream d;
  d.precision(2);
  d << std::fixed << "EM " << a.report.em_rate << " on " << dataset.size() << " questions";
  detail = d.str();
}

void Categorization(Check &c, std::string &detail) {
  ErrorBreakdown b = CategorizeErrors(ts::PlantedFailures());
  c.Expect(b.total_errors == 40, "total " + std::to_string(b.total_errors));
  c.Expect(b.gold_in_kb == 5, "kb " + std::to_string(b.gold_in_kb));
  c.Expect(b.gold_in_text == 9, "text " + std::to_string(b.gold_in_text));
  c.Expect(b.gold_in_tables == 7, "tables " + std::to_string(b.gold_in_tables));
  c.Expect(b.gold_in_evidence == 18, "in evidence " + std::to_string(b.gold_in_evidence));
  detail = "kb/text/tables/evidence = " + std::to_string(b.gold_in_kb) + "/" +
           std::to_string(b.gold_in_text) + "/" + std::to_string(b.gold_in_tables) + "/" +
           std::to_string(b.gold_in_evidence);
}

#ifdef HETQA_CLI
int RunCli(const std::string &args, std::string *out) {
  FILE *pipe = popen((std::string("'") + HETQA_CLI + "' " + args + " 2>/dev/null").c_str(), "r");
  if (pipe == nullptr) return -1;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out->append(buf, n);
  int status = pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
#endif

void Degradation(Check &c, std::string &detail) {
  PipelineConfig config = ts::UnreachableConfig();
  Pipeline pipeline(config);
  AskResult r = pipeline.Ask("Who is Bob Dylan?");
  c.Expect(r.answer.text == kNoAnswer, "ask answered '" + r.answer.text + "'");
  auto [status, body] = HandleAsk(pipeline, "{\"question\": \"Who is Bob Dylan?\"}");
  c.Expect(status == 200, "service status " + std::to_string(status));
  EvalRun run = RunEval(LoadDataset(ts::FixturePath("e2e/dataset.jsonl")), pipeline, {true, 4});
  c.Expect(run.predictions.size() == 20, "eval did not complete");
  detail = "library";
#ifdef HETQA_CLI
  ts::TempDir dir;
  nlohmann::json j = {{"endpoints",
                       {{"retriever", config.retriever.origin},
                        {"linker", config.linker.origin},
                        {"parser", config.parser.origin},
                        {"sparql", config.sparql.origin},
                        {"llm", config.llm.origin}}},
                      {"llm",
                       {{"backend", "remote"},
                        {"timeout_ms", 500},
                        {"retry", {{"attempts", 3}, {"initial_backoff_ms", 5}}}}},
                      {"timeout_ms", 500}};
  ts::WriteFile(dir.File("dead.json"), j.dump());
  std::string out;
  int code = RunCli("ask 'Who is Bob Dylan?' --config '" + dir.File("dead.json") + "'", &out);
  c.Expect(code == 0, "cli ask exit " + std::to_string(code));
  c.Expect(out.find("\"Information not available\"") != std::string::npos, "cli ask output");
  out.clear();
  code = RunCli("eval --dataset '" + ts::FixturePath("e2e/dataset.jsonl") + "' --config '" +
                    dir.File("dead.json") + "'",
                &out);
  c.Expect(code == 0, "cli eval exit " + std::to_string(code));
  detail += " + cli";
#endif
}

}  // namespace
}  // namespace hetqa

int main() {
  using Criterion = std::function<void(hetqa::Check &, std::string &)>;
  const std::vector<std::pair<std::string, Criterion>> criteria = {
      {"linearization", hetqa::Linearization}, {"metrics", hetqa::Metrics},
      {"kb-evidence", hetqa::KbStrings},       {"triplets", hetqa::Triplets},
      {"end-to-end", hetqa::EndToEnd},         {"error-categories", hetqa::Categorization},
      {"degradation", hetqa::Degradation},
  };
  int failed = 0;
  for (const auto &[name, run] : criteria) {
    hetqa::Check check;
    std::string detail;
    auto start = hetqa::Clock::now();
    try {
      run(check, detail);
    } catch (const std::exception &e) {
      check.Expect(false, std::string("exception: ") + e.what());
    }
    char elapsed[32];
    std::snprintf(elapsed, sizeof(elapsed), "%.3f s", hetqa::Seconds(start));
    std::cout << (check.ok() ? "PASS " : "FAIL ") << name << " (" << elapsed << ") "
              << (check.ok() ? detail : check.Summary()) << std::endl;
    failed += !check.ok();
  }
  return failed == 0 ? 0 : 1;
}
