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

// hetqa: command-line entry point.
//
//   hetqa extract DUMP --out records.jsonl [--text-out passages.jsonl]
//   hetqa index INPUT.jsonl --out index.jsonl
//   hetqa triplets --positives pos.tsv --pool ids --out triplets.tsv
//   hetqa ask "question" [--config cfg.json] [--sources text,tables,kb]
//   hetqa eval --dataset dev.jsonl --out predictions.json [--report r.json]
//   hetqa serve [--config cfg.json] [--port 8080]
//
// Exit codes: 0 success (sentinel answers included), 1 internal error,
// 2 usage or configuration error.

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hetqa/dump_reader.h"
#include "hetqa/errors.h"
#include "hetqa/eval.h"
#include "hetqa/index.h"
#include "hetqa/linearize.h"
#include "hetqa/pipeline.h"
#include "hetqa/service.h"
#include "hetqa/text_util.h"
#include "hetqa/triplets.h"
#include "hetqa/wikitext.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
  std::string config;
  std::vector<std::string> sources;
  std::optional<size_t> k;
  std::optional<uint64_t> seed;
  std::string backend;
  std::string out;
};

void AddPipelineFlags(CLI::App *cmd, CommonFlags *flags, bool multi_sources) {
  cmd->add_option("--config", flags->config, "JSON pipeline config")->check(CLI::ExistingFile);
  if (multi_sources) {
    cmd->add_option("--sources", flags->sources,
                    "Source set such as text,tables,kb; repeat to evaluate several");
  } else {
    cmd->add_option("--sources", flags->sources, "Sources: text,tables,kb,claims")
        ->expected(1);
  }
  cmd->add_option("--k", flags->k, "Hits per source")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", flags->seed, "Random seed");
  cmd->add_option("--backend", flags->backend, "LLM backend")
      ->check(CLI::IsMember({"mock", "remote"}));
}

hetqa::PipelineConfig BuildConfig(const CommonFlags &flags) {
  hetqa::PipelineConfig config =
      flags.config.empty() ? hetqa::PipelineConfig{} : hetqa::LoadConfig(flags.config);
  hetqa::ApplyEnvironment(&config);
  if (!flags.sources.empty()) config.sources = hetqa::ParseSources(flags.sources.front());
  if (flags.k) config.k_text = config.k_tables = *flags.k;
  if (flags.seed) config.seed = *flags.seed;
  if (!flags.backend.empty()) config.backend = flags.backend;
  hetqa::ValidateConfig(config);
  return config;
}

void WriteFile(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hetqa::InvalidArgument("cannot write " + path);
  out << content;
  if (!out) throw hetqa::Error("write failed: " + path);
}

std::ofstream OpenOutput(const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hetqa::InvalidArgument("cannot write " + path);
  return out;
}

int RunExtract(const std::string &dump, const std::string &out_path, const std::string &text_out) {
  std::ofstream out = OpenOutput(out_path);
  std::optional<std::ofstream> text;
  if (!text_out.empty()) text = OpenOutput(text_out);
  size_t tables = 0, infoboxes = 0, skipped = 0, records = 0, passages = 0;
  hetqa::ParseDiagnostics diagnostics;
  size_t pages = hetqa::ForEachPage(dump, [&](hetqa::RawPage &&raw) {
    hetqa::WikiPage page = hetqa::ParsePage(raw.wikitext, raw.title, raw.page_id, &diagnostics);
    for (const hetqa::LinearizedRecord &record : hetqa::ExtractRecords(page)) {
      (record.kind == hetqa::RecordKind::kTable ? tables : infoboxes)++;
      if (record.skip) {
        ++skipped;
        continue;
      }
      out << hetqa::RecordToJson(record) << '\n';
      ++records;
    }
    if (!text) return;
    size_t n = 0;
    for (const hetqa::Section &section : page.sections) {
      std::string body = hetqa::Join(section.sentences, " ");
      if (body.empty()) continue;
      hetqa::Passage p;
      p.doc_id = std::to_string(page.page_id) + ":text:" + std::to_string(n++);
      p.title = section.heading_path.empty() ? page.title : page.title + " ; " + section.Title();
      p.text = std::move(body);
      *text << hetqa::PassageToJson(p) << '\n';
      ++passages;
    }
  });
  std::cout << "pages=" << pages << " tables=" << tables << " infoboxes=" << infoboxes
            << " skipped=" << skipped << " records=" << records;
  if (text) std::cout << " passages=" << passages;
  std::cout << " malformed=" << diagnostics.malformed << '\n';
  return kExitOk;
}

int RunIndex(const std::string &input, const std::string &out_path) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw hetqa::InvalidArgument("cannot read " + input);
  std::vector<hetqa::Passage> passages;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (hetqa::Trim(line).empty()) continue;
    try {
      passages.push_back(hetqa::PassageFromJson(line));
    } catch (const hetqa::InvalidArgument &e) {
      throw hetqa::InvalidArgument(input + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  hetqa::Bm25Index index = hetqa::Bm25Index::Build(std::move(passages));
  index.Save(out_path);
  std::cout << "indexed " << index.size() << " passages\n";
  return kExitOk;
}

std::vector<std::string> ReadPool(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hetqa::InvalidArgument("cannot read " + path);
  std::vector<std::string> ids;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::string t = hetqa::Trim(line);
    if (t.empty()) continue;
    if (t.front() == '{') {
      // Index header lines carry no doc_id.
      if (first && t.find("\"format\"") != std::string::npos) {
        first = false;
        continue;
      }
      ids.push_back(hetqa::PassageFromJson(t).doc_id);
    } else {
      ids.push_back(t);
    }
    first = false;
  }
  return ids;
}

int RunTriplets(const std::string &positives_path, const std::string &pool_path, size_t n_neg,
                uint64_t seed, const std::string &out_path) {
  std::ifstream in(positives_path, std::ios::binary);
  if (!in) throw hetqa::InvalidArgument("cannot read " + positives_path);
  std::vector<hetqa::PositivePair> positives = hetqa::ReadPositivesTsv(in);
  std::vector<hetqa::TrainingTriplet> triplets =
      hetqa::GenerateTriplets(positives, ReadPool(pool_path), n_neg, seed);
  std::ofstream out = OpenOutput(out_path);
  hetqa::WriteTripletsTsv(triplets, out);
  std::cout << "wrote " << triplets.size() << " triplets\n";
  return kExitOk;
}

int RunAsk(const std::string &question, const CommonFlags &flags) {
  hetqa::Pipeline pipeline(BuildConfig(flags));
  hetqa::AskResult result = pipeline.Ask(question);
  std::string json = hetqa::AskResponseJson(result);
  std::cout << json << '\n';
  if (!flags.out.empty()) WriteFile(flags.out, json + "\n");
  for (const std::string &failure : result.diagnostics.failures) {
    std::cerr << "degraded: " << failure << '\n';
  }
  std::cerr << "evidence failures: " << result.diagnostics.failures.size() << '\n';
  return kExitOk;
}

int RunEvalCommand(const std::string &dataset_path, const CommonFlags &flags,
                   const std::string &report_path, bool judge, std::optional<int> workers) {
  std::vector<hetqa::DatasetExample> dataset = hetqa::LoadDataset(dataset_path);
  CommonFlags base = flags;
  base.sources.clear();
  hetqa::PipelineConfig config = BuildConfig(base);
  if (workers) config.eval_workers = *workers;
  hetqa::Pipeline pipeline(config);
  std::vector<unsigned> source_sets;
  for (const std::string &s : flags.sources) source_sets.push_back(hetqa::ParseSources(s));
  if (source_sets.empty()) source_sets.push_back(config.sources);

  hetqa::EvalOptions options;
  options.judge = judge;
  options.workers = config.eval_workers;
  std::vector<hetqa::MetricReport> reports;
  for (size_t i = 0; i < source_sets.size(); ++i) {
    hetqa::EvalRun run = hetqa::RunEval(dataset, pipeline.WithSources(source_sets[i]), options);
    reports.push_back(run.report);
    // With several configs the predictions of each go to "<out>.<n>".
    if (!flags.out.empty()) {
      std::string path = source_sets.size() == 1 ? flags.out : flags.out + "." + std::to_string(i);
      WriteFile(path, hetqa::PredictionsToJson(run.predictions));
    }
  }
  std::cout << hetqa::ReportToText(reports);
  if (!report_path.empty()) WriteFile(report_path, hetqa::ReportToJson(reports));
  return kExitOk;
}

hetqa::QaService *g_service = nullptr;

void HandleSignal(int) {
  if (g_service != nullptr) g_service->Stop();
}

int RunServe(const CommonFlags &flags, const std::string &host, int port) {
  hetqa::Pipeline pipeline(BuildConfig(flags));
  hetqa::QaService service(pipeline);
  int bound = port;
  if (port == 0) {
    bound = service.BindToAnyPort(host);
    if (bound < 0) throw hetqa::Error("cannot bind " + host);
  } else if (!service.Bind(host, port)) {
    throw hetqa::Error("cannot bind " + host + ":" + std::to_string(port));
  }
  std::cout << "listening on " << host << ":" << bound << std::endl;
  g_service = &service;
  std::signal(SIGINT, HandleSignal);
  std::signal(SIGTERM, HandleSignal);
  service.ListenAfterBind();
  g_service = nullptr;
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Hybrid question answering over text, tables, infoboxes and a knowledge base"};
  app.require_subcommand(1);

  std::string dump, records_out, text_out;
  CLI::App *extract = app.add_subcommand("extract", "Extract linearized tables and infoboxes");
  extract->add_option("dump", dump, "XML dump, wikitext file or directory")->required();
  extract->add_option("--out", records_out, "Records JSONL")->required();
  extract->add_option("--text-out", text_out, "Also write section text passages");

  std::string index_in, index_out;
  CLI::App *index = app.add_subcommand("index", "Build a BM25 index from passages or records");
  index->add_option("input", index_in, "Passage or record JSONL")->required();
  index->add_option("--out", index_out, "Index file")->required();

  std::string positives, pool, triplets_out;
  size_t n_neg = 10;
  uint64_t triplet_seed = 0;
  CLI::App *triplets = app.add_subcommand("triplets", "Sample retriever training triplets");
  triplets->add_option("--positives", positives, "TSV of query and positive id")->required();
  triplets->add_option("--pool", pool, "Doc ids, one per line, or passage/index JSONL")
      ->required();
  triplets->add_option("--n-neg", n_neg, "Negatives per positive")->check(CLI::PositiveNumber);
  triplets->add_option("--seed", triplet_seed, "Random seed");
  triplets->add_option("--out", triplets_out, "Triplet TSV")->required();

  CommonFlags ask_flags;
  std::string question;
  CLI::App *ask = app.add_subcommand("ask", "Answer one question");
  ask->add_option("question", question, "Question text")->required();
  AddPipelineFlags(ask, &ask_flags, false);
  ask->add_option("--out", ask_flags.out, "Also write the answer JSON here");

  CommonFlags eval_flags;
  std::string dataset, report;
  bool no_judge = false;
  std::optional<int> workers;
  CLI::App *eval = app.add_subcommand("eval", "Evaluate on a dataset");
  eval->add_option("--dataset", dataset, "Dataset JSONL")->required();
  AddPipelineFlags(eval, &eval_flags, true);
  eval->add_option("--out", eval_flags.out, "Predictions JSON");
  eval->add_option("--report", report, "Report JSON");
  eval->add_flag("--no-judge", no_judge, "Skip LLM judge matching");
  eval->add_option("--workers", workers, "Concurrent examples")->check(CLI::PositiveNumber);

  CommonFlags serve_flags;
  std::string host = "127.0.0.1";
  int port = 8080;
  CLI::App *serve = app.add_subcommand("serve", "Run the HTTP question answering service");
  AddPipelineFlags(serve, &serve_flags, false);
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port; 0 picks a free one")->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*extract) return RunExtract(dump, records_out, text_out);
    if (*index) return RunIndex(index_in, index_out);
    if (*triplets) return RunTriplets(positives, pool, n_neg, triplet_seed, triplets_out);
    if (*ask) return RunAsk(question, ask_flags);
    if (*eval) return RunEvalCommand(dataset, eval_flags, report, !no_judge, workers);
    if (*serve) return RunServe(serve_flags, host, port);
  } catch (const hetqa::InvalidArgument &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
