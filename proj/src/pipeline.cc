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

#include "hetqa/pipeline.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "hetqa/errors.h"
#include "hetqa/grounded.h"
#include "hetqa/kb_pipeline.h"
#include "hetqa/text_util.h"

namespace hetqa {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string ResolvePath(const std::string &path, const std::string &base_dir) {
  if (path.empty() || base_dir.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).lexically_normal().string();
}

std::string Env(const char *name) {
  const char *value = std::getenv(name);
  return value == nullptr ? std::string() : std::string(value);
}

template <typename T>
void Read(const json &j, const char *key, T *out) {
  if (j.contains(key) && !j.at(key).is_null()) *out = j.at(key).get<T>();
}

void ReadEndpoint(const json &j, const char *key, Endpoint *out) {
  std::string url;
  Read(j, key, &url);
  if (!url.empty()) *out = Endpoint::Parse(url);
}

void ReadMillis(const json &j, const char *key, std::chrono::milliseconds *out) {
  if (j.contains(key)) *out = std::chrono::milliseconds(j.at(key).get<int64_t>());
}

}  // namespace

unsigned ParseSources(std::string_view spec) {
  unsigned sources = 0;
  std::string s(spec);
  for (char &c : s) {
    if (c == '+' || c == ';' || c == ' ') c = ',';
  }
  std::istringstream in(s);
  std::string name;
  while (std::getline(in, name, ',')) {
    name = ToLower(Trim(name));
    if (name.empty()) continue;
    if (name == "text") {
      sources |= kSourceText;
    } else if (name == "tables" || name == "table") {
      sources |= kSourceTables;
    } else if (name == "kb") {
      sources |= kSourceKb;
    } else if (name == "claims" || name == "llm_claim" || name == "llm") {
      sources |= kSourceClaims;
    } else if (name == "all") {
      sources |= kAllSources;
    } else {
      throw InvalidArgument("unknown source: " + name);
    }
  }
  if (sources == 0) throw InvalidArgument("no evidence source enabled");
  return sources;
}

std::string SourcesLabel(unsigned sources) {
  std::vector<std::string> parts;
  if (sources & kSourceText) parts.push_back("Text");
  if (sources & kSourceTables) parts.push_back("Tables");
  if (sources & kSourceKb) parts.push_back("KB");
  if (sources & kSourceClaims) parts.push_back("LLM");
  return Join(parts, "+");
}

PipelineConfig ConfigFromJson(std::string_view json_text, const std::string &base_dir) {
  PipelineConfig c;
  try {
    json j = json::parse(json_text);
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    if (j.contains("sources")) {
      const json &s = j.at("sources");
      if (s.is_array()) {
        std::vector<std::string> names = s.get<std::vector<std::string>>();
        c.sources = ParseSources(Join(names, ","));
      } else {
        c.sources = ParseSources(s.get<std::string>());
      }
    }
    if (j.contains("k")) c.k_text = c.k_tables = j.at("k").get<size_t>();
    Read(j, "k_text", &c.k_text);
    Read(j, "k_tables", &c.k_tables);
    if (j.contains("indexes")) {
      const json &ix = j.at("indexes");
      Read(ix, "text", &c.text_index);
      Read(ix, "tables", &c.table_index);
    }
    if (j.contains("collections")) {
      const json &col = j.at("collections");
      Read(col, "text", &c.text_collection);
      Read(col, "tables", &c.table_collection);
    }
    if (j.contains("endpoints")) {
      const json &ep = j.at("endpoints");
      ReadEndpoint(ep, "retriever", &c.retriever);
      ReadEndpoint(ep, "linker", &c.linker);
      ReadEndpoint(ep, "parser", &c.parser);
      ReadEndpoint(ep, "sparql", &c.sparql);
      ReadEndpoint(ep, "llm", &c.llm);
    }
    if (j.contains("llm")) {
      const json &l = j.at("llm");
      Read(l, "backend", &c.backend);
      Read(l, "model", &c.model);
      Read(l, "key", &c.llm_key);
      Read(l, "mock_rules", &c.mock_rules);
      Read(l, "prompt_dir", &c.prompt_dir);
      ReadMillis(l, "timeout_ms", &c.llm_timeout);
      Read(l, "max_in_flight", &c.max_llm_in_flight);
      if (l.contains("retry")) {
        const json &r = l.at("retry");
        Read(r, "attempts", &c.retry.attempts);
        ReadMillis(r, "initial_backoff_ms", &c.retry.initial_backoff);
      }
    }
    if (j.contains("entity_mode")) {
      c.entity_mode = ParseEntityMode(j.at("entity_mode").get<std::string>());
    }
    Read(j, "seed", &c.seed);
    ReadMillis(j, "timeout_ms", &c.timeout);
    Read(j, "max_requests", &c.max_requests);
    Read(j, "eval_workers", &c.eval_workers);
  } catch (const json::exception &e) {
    throw InvalidArgument(std::string("malformed config: ") + e.what());
  }
  c.text_index = ResolvePath(c.text_index, base_dir);
  c.table_index = ResolvePath(c.table_index, base_dir);
  c.mock_rules = ResolvePath(c.mock_rules, base_dir);
  c.prompt_dir = ResolvePath(c.prompt_dir, base_dir);
  return c;
}

PipelineConfig LoadConfig(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read config: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ConfigFromJson(buffer.str(), fs::path(path).parent_path().string());
}

void ApplyEnvironment(PipelineConfig *config) {
  struct Override {
    const char *name;
    Endpoint *endpoint;
  };
  const Override endpoints[] = {
      {"HETQA_LLM_ENDPOINT", &config->llm},
      {"HETQA_RETRIEVER_ENDPOINT", &config->retriever},
      {"HETQA_LINKER_ENDPOINT", &config->linker},
      {"HETQA_PARSER_ENDPOINT", &config->parser},
      {"HETQA_SPARQL_ENDPOINT", &config->sparql},
  };
  for (const Override &o : endpoints) {
    std::string value = Env(o.name);
    if (!value.empty()) *o.endpoint = Endpoint::Parse(value);
  }
  std::string key = Env("HETQA_LLM_KEY");
  if (!key.empty()) config->llm_key = key;
  std::string backend = Env("HETQA_BACKEND");
  if (!backend.empty()) config->backend = backend;
}

void ValidateConfig(const PipelineConfig &config) {
  if ((config.sources & kAllSources) == 0) throw InvalidArgument("no evidence source enabled");
  if (config.k_text == 0 || config.k_tables == 0) throw InvalidArgument("k must be at least 1");
  if (config.backend != "mock" && config.backend != "remote") {
    throw InvalidArgument("unknown backend: " + config.backend + " (expected mock or remote)");
  }
  if (config.max_llm_in_flight < 1 || config.max_requests < 1 || config.eval_workers < 1) {
    throw InvalidArgument("concurrency caps must be at least 1");
  }
  if (config.retry.attempts < 1) throw InvalidArgument("retry attempts must be at least 1");
}

std::shared_ptr<LlmBackend> MakeBackend(const PipelineConfig &config) {
  if (config.backend == "mock") {
    std::vector<MockRule> rules;
    if (!config.mock_rules.empty()) rules = LoadMockRules(config.mock_rules);
    return std::make_shared<MockBackend>(std::move(rules));
  }
  if (config.backend == "remote") {
    RemoteBackendOptions options;
    options.endpoint = config.llm;
    options.model = config.model;
    options.api_key = config.llm_key;
    options.retry = config.retry;
    options.timeout = config.llm_timeout;
    options.max_in_flight = config.max_llm_in_flight;
    return std::make_shared<RemoteBackend>(std::move(options));
  }
  throw InvalidArgument("unknown backend: " + config.backend);
}

Pipeline::Pipeline(PipelineConfig config) : Pipeline(config, MakeBackend(config)) {}

Pipeline::Pipeline(PipelineConfig config, std::shared_ptr<LlmBackend> backend)
    : config_(std::move(config)) {
  ValidateConfig(config_);
  if (!config_.text_index.empty()) {
    text_index_ = std::make_shared<const Bm25Index>(Bm25Index::Load(config_.text_index));
  }
  if (!config_.table_index.empty()) {
    table_index_ = std::make_shared<const Bm25Index>(Bm25Index::Load(config_.table_index));
  }
  PromptLibrary prompts = config_.prompt_dir.empty() ? PromptLibrary::Builtin()
                                                     : PromptLibrary::WithOverrides(config_.prompt_dir);
  llm_ = std::make_shared<const LlmClient>(std::move(backend), std::move(prompts));
}

Pipeline Pipeline::WithSources(unsigned sources) const {
  Pipeline copy = *this;
  copy.config_.sources = sources;
  ValidateConfig(copy.config_);
  return copy;
}

std::optional<EvidenceItem> Pipeline::KbEvidence(std::string_view question,
                                                 const std::vector<LinkedEntity> &oracle_entities,
                                                 AskDiagnostics *diag) const {
  EntityResolution resolution = ResolveEntities(question, config_.entity_mode, oracle_entities,
                                                *llm_, config_.linker, config_.timeout);
  for (std::string &f : resolution.failures) diag->failures.push_back(std::move(f));
  diag->entities = resolution.entities.size();
  KbResult result;
  try {
    SemanticParse parse = ParseQuery(question, resolution.entities, config_.parser, config_.timeout);
    diag->sparql = SubstituteEntities(parse, resolution.entities);
    std::string error;
    result = ExecuteSparql(diag->sparql, config_.sparql, config_.timeout, &error);
    if (!error.empty()) diag->failures.push_back("sparql: " + error);
  } catch (const Error &e) {
    diag->failures.push_back(std::string("semantic parse: ") + e.what());
  }
  return EvidenceItem{EvidenceKind::kKb, FormatKbEvidence(question, result), std::nullopt};
}

std::vector<Hit> Pipeline::Search(PassageKind kind, std::string_view question,
                                  AskDiagnostics *diag) const {
  bool text = kind == PassageKind::kText;
  const auto &index = text ? text_index_ : table_index_;
  size_t k = text ? config_.k_text : config_.k_tables;
  const char *what = text ? "text retrieval" : "table retrieval";
  try {
    if (index) return index->Retrieve(question, k);
    return RemoteRetrieve(config_.retriever, text ? config_.text_collection : config_.table_collection,
                          question, k, kind, config_.timeout);
  } catch (const Error &e) {
    diag->failures.push_back(std::string(what) + ": " + e.what());
    return {};
  }
}

AskResult Pipeline::Ask(std::string_view question,
                        const std::vector<LinkedEntity> &oracle_entities) const {
  const std::string q = CollapseWhitespace(question);
  if (q.empty()) throw InvalidArgument("empty question");
  const unsigned sources = config_.sources;

  AskDiagnostics kb_diag;
  AskDiagnostics gen_diag;
  AskResult result;
  AskDiagnostics &diag = result.diagnostics;

  // The three paths of the pipeline run concurrently; the draft path joins
  // the retrieval path for verification.
  std::future<std::optional<EvidenceItem>> kb_future;
  if (sources & kSourceKb) {
    kb_future = std::async(std::launch::async,
                           [&] { return KbEvidence(q, oracle_entities, &kb_diag); });
  }
  std::future<std::vector<Claim>> claims_future;
  if (sources & kSourceClaims) {
    claims_future = std::async(std::launch::async, [&] {
      try {
        std::string draft = DraftAnswer(q, *llm_);
        return SplitClaims(q, draft, *llm_);
      } catch (const Error &e) {
        gen_diag.failures.push_back(std::string("draft: ") + e.what());
        return std::vector<Claim>{};
      }
    });
  }

  // Claim verification reuses the question's hits, so retrieval also runs
  // for a disabled source when claims are enabled.
  std::vector<Hit> text_hits;
  std::vector<Hit> table_hits;
  if (sources & (kSourceText | kSourceClaims)) text_hits = Search(PassageKind::kText, q, &diag);
  if (sources & (kSourceTables | kSourceClaims)) {
    table_hits = Search(PassageKind::kTable, q, &diag);
  }
  diag.text_hits = text_hits.size();
  diag.table_hits = table_hits.size();

  auto summarize = [&](const std::vector<Hit> &hits) {
    std::vector<std::future<std::optional<EvidenceItem>>> futures;
    for (const Hit &hit : hits) {
      futures.push_back(std::async(std::launch::async,
                                   [&, &hit = hit] { return SummarizeHit(q, hit, *llm_); }));
    }
    std::vector<EvidenceItem> items;
    for (auto &f : futures) {
      if (std::optional<EvidenceItem> item = f.get()) items.push_back(std::move(*item));
    }
    return items;
  };
  std::vector<EvidenceItem> text_items;
  std::vector<EvidenceItem> table_items;
  if (sources & kSourceText) text_items = summarize(text_hits);
  if (sources & kSourceTables) table_items = summarize(table_hits);

  std::vector<EvidenceItem> claim_items;
  if (sources & kSourceClaims) {
    std::vector<Claim> claims = claims_future.get();
    std::vector<Hit> hits = text_hits;
    hits.insert(hits.end(), table_hits.begin(), table_hits.end());
    std::vector<std::future<Verdict>> futures;
    for (const Claim &claim : claims) {
      futures.push_back(std::async(std::launch::async,
                                   [&, &claim = claim] { return Verify(claim, hits, *llm_); }));
    }
    std::vector<Verdict> verdicts;
    for (auto &f : futures) verdicts.push_back(f.get());
    claim_items = FilterVerified(claims, verdicts);
    diag.claims = claims.size();
    diag.verified_claims = claim_items.size();
  }

  std::optional<EvidenceItem> kb_item;
  if (sources & kSourceKb) kb_item = kb_future.get();
  diag.entities = kb_diag.entities;
  diag.sparql = kb_diag.sparql;
  for (auto *part : {&kb_diag, &gen_diag}) {
    diag.failures.insert(diag.failures.end(), part->failures.begin(), part->failures.end());
  }

  EvidencePool pool = Assemble(kb_item, text_items, table_items, claim_items);
  result.answer = AnswerFromPool(q, pool, *llm_);
  return result;
}

}  // namespace hetqa
