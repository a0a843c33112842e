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

// Pipeline configuration and the per-question orchestration of the KB,
// retrieval and verified-generation evidence paths.

#ifndef HETQA_PIPELINE_H_
#define HETQA_PIPELINE_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hetqa/entity_link.h"
#include "hetqa/evidence.h"
#include "hetqa/http_client.h"
#include "hetqa/index.h"
#include "hetqa/llm.h"

namespace hetqa {

// Evidence sources, combinable as a bit set.
enum Source : unsigned {
  kSourceText = 1u << 0,
  kSourceTables = 1u << 1,
  kSourceKb = 1u << 2,
  kSourceClaims = 1u << 3,
};
inline constexpr unsigned kAllSources = kSourceText | kSourceTables | kSourceKb | kSourceClaims;

// Parses "text,tables,kb,claims" (also "all", "+" as separator and
// "llm_claim"). Throws InvalidArgument on unknown names or an empty set.
unsigned ParseSources(std::string_view spec);
// "Text+Tables+KB" style label used in reports.
std::string SourcesLabel(unsigned sources);

struct PipelineConfig {
  unsigned sources = kAllSources;
  size_t k_text = 5;
  size_t k_tables = 5;

  // Local BM25 indexes; when absent the retriever service is used.
  std::string text_index;
  std::string table_index;
  std::string text_collection = "text";
  std::string table_collection = "tables";

  Endpoint retriever;
  Endpoint linker;
  Endpoint parser;
  Endpoint sparql;
  Endpoint llm;

  std::string backend = "mock";  // mock | remote
  std::string model = "gpt-4";
  std::string llm_key;
  std::string mock_rules;  // JSON rule file for the mock backend
  std::string prompt_dir;  // template overrides

  EntityMode entity_mode = EntityMode::kLlmEnriched;
  uint64_t seed = 0;
  std::chrono::milliseconds timeout{15000};      // retriever, linker, parser, SPARQL
  std::chrono::milliseconds llm_timeout{60000};  // per chat request
  RetryPolicy retry;
  int max_llm_in_flight = 8;
  int max_requests = 16;
  int eval_workers = 4;
};

// Reads a JSON config. Relative paths are resolved against the config
// file's directory. Throws InvalidArgument.
PipelineConfig LoadConfig(const std::string &path);
PipelineConfig ConfigFromJson(std::string_view json_text, const std::string &base_dir = "");

// HETQA_LLM_ENDPOINT, HETQA_LLM_KEY, HETQA_BACKEND, HETQA_RETRIEVER_ENDPOINT,
// HETQA_LINKER_ENDPOINT, HETQA_PARSER_ENDPOINT, HETQA_SPARQL_ENDPOINT.
void ApplyEnvironment(PipelineConfig *config);

// Throws InvalidArgument when no source is enabled, a k is 0 or the
// backend is unknown.
void ValidateConfig(const PipelineConfig &config);

struct AskDiagnostics {
  std::vector<std::string> failures;  // degraded steps
  size_t entities = 0;
  std::string sparql;
  size_t text_hits = 0;
  size_t table_hits = 0;
  size_t claims = 0;
  size_t verified_claims = 0;
};

struct AskResult {
  FinalAnswer answer;
  AskDiagnostics diagnostics;
};

std::shared_ptr<LlmBackend> MakeBackend(const PipelineConfig &config);

class Pipeline {
 public:
  // Loads indexes, rules and prompts named by the config.
  explicit Pipeline(PipelineConfig config);
  Pipeline(PipelineConfig config, std::shared_ptr<LlmBackend> backend);

  // Never throws for service failures; degraded paths are reported in the
  // diagnostics. `oracle_entities` is used in ORACLE entity mode.
  AskResult Ask(std::string_view question,
                const std::vector<LinkedEntity> &oracle_entities = {}) const;

  // Same pipeline with another source set.
  Pipeline WithSources(unsigned sources) const;

  const PipelineConfig &config() const { return config_; }
  const LlmClient &llm() const { return *llm_; }

 private:
  Pipeline() = default;

  std::optional<EvidenceItem> KbEvidence(std::string_view question,
                                         const std::vector<LinkedEntity> &oracle_entities,
                                         AskDiagnostics *diag) const;
  std::vector<Hit> Search(PassageKind kind, std::string_view question, AskDiagnostics *diag) const;

  PipelineConfig config_;
  std::shared_ptr<const Bm25Index> text_index_;
  std::shared_ptr<const Bm25Index> table_index_;
  std::shared_ptr<const LlmClient> llm_;
};

}  // namespace hetqa

#endif  // HETQA_PIPELINE_H_
