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

// Evidence pool: per-hit summaries, assembly of the heterogeneous pool,
// final answer generation and the prediction record.

#ifndef HETQA_EVIDENCE_H_
#define HETQA_EVIDENCE_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hetqa/index.h"
#include "hetqa/llm.h"

namespace hetqa {

inline constexpr std::string_view kNoAnswer = "Information not available";

enum class EvidenceKind { kKb, kText, kTable, kInfobox, kLlmClaim };

std::string_view EvidenceKindName(EvidenceKind kind);
EvidenceKind ParseEvidenceKind(std::string_view name);
EvidenceKind EvidenceKindFor(PassageKind kind);

// Position of a kind in the pool: KB, TEXT, TABLE/INFOBOX, LLM_CLAIM.
int PoolRank(EvidenceKind kind);

struct EvidenceItem {
  EvidenceKind kind = EvidenceKind::kText;
  std::string text;
  std::optional<std::string> origin_id;

  bool operator==(const EvidenceItem &) const = default;
};

struct EvidencePool {
  std::vector<EvidenceItem> items;

  bool empty() const { return items.empty(); }
  size_t size() const { return items.size(); }
  bool operator==(const EvidencePool &) const = default;
};

struct FinalAnswer {
  std::string text;
  EvidencePool pool;
};

// Runs the summarization prompt over one hit. Returns nullopt when the LLM
// declares the hit irrelevant ("None") or fails.
std::optional<EvidenceItem> SummarizeHit(std::string_view question, const Hit &hit,
                                         const LlmClient &llm);

// Orders items KB, TEXT, TABLE/INFOBOX, LLM_CLAIM, keeping input order
// within a rank, and drops exact duplicate texts after their first
// occurrence.
EvidencePool Assemble(const std::optional<EvidenceItem> &kb,
                      const std::vector<EvidenceItem> &text,
                      const std::vector<EvidenceItem> &tables,
                      const std::vector<EvidenceItem> &claims);

// "KIND: text" per line, the evidence block of the fusion prompt.
std::string FormatFuseEvidence(const EvidencePool &pool);

// Generates the answer from the pool. An empty pool, an LLM failure or a
// "None" reply give kNoAnswer. The pool is returned unchanged.
FinalAnswer AnswerFromPool(std::string_view question, const EvidencePool &pool,
                           const LlmClient &llm);

struct Prediction {
  std::string question;
  std::optional<std::string> gold;
  std::string answer_generated;
  std::vector<std::pair<EvidenceKind, std::string>> evidences;

  bool operator==(const Prediction &) const = default;
};

Prediction MakePrediction(std::string_view question, std::optional<std::string> gold,
                          const FinalAnswer &answer);

// {"question", "gold"?, "answer_generated", "evidences": [[kind, text]...]}
// with 4-space indentation when indent >= 0.
std::string SerializePrediction(const Prediction &prediction, int indent = 4);
Prediction ParsePrediction(std::string_view json_text);

}  // namespace hetqa

#endif  // HETQA_EVIDENCE_H_
