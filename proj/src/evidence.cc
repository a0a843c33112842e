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

#include "hetqa/evidence.h"

#include <algorithm>
#include <unordered_set>

#include <json.hpp>

#include "hetqa/errors.h"
#include "hetqa/text_util.h"

namespace hetqa {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view EvidenceKindName(EvidenceKind kind) {
  switch (kind) {
    case EvidenceKind::kKb:
      return "KB";
    case EvidenceKind::kText:
      return "TEXT";
    case EvidenceKind::kTable:
      return "TABLE";
    case EvidenceKind::kInfobox:
      return "INFOBOX";
    case EvidenceKind::kLlmClaim:
      return "LLM_CLAIM";
  }
  return "TEXT";
}

EvidenceKind ParseEvidenceKind(std::string_view name) {
  if (name == "KB") return EvidenceKind::kKb;
  if (name == "TEXT") return EvidenceKind::kText;
  if (name == "TABLE") return EvidenceKind::kTable;
  if (name == "INFOBOX") return EvidenceKind::kInfobox;
  if (name == "LLM_CLAIM") return EvidenceKind::kLlmClaim;
  throw InvalidArgument("unknown evidence kind: " + std::string(name));
}

EvidenceKind EvidenceKindFor(PassageKind kind) {
  switch (kind) {
    case PassageKind::kText:
      return EvidenceKind::kText;
    case PassageKind::kTable:
      return EvidenceKind::kTable;
    case PassageKind::kInfobox:
      return EvidenceKind::kInfobox;
  }
  return EvidenceKind::kText;
}

int PoolRank(EvidenceKind kind) {
  switch (kind) {
    case EvidenceKind::kKb:
      return 0;
    case EvidenceKind::kText:
      return 1;
    case EvidenceKind::kTable:
    case EvidenceKind::kInfobox:
      return 2;
    case EvidenceKind::kLlmClaim:
      return 3;
  }
  return 3;
}

std::optional<EvidenceItem> SummarizeHit(std::string_view question, const Hit &hit,
                                         const LlmClient &llm) {
  std::string reply;
  try {
    reply = llm.Run(stage::kSummarize, {{"question", std::string(question)},
                                        {"title", hit.doc_id},
                                        {"passage", hit.text}});
  } catch (const BackendUnavailable &) {
    return std::nullopt;
  }
  if (IsNoneReply(reply)) return std::nullopt;
  std::string text = CollapseWhitespace(reply);
  if (text.empty()) return std::nullopt;
  return EvidenceItem{EvidenceKindFor(hit.kind), std::move(text), hit.doc_id};
}

EvidencePool Assemble(const std::optional<EvidenceItem> &kb,
                      const std::vector<EvidenceItem> &text,
                      const std::vector<EvidenceItem> &tables,
                      const std::vector<EvidenceItem> &claims) {
  std::vector<EvidenceItem> all;
  if (kb) all.push_back(*kb);
  all.insert(all.end(), text.begin(), text.end());
  all.insert(all.end(), tables.begin(), tables.end());
  all.insert(all.end(), claims.begin(), claims.end());
  std::stable_sort(all.begin(), all.end(), [](const EvidenceItem &a, const EvidenceItem &b) {
    return PoolRank(a.kind) < PoolRank(b.kind);
  });
  EvidencePool pool;
  std::unordered_set<std::string> seen;
  for (EvidenceItem &item : all) {
    if (item.text.empty()) continue;
    if (!seen.insert(item.text).second) continue;
    pool.items.push_back(std::move(item));
  }
  return pool;
}

std::string FormatFuseEvidence(const EvidencePool &pool) {
  std::string out;
  for (const EvidenceItem &item : pool.items) {
    out.append(EvidenceKindName(item.kind));
    out.append(": ");
    out.append(item.text);
    out.push_back('\n');
  }
  if (!out.empty()) out.pop_back();
  return out;
}

FinalAnswer AnswerFromPool(std::string_view question, const EvidencePool &pool,
                           const LlmClient &llm) {
  FinalAnswer answer{std::string(kNoAnswer), pool};
  if (pool.empty()) return answer;
  std::string reply;
  try {
    reply = llm.Run(stage::kFuse, {{"question", std::string(question)},
                                   {"evidence", FormatFuseEvidence(pool)}});
  } catch (const BackendUnavailable &) {
    return answer;
  }
  std::string first_line = Trim(reply.substr(0, reply.find('\n')));
  if (!IsNoneReply(first_line)) answer.text = first_line;
  return answer;
}

Prediction MakePrediction(std::string_view question, std::optional<std::string> gold,
                          const FinalAnswer &answer) {
  Prediction p;
  p.question = std::string(question);
  p.gold = std::move(gold);
  p.answer_generated = answer.text;
  for (const EvidenceItem &item : answer.pool.items) p.evidences.emplace_back(item.kind, item.text);
  return p;
}

std::string SerializePrediction(const Prediction &prediction, int indent) {
  ordered_json j;
  j["question"] = prediction.question;
  if (prediction.gold) j["gold"] = *prediction.gold;
  j["answer_generated"] = prediction.answer_generated;
  ordered_json evidences = ordered_json::array();
  for (const auto &[kind, text] : prediction.evidences) {
    evidences.push_back(ordered_json::array({EvidenceKindName(kind), text}));
  }
  j["evidences"] = std::move(evidences);
  return j.dump(indent, ' ', false, json::error_handler_t::replace);
}

Prediction ParsePrediction(std::string_view json_text) {
  try {
    json j = json::parse(json_text);
    Prediction p;
    p.question = j.at("question").get<std::string>();
    if (j.contains("gold") && !j.at("gold").is_null()) p.gold = j.at("gold").get<std::string>();
    p.answer_generated = j.at("answer_generated").get<std::string>();
    for (const json &e : j.value("evidences", json::array())) {
      if (!e.is_array() || e.size() != 2) throw InvalidArgument("evidence must be [kind, text]");
      p.evidences.emplace_back(ParseEvidenceKind(e[0].get<std::string>()),
                               e[1].get<std::string>());
    }
    return p;
  } catch (const json::exception &e) {
    throw InvalidArgument(std::string("malformed prediction: ") + e.what());
  }
}

}  // namespace hetqa
