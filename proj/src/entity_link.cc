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

#include "hetqa/entity_link.h"

#include <regex>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "hetqa/errors.h"
#include "hetqa/text_util.h"

namespace hetqa {

using nlohmann::json;

std::string_view EntityModeName(EntityMode mode) {
  switch (mode) {
    case EntityMode::kLinkerOnly:
      return "LINKER_ONLY";
    case EntityMode::kLlmEnriched:
      return "LLM_ENRICHED";
    case EntityMode::kOracle:
      return "ORACLE";
  }
  return "LINKER_ONLY";
}

EntityMode ParseEntityMode(std::string_view name) {
  std::string n = ToLower(name);
  if (n == "linker_only" || n == "linker") return EntityMode::kLinkerOnly;
  if (n == "llm_enriched" || n == "enriched") return EntityMode::kLlmEnriched;
  if (n == "oracle") return EntityMode::kOracle;
  throw InvalidArgument("unknown entity mode: " + std::string(name));
}

const LinkedEntity *EntitySet::Find(std::string_view kb_id) const {
  for (const LinkedEntity &e : entities) {
    if (e.kb_id == kb_id) return &e;
  }
  return nullptr;
}

bool IsValidKbId(std::string_view kb_id) {
  if (kb_id.size() < 2 || kb_id[0] != 'Q') return false;
  for (size_t i = 1; i < kb_id.size(); ++i) {
    if (kb_id[i] < '0' || kb_id[i] > '9') return false;
  }
  return true;
}

std::vector<Mention> ParseMentionReply(std::string_view reply) {
  static const std::regex kLine(R"(^\s*\d+\s*[.)]\s*(.+?)\s+is\s+(.+?)\s*$)");
  std::vector<Mention> mentions;
  std::istringstream in{std::string(reply)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::smatch m;
    if (!std::regex_match(line, m, kLine)) continue;
    std::string surface = Trim(m[1].str());
    std::vector<std::string> words = SplitWords(m[2].str());
    if (surface.empty() || words.empty()) continue;
    if (words.size() > kMaxDescriptionWords) words.resize(kMaxDescriptionWords);
    mentions.push_back(Mention{surface, Join(words, " ")});
  }
  return mentions;
}

std::vector<Mention> DetectMentions(std::string_view query, const LlmClient &llm) {
  if (Trim(query).empty()) return {};
  std::string reply;
  try {
    reply = llm.Run(stage::kEntityDetection, {{"question", std::string(query)}});
  } catch (const BackendUnavailable &e) {
    throw EntityDetectionUnavailable(e.what());
  }
  return ParseMentionReply(reply);
}

std::string HintedText(std::string_view query, const std::vector<Mention> &mentions) {
  std::string text(query);
  for (const Mention &m : mentions) text += "; " + m.surface + " is " + m.description;
  return text;
}

EntitySet Deduplicate(std::vector<LinkedEntity> entities, EntityMode mode) {
  EntitySet set;
  set.mode = mode;
  std::unordered_map<std::string, size_t> slot;
  for (LinkedEntity &e : entities) {
    auto [it, inserted] = slot.emplace(e.kb_id, set.entities.size());
    if (inserted) {
      set.entities.push_back(std::move(e));
    } else if (e.score > set.entities[it->second].score) {
      set.entities[it->second] = std::move(e);
    }
  }
  return set;
}

EntitySet Link(std::string_view query, const std::vector<Mention> &mentions,
               const Endpoint &linker, std::chrono::milliseconds timeout) {
  EntityMode mode = mentions.empty() ? EntityMode::kLinkerOnly : EntityMode::kLlmEnriched;
  if (Trim(query).empty()) return EntitySet{{}, mode};
  json hints = json::array();
  for (const Mention &m : mentions) {
    hints.push_back({{"surface", m.surface}, {"description", m.description}});
  }
  json request = {{"text", HintedText(query, mentions)}, {"hints", hints}};
  std::string body;
  try {
    body = PostJson(linker, "/link", request.dump(-1, ' ', false, json::error_handler_t::replace),
                    timeout);
  } catch (const TransportError &e) {
    throw LinkerUnavailable(e.what());
  } catch (const ProtocolError &e) {  // non-2xx status
    throw LinkerUnavailable(e.what());
  }
  std::vector<LinkedEntity> entities;
  try {
    json reply = json::parse(body);
    for (const json &e : reply.at("entities")) {
      LinkedEntity entity{e.at("surface").get<std::string>(), e.at("kb_id").get<std::string>(),
                          e.value("label", ""), e.at("score").get<double>()};
      if (!IsValidKbId(entity.kb_id) || !(entity.score >= 0.0 && entity.score <= 1.0)) continue;
      if (entity.label.empty()) entity.label = entity.surface;
      entities.push_back(std::move(entity));
    }
  } catch (const json::exception &e) {
    throw ProtocolError(std::string("malformed /link reply: ") + e.what());
  }
  return Deduplicate(std::move(entities), mode);
}

EntitySet Merge(const EntitySet &base, const EntitySet &enriched) {
  EntitySet out;
  out.mode = EntityMode::kLlmEnriched;
  out.entities = base.entities;
  std::unordered_map<std::string, size_t> slot;
  for (size_t i = 0; i < out.entities.size(); ++i) slot.emplace(out.entities[i].kb_id, i);
  for (const LinkedEntity &e : enriched.entities) {
    auto it = slot.find(e.kb_id);
    if (it != slot.end()) {
      out.entities[it->second] = e;
    } else {
      slot.emplace(e.kb_id, out.entities.size());
      out.entities.push_back(e);
    }
  }
  return out;
}

EntityResolution ResolveEntities(std::string_view question, EntityMode mode,
                                 const std::vector<LinkedEntity> &oracle_entities,
                                 const LlmClient &llm, const Endpoint &linker,
                                 std::chrono::milliseconds timeout) {
  EntityResolution result;
  if (mode == EntityMode::kOracle) {
    result.entities.entities = oracle_entities;
    result.entities.mode = EntityMode::kOracle;
    return result;
  }
  std::vector<Mention> mentions;
  if (mode == EntityMode::kLlmEnriched) {
    try {
      mentions = DetectMentions(question, llm);
    } catch (const Error &e) {
      result.failures.push_back(std::string("entity detection: ") + e.what());
    }
  }
  EntitySet base;
  bool have_base = false;
  try {
    base = Link(question, {}, linker, timeout);
    have_base = true;
  } catch (const Error &e) {
    result.failures.push_back(std::string("entity linker: ") + e.what());
    result.entities = EntitySet{{}, EntityMode::kLinkerOnly};
    return result;
  }
  if (mentions.empty()) {
    result.entities = std::move(base);
    return result;
  }
  try {
    result.entities = Merge(base, Link(question, mentions, linker, timeout));
  } catch (const Error &e) {
    result.failures.push_back(std::string("entity linker (hinted): ") + e.what());
    if (have_base) result.entities = std::move(base);
  }
  return result;
}

}  // namespace hetqa
