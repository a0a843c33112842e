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

// Entity mention detection with LLM-written descriptions, linking through an
// external entity-linker service, and merging of linker outputs.

#ifndef HETQA_ENTITY_LINK_H_
#define HETQA_ENTITY_LINK_H_

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

#include "hetqa/http_client.h"
#include "hetqa/llm.h"

namespace hetqa {

inline constexpr size_t kMaxDescriptionWords = 10;

struct Mention {
  std::string surface;
  std::string description;  // at most kMaxDescriptionWords words

  bool operator==(const Mention &) const = default;
};

struct LinkedEntity {
  std::string surface;
  std::string kb_id;  // Q[0-9]+
  std::string label;
  double score = 0.0;  // [0, 1]

  bool operator==(const LinkedEntity &) const = default;
};

enum class EntityMode { kLinkerOnly, kLlmEnriched, kOracle };

std::string_view EntityModeName(EntityMode mode);
EntityMode ParseEntityMode(std::string_view name);

struct EntitySet {
  std::vector<LinkedEntity> entities;  // kb_ids are unique
  EntityMode mode = EntityMode::kLinkerOnly;

  bool empty() const { return entities.empty(); }
  size_t size() const { return entities.size(); }
  const LinkedEntity *Find(std::string_view kb_id) const;
};

bool IsValidKbId(std::string_view kb_id);

// Parses "N. <surface> is <description>" lines. Lines that do not fit are
// dropped; descriptions longer than ten words are cut.
std::vector<Mention> ParseMentionReply(std::string_view reply);

// Runs the entity-detection prompt. Returns nothing for an empty query.
// Throws EntityDetectionUnavailable when the LLM fails.
std::vector<Mention> DetectMentions(std::string_view query, const LlmClient &llm);

// Query text with "; <surface> is <description>" appended per mention.
std::string HintedText(std::string_view query, const std::vector<Mention> &mentions);

// Keeps one entity per kb_id (highest score, first on ties) in order of
// first appearance.
EntitySet Deduplicate(std::vector<LinkedEntity> entities, EntityMode mode);

// POST /link. With mentions the request carries hints and the mode is
// LLM_ENRICHED, otherwise LINKER_ONLY. Entities with an invalid kb_id or
// score are dropped. Throws LinkerUnavailable on transport failure and
// ProtocolError on malformed replies.
EntitySet Link(std::string_view query, const std::vector<Mention> &mentions,
               const Endpoint &linker,
               std::chrono::milliseconds timeout = std::chrono::seconds(15));

// Union by kb_id; the enriched entry replaces a base entry with the same id.
EntitySet Merge(const EntitySet &base, const EntitySet &enriched);

struct EntityResolution {
  EntitySet entities;
  std::vector<std::string> failures;  // degraded steps, for diagnostics
};

// Produces the entity set for a question in the requested mode, falling
// back LLM_ENRICHED -> LINKER_ONLY -> empty. Never throws for service
// failures.
EntityResolution ResolveEntities(std::string_view question, EntityMode mode,
                                 const std::vector<LinkedEntity> &oracle_entities,
                                 const LlmClient &llm, const Endpoint &linker,
                                 std::chrono::milliseconds timeout = std::chrono::seconds(15));

}  // namespace hetqa

#endif  // HETQA_ENTITY_LINK_H_
