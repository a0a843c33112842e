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

// Knowledge-base path: semantic parse of the question into SPARQL through an
// external parser service, entity substitution, execution against a SPARQL
// endpoint and formatting of the answer as an evidence sentence.

#ifndef HETQA_KB_PIPELINE_H_
#define HETQA_KB_PIPELINE_H_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hetqa/entity_link.h"
#include "hetqa/http_client.h"

namespace hetqa {

// Mentions in parser output are written @{surface}; substitution turns each
// into the kb_id of the matching linked entity.
inline constexpr std::string_view kPlaceholderOpen = "@{";

struct SemanticParse {
  std::string raw_query;
  std::vector<std::string> mentions_used;
};

// POST /parse. Throws ParseUnavailable when the service cannot be reached,
// fails, replies with malformed JSON or returns an empty query.
SemanticParse ParseQuery(std::string_view question, const EntitySet &entities,
                         const Endpoint &parser,
                         std::chrono::milliseconds timeout = std::chrono::seconds(15));

// Replaces every @{surface} with the kb_id of the entity whose surface (or
// else label) matches case-insensitively. Throws UnresolvedMention.
std::string SubstituteEntities(const SemanticParse &parse, const EntitySet &entities);

// kb_ids and labels are aligned. A literal answer (a date or number) has an
// empty kb_id and the literal as its label.
struct KbResult {
  std::vector<std::string> kb_ids;
  std::vector<std::string> labels;
  std::optional<bool> boolean_answer;

  bool empty() const { return labels.empty() && !boolean_answer.has_value(); }
  bool operator==(const KbResult &) const = default;
};

// Maps a SPARQL 1.1 JSON results document. Throws ProtocolError.
KbResult ParseSparqlResults(std::string_view json_text);

// Runs the query with GET ?query=...; failures yield an empty result and,
// when `error` is given, a description of what went wrong.
KbResult ExecuteSparql(std::string_view query, const Endpoint &endpoint,
                       std::chrono::milliseconds timeout = std::chrono::seconds(15),
                       std::string *error = nullptr);

// `Wikidata says the answer to "<question>" is: <answer>.`
std::string FormatKbEvidence(std::string_view question, const KbResult &result);

// Text after "is: " in a KB evidence sentence, without the final period.
std::string KbAnswerSpan(std::string_view evidence_text);

}  // namespace hetqa

#endif  // HETQA_KB_PIPELINE_H_
