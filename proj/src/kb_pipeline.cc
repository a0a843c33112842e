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

#include "hetqa/kb_pipeline.h"

#include <set>

#include <json.hpp>

#include "hetqa/errors.h"
#include "hetqa/text_util.h"

namespace hetqa {

using nlohmann::json;

namespace {

constexpr std::string_view kEntityPrefix = "http://www.wikidata.org/entity/";
constexpr std::string_view kEvidencePrefix = "Wikidata says the answer to \"";

std::optional<std::string> EntityId(const json &binding) {
  if (binding.value("type", "") != "uri") return std::nullopt;
  std::string value = binding.value("value", "");
  if (value.rfind(kEntityPrefix, 0) != 0) return std::nullopt;
  std::string id = value.substr(kEntityPrefix.size());
  if (!IsValidKbId(id)) return std::nullopt;
  return id;
}

bool EndsWithLabel(const std::string &var) {
  std::string lower = ToLower(var);
  return lower.size() >= 5 && lower.compare(lower.size() - 5, 5, "label") == 0;
}

}  // namespace

SemanticParse ParseQuery(std::string_view question, const EntitySet &entities,
                         const Endpoint &parser, std::chrono::milliseconds timeout) {
  if (Trim(question).empty()) throw ParseUnavailable("empty question");
  json ents = json::array();
  for (const LinkedEntity &e : entities.entities) {
    ents.push_back({{"surface", e.surface}, {"kb_id", e.kb_id}});
  }
  json request = {{"question", question}, {"entities", ents}};
  std::string body;
  try {
    body = PostJson(parser, "/parse", request.dump(-1, ' ', false, json::error_handler_t::replace),
                    timeout);
  } catch (const Error &e) {
    throw ParseUnavailable(e.what());
  }
  SemanticParse parse;
  try {
    json reply = json::parse(body);
    parse.raw_query = reply.at("sparql").get<std::string>();
    parse.mentions_used = reply.value("mentions", std::vector<std::string>{});
  } catch (const json::exception &e) {
    throw ParseUnavailable(std::string("malformed /parse reply: ") + e.what());
  }
  if (Trim(parse.raw_query).empty()) throw ParseUnavailable("parser returned an empty query");
  return parse;
}

std::string SubstituteEntities(const SemanticParse &parse, const EntitySet &entities) {
  auto resolve = [&](const std::string &surface) -> std::string {
    std::string wanted = ToLower(Trim(surface));
    for (const LinkedEntity &e : entities.entities) {
      if (ToLower(Trim(e.surface)) == wanted) return e.kb_id;
    }
    for (const LinkedEntity &e : entities.entities) {
      if (ToLower(Trim(e.label)) == wanted) return e.kb_id;
    }
    if (IsValidKbId(Trim(surface))) return Trim(surface);
    throw UnresolvedMention(surface);
  };
  const std::string &q = parse.raw_query;
  std::string out;
  size_t pos = 0;
  while (true) {
    size_t open = q.find(kPlaceholderOpen, pos);
    if (open == std::string::npos) break;
    size_t close = q.find('}', open + kPlaceholderOpen.size());
    if (close == std::string::npos) {
      throw UnresolvedMention(q.substr(open + kPlaceholderOpen.size()));
    }
    out.append(q, pos, open - pos);
    out += resolve(q.substr(open + kPlaceholderOpen.size(), close - open - kPlaceholderOpen.size()));
    pos = close + 1;
  }
  out.append(q, pos, std::string::npos);
  return out;
}

KbResult ParseSparqlResults(std::string_view json_text) {
  KbResult result;
  try {
    json doc = json::parse(json_text);
    if (doc.contains("boolean")) {
      result.boolean_answer = doc.at("boolean").get<bool>();
      return result;
    }
    std::vector<std::string> vars = doc.at("head").value("vars", std::vector<std::string>{});
    std::set<std::pair<std::string, std::string>> seen;
    for (const json &row : doc.at("results").at("bindings")) {
      std::string kb_id;
      std::string entity_var;
      std::string label;
      // Prefer declared variable order, fall back to the row's own keys.
      std::vector<std::string> order = vars;
      if (order.empty()) {
        for (auto it = row.begin(); it != row.end(); ++it) order.push_back(it.key());
      }
      for (const std::string &var : order) {
        if (!row.contains(var) || EndsWithLabel(var)) continue;
        if (auto id = EntityId(row.at(var))) {
          kb_id = *id;
          entity_var = var;
          break;
        }
      }
      if (!entity_var.empty()) {
        for (const std::string &candidate : {entity_var + "Label", entity_var + "label"}) {
          if (row.contains(candidate)) {
            label = row.at(candidate).value("value", "");
            break;
          }
        }
        if (label.empty()) {
          for (const std::string &var : order) {
            if (row.contains(var) && EndsWithLabel(var)) {
              label = row.at(var).value("value", "");
              break;
            }
          }
        }
        if (label.empty()) label = kb_id;
      } else {
        for (const std::string &var : order) {
          if (!row.contains(var)) continue;
          const json &b = row.at(var);
          if (b.value("type", "") == "uri") continue;
          label = b.value("value", "");
          if (!label.empty()) break;
        }
        if (label.empty()) continue;
      }
      if (!seen.emplace(kb_id, label).second) continue;
      result.kb_ids.push_back(kb_id);
      result.labels.push_back(label);
    }
  } catch (const json::exception &e) {
    throw ProtocolError(std::string("malformed SPARQL results: ") + e.what());
  }
  return result;
}

KbResult ExecuteSparql(std::string_view query, const Endpoint &endpoint,
                       std::chrono::milliseconds timeout, std::string *error) {
  try {
    HttpResponse response =
        HttpGet(endpoint, "?format=json&query=" + UrlEncode(query), timeout,
                {{"Accept", "application/sparql-results+json"},
                 {"User-Agent", "hetqa/0.1 (question answering research client)"}});
    if (response.status < 200 || response.status >= 300) {
      throw ProtocolError("SPARQL endpoint returned HTTP " + std::to_string(response.status));
    }
    return ParseSparqlResults(response.body);
  } catch (const Error &e) {
    if (error != nullptr) *error = e.what();
    return KbResult{};
  }
}

std::string FormatKbEvidence(std::string_view question, const KbResult &result) {
  std::string answer;
  if (result.boolean_answer.has_value()) {
    answer = *result.boolean_answer ? "yes" : "no";
  } else {
    answer = Join(result.labels, ", ");
  }
  return std::string(kEvidencePrefix) + std::string(question) + "\" is: " + answer + ".";
}

std::string KbAnswerSpan(std::string_view evidence_text) {
  size_t is = evidence_text.rfind("\" is: ");
  if (is == std::string_view::npos) return Trim(evidence_text);
  std::string span = Trim(evidence_text.substr(is + 6));
  if (!span.empty() && span.back() == '.') span.pop_back();
  return Trim(span);
}

}  // namespace hetqa
