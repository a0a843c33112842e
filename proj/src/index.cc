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

#include "hetqa/index.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "hetqa/errors.h"
#include "hetqa/text_util.h"

namespace hetqa {

using nlohmann::json;

std::string_view PassageKindName(PassageKind kind) {
  switch (kind) {
    case PassageKind::kText:
      return "TEXT";
    case PassageKind::kTable:
      return "TABLE";
    case PassageKind::kInfobox:
      return "INFOBOX";
  }
  return "TEXT";
}

PassageKind ParsePassageKind(std::string_view name) {
  if (name == "TEXT") return PassageKind::kText;
  if (name == "TABLE") return PassageKind::kTable;
  if (name == "INFOBOX") return PassageKind::kInfobox;
  throw InvalidArgument("unknown passage kind: " + std::string(name));
}

Passage PassageFromRecord(const LinearizedRecord &record) {
  return Passage{record.record_id, record.page_title, record.IndexText(),
                 record.kind == RecordKind::kTable ? PassageKind::kTable
                                                   : PassageKind::kInfobox};
}

Passage PassageFromJson(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception &e) {
    throw InvalidArgument(std::string("malformed passage: ") + e.what());
  }
  if (j.contains("body")) return PassageFromRecord(RecordFromJson(line));
  try {
    Passage p;
    p.doc_id = j.at("doc_id").get<std::string>();
    p.title = j.value("title", "");
    p.text = j.at("text").get<std::string>();
    p.kind = ParsePassageKind(j.value("kind", "TEXT"));
    return p;
  } catch (const json::exception &e) {
    throw InvalidArgument(std::string("malformed passage: ") + e.what());
  }
}

std::string PassageToJson(const Passage &passage) {
  nlohmann::ordered_json j;
  j["doc_id"] = passage.doc_id;
  j["title"] = passage.title;
  j["text"] = passage.text;
  j["kind"] = PassageKindName(passage.kind);
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

void SortHits(std::vector<Hit> *hits) {
  std::stable_sort(hits->begin(), hits->end(), [](const Hit &a, const Hit &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
}

Bm25Index Bm25Index::Build(std::vector<Passage> passages, Bm25Params params) {
  Bm25Index index;
  index.params_ = params;
  index.passages_ = std::move(passages);
  index.doc_len_.reserve(index.passages_.size());
  uint64_t total = 0;
  for (uint32_t doc = 0; doc < index.passages_.size(); ++doc) {
    const Passage &p = index.passages_[doc];
    if (!index.by_id_.emplace(p.doc_id, doc).second) {
      throw InvalidArgument("duplicate doc_id: " + p.doc_id);
    }
    std::unordered_map<std::string, uint32_t> tf;
    uint32_t len = 0;
    for (std::string &token : Tokenize(p.text)) {
      if (IsStopword(token)) continue;
      ++tf[std::move(token)];
      ++len;
    }
    index.doc_len_.push_back(len);
    total += len;
    for (auto &[term, count] : tf) index.postings_[term].push_back(Posting{doc, count});
  }
  index.avg_len_ = index.passages_.empty()
                       ? 0.0
                       : static_cast<double>(total) / static_cast<double>(index.passages_.size());
  return index;
}

std::vector<std::string> Bm25Index::QueryTerms(std::string_view query) const {
  std::set<std::string> unique;
  for (std::string &token : Tokenize(query)) {
    if (!IsStopword(token)) unique.insert(std::move(token));
  }
  return {unique.begin(), unique.end()};
}

double Bm25Index::TermWeight(size_t df) const {
  double n = static_cast<double>(passages_.size());
  double d = static_cast<double>(df);
  return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

double Bm25Index::TermScore(uint32_t tf, uint32_t doc) const {
  double f = tf;
  double norm = avg_len_ > 0.0 ? doc_len_[doc] / avg_len_ : 1.0;
  return f * (params_.k1 + 1.0) / (f + params_.k1 * (1.0 - params_.b + params_.b * norm));
}

std::vector<Hit> Bm25Index::Retrieve(std::string_view query, size_t k) const {
  if (k == 0) throw InvalidArgument("k must be at least 1");
  std::unordered_map<uint32_t, double> scores;
  for (const std::string &term : QueryTerms(query)) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    double idf = TermWeight(it->second.size());
    for (const Posting &p : it->second) scores[p.doc] += idf * TermScore(p.tf, p.doc);
  }
  std::vector<Hit> hits;
  hits.reserve(scores.size());
  for (const auto &[doc, score] : scores) {
    const Passage &p = passages_[doc];
    hits.push_back(Hit{p.doc_id, score, p.kind, p.text});
  }
  auto better = [](const Hit &a, const Hit &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  };
  if (hits.size() > k) {
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k), hits.end(),
                      better);
    hits.resize(k);
  } else {
    std::sort(hits.begin(), hits.end(), better);
  }
  return hits;
}

double Bm25Index::Score(std::string_view query, std::string_view doc_id) const {
  auto doc_it = by_id_.find(std::string(doc_id));
  if (doc_it == by_id_.end()) return 0.0;
  double score = 0.0;
  for (const std::string &term : QueryTerms(query)) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    for (const Posting &p : it->second) {
      if (p.doc == doc_it->second) {
        score += TermWeight(it->second.size()) * TermScore(p.tf, p.doc);
        break;
      }
    }
  }
  return score;
}

void Bm25Index::Save(const std::string &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  nlohmann::ordered_json header;
  header["format"] = "hetqa-bm25";
  header["version"] = 1;
  header["k1"] = params_.k1;
  header["b"] = params_.b;
  header["num_docs"] = passages_.size();
  out << header.dump() << '\n';
  for (const Passage &p : passages_) out << PassageToJson(p) << '\n';
  if (!out) throw InvalidArgument("failed writing " + path);
}

Bm25Index Bm25Index::Load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read index " + path);
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty index file " + path);
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception &) {
    throw InvalidArgument("not an index file: " + path);
  }
  if (header.value("format", "") != "hetqa-bm25") {
    throw InvalidArgument("not an index file: " + path);
  }
  Bm25Params params{header.value("k1", 1.2), header.value("b", 0.75)};
  std::vector<Passage> passages;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      passages.push_back(PassageFromJson(line));
    } catch (const InvalidArgument &e) {
      throw InvalidArgument(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  size_t expected = header.value("num_docs", passages.size());
  if (expected != passages.size()) {
    throw InvalidArgument("index " + path + " is truncated: expected " +
                          std::to_string(expected) + " documents, found " +
                          std::to_string(passages.size()));
  }
  return Build(std::move(passages), params);
}

std::vector<Hit> RemoteRetrieve(const Endpoint &endpoint, std::string_view collection,
                                std::string_view query, size_t k, PassageKind default_kind,
                                std::chrono::milliseconds timeout) {
  if (k == 0) throw InvalidArgument("k must be at least 1");
  json request = {{"collection", collection}, {"query", query}, {"k", k}};
  std::string body;
  try {
    body = PostJson(endpoint, "/retrieve", request.dump(), timeout);
  } catch (const TransportError &e) {
    throw RetrievalUnavailable(e.what());
  } catch (const ProtocolError &e) {  // non-2xx status
    throw RetrievalUnavailable(e.what());
  }
  std::vector<Hit> hits;
  try {
    json reply = json::parse(body);
    for (const json &h : reply.at("hits")) {
      Hit hit;
      hit.doc_id = h.at("doc_id").get<std::string>();
      hit.score = h.at("score").get<double>();
      hit.text = h.at("text").get<std::string>();
      hit.kind = h.contains("kind") ? ParsePassageKind(h.at("kind").get<std::string>())
                                    : default_kind;
      hits.push_back(std::move(hit));
    }
  } catch (const json::exception &e) {
    throw ProtocolError(std::string("malformed /retrieve reply: ") + e.what());
  } catch (const InvalidArgument &e) {
    throw ProtocolError(std::string("malformed /retrieve reply: ") + e.what());
  }
  SortHits(&hits);
  if (hits.size() > k) hits.resize(k);
  return hits;
}

}  // namespace hetqa
