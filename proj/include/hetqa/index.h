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

// In-memory BM25 index over passages and linearized records, plus the
// client for the dense retrieval service.

#ifndef HETQA_INDEX_H_
#define HETQA_INDEX_H_

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hetqa/http_client.h"
#include "hetqa/linearize.h"

namespace hetqa {

enum class PassageKind { kText, kTable, kInfobox };

std::string_view PassageKindName(PassageKind kind);
PassageKind ParsePassageKind(std::string_view name);

struct Passage {
  std::string doc_id;
  std::string title;
  std::string text;
  PassageKind kind = PassageKind::kText;
};

Passage PassageFromRecord(const LinearizedRecord &record);

// Accepts either a passage line {"doc_id","title","text","kind"} or a
// linearized record line.
Passage PassageFromJson(std::string_view line);
std::string PassageToJson(const Passage &passage);

struct Hit {
  std::string doc_id;
  double score = 0.0;
  PassageKind kind = PassageKind::kText;
  std::string text;

  bool operator==(const Hit &) const = default;
};

// Sorts by score descending, then doc_id ascending.
void SortHits(std::vector<Hit> *hits);

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

class Bm25Index {
 public:
  Bm25Index() = default;

  // Throws InvalidArgument naming the first duplicate doc_id.
  static Bm25Index Build(std::vector<Passage> passages, Bm25Params params = {});

  // At most k hits. Queries made only of stopwords or unknown tokens yield
  // no hits. Throws InvalidArgument when k == 0.
  std::vector<Hit> Retrieve(std::string_view query, size_t k) const;

  // BM25 score of one document for a query; 0 when nothing matches.
  double Score(std::string_view query, std::string_view doc_id) const;

  size_t size() const { return passages_.size(); }
  const std::vector<Passage> &passages() const { return passages_; }
  const Bm25Params &params() const { return params_; }

  void Save(const std::string &path) const;
  static Bm25Index Load(const std::string &path);

 private:
  struct Posting {
    uint32_t doc;
    uint32_t tf;
  };

  std::vector<std::string> QueryTerms(std::string_view query) const;
  double TermWeight(size_t df) const;
  double TermScore(uint32_t tf, uint32_t doc) const;

  Bm25Params params_;
  std::vector<Passage> passages_;
  std::vector<uint32_t> doc_len_;
  double avg_len_ = 0.0;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::unordered_map<std::string, uint32_t> by_id_;
};

// Client for POST /retrieve on a dense retrieval service. Hits inherit
// `default_kind` unless the reply carries a "kind" field. Throws
// RetrievalUnavailable on transport failure and ProtocolError on malformed
// replies.
std::vector<Hit> RemoteRetrieve(const Endpoint &endpoint, std::string_view collection,
                                std::string_view query, size_t k,
                                PassageKind default_kind,
                                std::chrono::milliseconds timeout = std::chrono::seconds(15));

}  // namespace hetqa

#endif  // HETQA_INDEX_H_
