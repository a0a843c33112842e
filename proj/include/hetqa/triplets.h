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

// Retriever training triplets: each (query, positive) pair is expanded with
// negatives drawn uniformly without replacement from a document pool.

#ifndef HETQA_TRIPLETS_H_
#define HETQA_TRIPLETS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace hetqa {

struct TrainingTriplet {
  std::string query;
  std::string positive_id;
  std::string negative_id;

  bool operator==(const TrainingTriplet &) const = default;
};

struct PositivePair {
  std::string query;
  std::string positive_id;
};

// Returns exactly `num_negatives` triplets per positive, in input order.
// The pool is deduplicated first. Throws InvalidArgument when the pool has
// too few distinct ids or a positive is missing from it.
std::vector<TrainingTriplet> GenerateTriplets(const std::vector<PositivePair> &positives,
                                              const std::vector<std::string> &pool,
                                              size_t num_negatives = 10, uint64_t seed = 0);

// TSV: query \t positive_id \t negative_id. Tabs and newlines inside the
// query are replaced by spaces.
void WriteTripletsTsv(const std::vector<TrainingTriplet> &triplets, std::ostream &out);

// Reads "query \t positive_id" lines.
std::vector<PositivePair> ReadPositivesTsv(std::istream &in);

}  // namespace hetqa

#endif  // HETQA_TRIPLETS_H_
