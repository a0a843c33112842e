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

#include "hetqa/triplets.h"

#include <istream>
#include <ostream>
#include <limits>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "hetqa/errors.h"

namespace hetqa {
namespace {

// Uniform integer in [0, n) by rejection, so the sequence depends only on
// the engine and not on the standard library's distribution code.
uint64_t UniformBelow(std::mt19937_64 &rng, uint64_t n) {
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % n;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

std::string SanitizeField(const std::string &s) {
  std::string out = s;
  for (char &c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

}  // namespace

std::vector<TrainingTriplet> GenerateTriplets(const std::vector<PositivePair> &positives,
                                              const std::vector<std::string> &pool,
                                              size_t num_negatives, uint64_t seed) {
  std::vector<std::string> ids;
  std::unordered_map<std::string, size_t> position;
  for (const std::string &id : pool) {
    if (position.emplace(id, ids.size()).second) ids.push_back(id);
  }
  if (ids.size() <= num_negatives) {
    throw InvalidArgument("negative pool too small: need at least " +
                          std::to_string(num_negatives + 1) + " distinct ids, have " +
                          std::to_string(ids.size()) + " (short by " +
                          std::to_string(num_negatives + 1 - ids.size()) + ")");
  }
  for (const PositivePair &p : positives) {
    if (position.count(p.positive_id) == 0) {
      throw InvalidArgument("positive id not in pool: " + p.positive_id);
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<TrainingTriplet> out;
  out.reserve(positives.size() * num_negatives);
  std::unordered_set<size_t> chosen;
  for (const PositivePair &p : positives) {
    const size_t excluded = position.at(p.positive_id);
    chosen.clear();
    while (chosen.size() < num_negatives) {
      size_t pick = static_cast<size_t>(UniformBelow(rng, ids.size()));
      if (pick == excluded || !chosen.insert(pick).second) continue;
      out.push_back(TrainingTriplet{p.query, p.positive_id, ids[pick]});
    }
  }
  return out;
}

void WriteTripletsTsv(const std::vector<TrainingTriplet> &triplets, std::ostream &out) {
  for (const TrainingTriplet &t : triplets) {
    out << SanitizeField(t.query) << '\t' << t.positive_id << '\t' << t.negative_id << '\n';
  }
}

std::vector<PositivePair> ReadPositivesTsv(std::istream &in) {
  std::vector<PositivePair> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw InvalidArgument("positives line " + std::to_string(line_no) +
                            ": expected 'query<TAB>positive_id'");
    }
    out.push_back(PositivePair{line.substr(0, tab), line.substr(tab + 1)});
  }
  return out;
}

}  // namespace hetqa
