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

// Flattening of tables and infoboxes into retrieval-ready text records.
//
// A table row becomes `column: cell, column: cell.<tr>`; "<tr>" terminates
// every row including the last. Empty cells are left out of their row and
// rows without any content are dropped.

#ifndef HETQA_LINEARIZE_H_
#define HETQA_LINEARIZE_H_

#include <string>
#include <string_view>
#include <vector>

#include "hetqa/wikitext.h"

namespace hetqa {

enum class RecordKind { kTable, kInfobox };

std::string_view RecordKindName(RecordKind kind);

struct LinearizedRecord {
  std::string record_id;
  std::string page_title;
  std::string section_title;
  std::vector<std::string> context_before;
  std::vector<std::string> context_after;
  std::string body;
  RecordKind kind = RecordKind::kTable;
  bool skip = false;  // nothing to index; never written out

  // Text handed to the retriever: context, then body, then context.
  std::string IndexText() const;

  bool operator==(const LinearizedRecord &) const = default;
};

LinearizedRecord LinearizeTable(const RawTable &table, std::string_view page_title,
                                std::string_view section_title,
                                const Context &context);

LinearizedRecord LinearizeInfobox(const Infobox &box, std::string_view page_title);

// All table and infobox records of a page, in document order, with ids of
// the form "<page_id>:table:<n>" and "<page_id>:infobox:<n>". Skipped
// records are included and flagged.
std::vector<LinearizedRecord> ExtractRecords(const WikiPage &page);

// One JSON object per line with the fields of LinearizedRecord (skip is not
// serialized).
std::string RecordToJson(const LinearizedRecord &record);
LinearizedRecord RecordFromJson(std::string_view line);

}  // namespace hetqa

#endif  // HETQA_LINEARIZE_H_
