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

#include "hetqa/linearize.h"

#include <json.hpp>

#include "hetqa/errors.h"
#include "hetqa/text_util.h"

namespace hetqa {
namespace {

constexpr std::string_view kRowTerminator = ".<tr>";

std::string Prefix(std::initializer_list<std::string_view> parts) {
  std::string out;
  for (std::string_view p : parts) {
    if (p.empty()) continue;
    out.append(p);
    out.append(" ; ");
  }
  return out;
}

}  // namespace

std::string_view RecordKindName(RecordKind kind) {
  return kind == RecordKind::kTable ? "TABLE" : "INFOBOX";
}

std::string LinearizedRecord::IndexText() const {
  std::vector<std::string> parts;
  for (const auto &s : context_before) parts.push_back(s);
  parts.push_back(body);
  for (const auto &s : context_after) parts.push_back(s);
  return Join(parts, " ");
}

LinearizedRecord LinearizeTable(const RawTable &table, std::string_view page_title,
                                std::string_view section_title,
                                const Context &context) {
  LinearizedRecord record;
  record.kind = RecordKind::kTable;
  record.page_title = std::string(page_title);
  record.section_title = std::string(section_title);
  record.context_before = context.before;
  record.context_after = context.after;

  std::vector<std::string> rows;
  for (const auto &row : table.grid) {
    std::vector<std::string> pairs;
    for (size_t c = 0; c < row.size(); ++c) {
      if (row[c].empty()) continue;
      std::string name = c < table.header.size() ? table.header[c]
                                                 : "col_" + std::to_string(c + 1);
      pairs.push_back(name + ": " + row[c]);
    }
    if (pairs.empty()) continue;
    rows.push_back(Join(pairs, ", ") + std::string(kRowTerminator));
  }
  if (rows.empty()) {
    record.skip = true;
    return record;
  }
  record.body = Prefix({section_title, table.caption.value_or("")}) + Join(rows, " ");
  return record;
}

LinearizedRecord LinearizeInfobox(const Infobox &box, std::string_view page_title) {
  LinearizedRecord record;
  record.kind = RecordKind::kInfobox;
  record.page_title = std::string(page_title);
  std::vector<std::string> pairs;
  for (const auto &[key, value] : box.pairs) {
    if (!value.empty()) pairs.push_back(key + ": " + value);
  }
  if (pairs.empty()) {
    record.skip = true;
    return record;
  }
  record.body = Prefix({page_title}) + Join(pairs, ", ") + std::string(kRowTerminator);
  return record;
}

std::vector<LinearizedRecord> ExtractRecords(const WikiPage &page) {
  std::vector<LinearizedRecord> records;
  int tables = 0;
  int infoboxes = 0;
  const std::string id_prefix = std::to_string(page.page_id) + ":";
  for (const Section &section : page.sections) {
    // Interleave by position so records follow document order.
    size_t t = 0;
    size_t b = 0;
    while (t < section.tables.size() || b < section.infoboxes.size()) {
      bool take_box = t == section.tables.size() ||
                      (b < section.infoboxes.size() &&
                       section.infoboxes[b].position <= section.tables[t].position);
      if (take_box) {
        LinearizedRecord r = LinearizeInfobox(section.infoboxes[b++], page.title);
        r.section_title = section.Title();
        r.record_id = id_prefix + "infobox:" + std::to_string(infoboxes++);
        records.push_back(std::move(r));
      } else {
        const RawTable &table = section.tables[t++];
        LinearizedRecord r = LinearizeTable(table, page.title, section.Title(),
                                            AttachContext(section, table.position));
        r.record_id = id_prefix + "table:" + std::to_string(tables++);
        records.push_back(std::move(r));
      }
    }
  }
  return records;
}

std::string RecordToJson(const LinearizedRecord &record) {
  nlohmann::ordered_json j;
  j["record_id"] = record.record_id;
  j["page_title"] = record.page_title;
  j["section_title"] = record.section_title;
  j["context_before"] = record.context_before;
  j["context_after"] = record.context_after;
  j["body"] = record.body;
  j["kind"] = RecordKindName(record.kind);
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

LinearizedRecord RecordFromJson(std::string_view line) {
  try {
    auto j = nlohmann::json::parse(line);
    LinearizedRecord r;
    r.record_id = j.at("record_id").get<std::string>();
    r.page_title = j.at("page_title").get<std::string>();
    r.section_title = j.value("section_title", "");
    r.context_before = j.value("context_before", std::vector<std::string>{});
    r.context_after = j.value("context_after", std::vector<std::string>{});
    r.body = j.at("body").get<std::string>();
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "TABLE") {
      r.kind = RecordKind::kTable;
    } else if (kind == "INFOBOX") {
      r.kind = RecordKind::kInfobox;
    } else {
      throw InvalidArgument("unknown record kind: " + kind);
    }
    return r;
  } catch (const nlohmann::json::exception &e) {
    throw InvalidArgument(std::string("malformed record: ") + e.what());
  }
}

}  // namespace hetqa
