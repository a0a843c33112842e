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

// Wikitext parsing: sections, prose sentences, tables and infoboxes.
//
// The parser is lenient. Markup it cannot make sense of is skipped and
// counted in ParseDiagnostics; a page never fails to parse.

#ifndef HETQA_WIKITEXT_H_
#define HETQA_WIKITEXT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hetqa {

using Grid = std::vector<std::vector<std::string>>;

struct ByteSpan {
  size_t begin = 0;
  size_t end = 0;
};

// One cell of a table row before span expansion.
struct RawCell {
  std::string text;
  int colspan = 1;
  int rowspan = 1;
  bool header = false;
};

using RawRow = std::vector<RawCell>;

struct RawTable {
  std::optional<std::string> caption;
  std::vector<std::string> header;  // one name per column, never empty
  Grid grid;                        // data rows, rectangular
  ByteSpan source_span;
  size_t position = 0;  // number of section sentences preceding the table
};

struct Infobox {
  std::string template_name;
  std::vector<std::pair<std::string, std::string>> pairs;
  size_t position = 0;
};

struct Section {
  std::vector<std::string> heading_path;
  std::vector<std::string> sentences;
  std::vector<RawTable> tables;
  std::vector<Infobox> infoboxes;

  // Innermost heading, or "" for the lead section.
  std::string Title() const;
};

struct WikiPage {
  std::string title;
  int64_t page_id = 0;
  std::vector<Section> sections;
};

struct ParseDiagnostics {
  int malformed = 0;      // unbalanced templates/links, unterminated tables
  int clipped_spans = 0;  // row/col spans cut at the table boundary
};

struct Context {
  std::vector<std::string> before;
  std::vector<std::string> after;
};

enum class TemplateMode {
  kKeepUnknown,  // unknown templates survive as their raw inner text
  kDropUnknown,  // unknown templates are removed
};

// Strips links, formatting, references, HTML and templates from a fragment
// of wikitext and collapses whitespace.
std::string CleanMarkup(std::string_view wikitext, TemplateMode mode,
                        ParseDiagnostics *diagnostics = nullptr);

WikiPage ParsePage(std::string_view wikitext, std::string title,
                   int64_t page_id, ParseDiagnostics *diagnostics = nullptr);

// Lays out cells with colspan/rowspan onto a rectangular grid, copying the
// text of a spanning cell into every position it covers. Rowspans running
// past the last row are clipped.
Grid ExpandSpans(const std::vector<RawRow> &rows,
                 ParseDiagnostics *diagnostics = nullptr);

// Up to two sentences on either side of `position` within the section.
// Throws InvalidArgument when position > sentences.size().
Context AttachContext(const Section &section, size_t position);

}  // namespace hetqa

#endif  // HETQA_WIKITEXT_H_
