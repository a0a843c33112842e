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

// Readers for page sources: MediaWiki XML dumps, a directory holding one
// wikitext file per page, or a single wikitext file.

#ifndef HETQA_DUMP_READER_H_
#define HETQA_DUMP_READER_H_

#include <cstdint>
#include <functional>
#include <istream>
#include <string>
#include <string_view>

namespace hetqa {

struct RawPage {
  std::string title;
  int64_t page_id = 0;
  std::string wikitext;
};

using PageCallback = std::function<void(RawPage &&)>;

// Streams every article page under `path` to `callback`. Directory entries
// with extension .wiki, .wikitext or .txt are read in name order and
// numbered from 1; the title is the file stem with '_' turned into spaces.
// XML dumps contribute namespace-0 pages only. Throws InvalidArgument when
// the path cannot be read. Returns the number of pages delivered.
size_t ForEachPage(const std::string &path, const PageCallback &callback);

// Streaming parser for the <page> elements of a MediaWiki export document.
size_t ReadXmlDump(std::istream &in, const PageCallback &callback);

std::string DecodeXmlEntities(std::string_view text);

}  // namespace hetqa

#endif  // HETQA_DUMP_READER_H_
