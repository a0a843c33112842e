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

#include "hetqa/dump_reader.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "hetqa/errors.h"
#include "hetqa/text_util.h"

namespace hetqa {
namespace fs = std::filesystem;

namespace {

// Text between <tag ...> and </tag> on a single line; nullopt otherwise.
std::optional<std::string> InlineElement(const std::string &line, std::string_view tag) {
  std::string open = "<" + std::string(tag);
  size_t start = line.find(open);
  if (start == std::string::npos) return std::nullopt;
  size_t gt = line.find('>', start);
  if (gt == std::string::npos) return std::nullopt;
  std::string close = "</" + std::string(tag) + ">";
  size_t end = line.find(close, gt);
  if (end == std::string::npos) return std::nullopt;
  return line.substr(gt + 1, end - gt - 1);
}

bool ReadFile(const fs::path &path, std::string *out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  *out = ss.str();
  return true;
}

}  // namespace

std::string DecodeXmlEntities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out.push_back(text[i++]);
      continue;
    }
    size_t semi = text.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(text[i++]);
      continue;
    }
    std::string_view name = text.substr(i + 1, semi - i - 1);
    if (name == "lt") {
      out.push_back('<');
    } else if (name == "gt") {
      out.push_back('>');
    } else if (name == "amp") {
      out.push_back('&');
    } else if (name == "quot") {
      out.push_back('"');
    } else if (name == "apos") {
      out.push_back('\'');
    } else if (!name.empty() && name[0] == '#') {
      char32_t cp = 0;
      try {
        cp = (name.size() > 1 && name[1] == 'x')
                 ? static_cast<char32_t>(std::stoul(std::string(name.substr(2)), nullptr, 16))
                 : static_cast<char32_t>(std::stoul(std::string(name.substr(1))));
      } catch (...) {
        out.push_back(text[i++]);
        continue;
      }
      out += EncodeUtf8(std::u32string(1, cp));
    } else {
      out.push_back(text[i++]);
      continue;
    }
    i = semi + 1;
  }
  return out;
}

size_t ReadXmlDump(std::istream &in, const PageCallback &callback) {
  size_t count = 0;
  std::string line;
  bool in_page = false;
  bool in_revision = false;
  bool in_text = false;
  bool have_id = false;
  std::string ns;
  RawPage page;
  std::string text;

  while (std::getline(in, line)) {
    if (in_text) {
      size_t end = line.find("</text>");
      if (end == std::string::npos) {
        text += line;
        text.push_back('\n');
        continue;
      }
      text += line.substr(0, end);
      in_text = false;
      page.wikitext = DecodeXmlEntities(text);
      continue;
    }
    if (line.find("<page>") != std::string::npos || line.find("<page ") != std::string::npos) {
      in_page = true;
      in_revision = false;
      have_id = false;
      ns.clear();
      page = RawPage{};
      continue;
    }
    if (!in_page) continue;
    if (line.find("</page>") != std::string::npos) {
      in_page = false;
      if (ns.empty() || ns == "0") {
        callback(std::move(page));
        ++count;
      }
      continue;
    }
    if (line.find("<revision") != std::string::npos) in_revision = true;
    if (auto title = InlineElement(line, "title")) {
      page.title = DecodeXmlEntities(*title);
    } else if (auto n = InlineElement(line, "ns")) {
      ns = Trim(*n);
    } else if (auto id = InlineElement(line, "id"); id && !have_id && !in_revision) {
      try {
        page.page_id = std::stoll(*id);
        have_id = true;
      } catch (...) {
      }
    } else if (size_t open = line.find("<text"); open != std::string::npos) {
      size_t gt = line.find('>', open);
      if (gt == std::string::npos) continue;
      if (line[gt - 1] == '/') {
        page.wikitext.clear();
        continue;
      }
      size_t end = line.find("</text>", gt);
      if (end != std::string::npos) {
        page.wikitext = DecodeXmlEntities(line.substr(gt + 1, end - gt - 1));
      } else {
        text = line.substr(gt + 1);
        text.push_back('\n');
        in_text = true;
      }
    }
  }
  return count;
}

size_t ForEachPage(const std::string &path, const PageCallback &callback) {
  std::error_code ec;
  fs::path p(path);
  if (fs::is_directory(p, ec)) {
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(p, ec)) {
      if (!entry.is_regular_file()) continue;
      std::string ext = entry.path().extension().string();
      if (ext == ".wiki" || ext == ".wikitext" || ext == ".txt") files.push_back(entry.path());
    }
    if (ec) throw InvalidArgument("cannot list directory " + path + ": " + ec.message());
    std::sort(files.begin(), files.end());
    int64_t id = 0;
    for (const auto &file : files) {
      RawPage page;
      if (!ReadFile(file, &page.wikitext)) {
        throw InvalidArgument("cannot read " + file.string());
      }
      page.page_id = ++id;
      page.title = file.stem().string();
      std::replace(page.title.begin(), page.title.end(), '_', ' ');
      callback(std::move(page));
    }
    return files.size();
  }
  std::ifstream in(p, std::ios::binary);
  if (!in || !fs::is_regular_file(p, ec)) throw InvalidArgument("cannot read " + path);
  // Sniff the first non-blank character: XML dumps open with '<'.
  char first = 0;
  while (in.get(first) && (first == ' ' || first == '\n' || first == '\r' || first == '\t')) {
  }
  if (!in) return 0;  // empty file
  in.unget();
  if (first == '<') return ReadXmlDump(in, callback);
  RawPage page;
  std::ostringstream ss;
  ss << in.rdbuf();
  page.wikitext = ss.str();
  page.page_id = 1;
  page.title = p.stem().string();
  std::replace(page.title.begin(), page.title.end(), '_', ' ');
  callback(std::move(page));
  return 1;
}

}  // namespace hetqa
