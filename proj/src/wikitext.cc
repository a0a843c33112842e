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

#include "hetqa/wikitext.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <set>
#include <unordered_map>

#include "hetqa/errors.h"
#include "hetqa/text_util.h"

namespace hetqa {
namespace {

// Private-use code points bracketing text that must survive whitespace
// trimming verbatim (raw unknown templates).
constexpr std::string_view kVerbatimOpen = "\xEE\x80\x80";   // U+E000
constexpr std::string_view kVerbatimClose = "\xEE\x80\x81";  // U+E001

constexpr int kMaxColspan = 1000;

bool StartsWithAt(std::string_view s, size_t pos, std::string_view prefix) {
  return s.size() >= pos + prefix.size() &&
         s.compare(pos, prefix.size(), prefix) == 0;
}

bool IEquals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

bool IStartsWith(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && IEquals(s.substr(0, prefix.size()), prefix);
}

// Returns the offset just past the bracket matching the opener at `pos`, or
// npos. Templates and links nest inside each other.
size_t FindClose(std::string_view s, size_t pos) {
  std::vector<char> stack;
  size_t i = pos;
  while (i < s.size()) {
    if (StartsWithAt(s, i, "{{")) {
      stack.push_back('{');
      i += 2;
    } else if (StartsWithAt(s, i, "[[")) {
      stack.push_back('[');
      i += 2;
    } else if (StartsWithAt(s, i, "}}") && !stack.empty() && stack.back() == '{') {
      stack.pop_back();
      i += 2;
      if (stack.empty()) return i;
    } else if (StartsWithAt(s, i, "]]") && !stack.empty() && stack.back() == '[') {
      stack.pop_back();
      i += 2;
      if (stack.empty()) return i;
    } else {
      ++i;
    }
  }
  return std::string_view::npos;
}

// Splits on `delim` outside of {{...}} and [[...]].
std::vector<std::string_view> SplitTopLevel(std::string_view s, char delim) {
  std::vector<std::string_view> parts;
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (StartsWithAt(s, i, "{{") || StartsWithAt(s, i, "[[")) {
      ++depth;
      ++i;
    } else if ((StartsWithAt(s, i, "}}") || StartsWithAt(s, i, "]]")) && depth > 0) {
      --depth;
      ++i;
    } else if (s[i] == delim && depth == 0) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(s.substr(start));
  return parts;
}

size_t FindTopLevel(std::string_view s, char ch) {
  int depth = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (StartsWithAt(s, i, "{{") || StartsWithAt(s, i, "[[")) {
      ++depth;
      ++i;
    } else if ((StartsWithAt(s, i, "}}") || StartsWithAt(s, i, "]]")) && depth > 0) {
      --depth;
      ++i;
    } else if (s[i] == ch && depth == 0) {
      return i;
    }
  }
  return std::string_view::npos;
}

std::string NormalizeTemplateName(std::string_view raw) {
  std::string name = ToLower(CollapseWhitespace(raw));
  std::replace(name.begin(), name.end(), '_', ' ');
  if (IStartsWith(name, "template:")) name = Trim(name.substr(9));
  return name;
}

std::string DecodeEntity(std::string_view name) {
  static const std::unordered_map<std::string_view, std::string_view> kNamed = {
      {"nbsp", " "},        {"amp", "&"},           {"lt", "<"},
      {"gt", ">"},          {"quot", "\""},         {"apos", "'"},
      {"ndash", "–"},  {"mdash", "—"},    {"minus", "−"},
      {"times", "×"},  {"hellip", "…"},   {"thinsp", " "},
      {"ensp", " "},        {"emsp", " "},          {"shy", ""},
      {"zwj", ""},          {"zwnj", ""},           {"deg", "°"}};
  if (!name.empty() && name[0] == '#') {
    char32_t cp = 0;
    try {
      if (name.size() > 1 && (name[1] == 'x' || name[1] == 'X')) {
        cp = static_cast<char32_t>(std::stoul(std::string(name.substr(2)), nullptr, 16));
      } else {
        cp = static_cast<char32_t>(std::stoul(std::string(name.substr(1))));
      }
    } catch (...) {
      return "";
    }
    if (cp == 0 || cp > 0x10FFFF) return "";
    if (cp == 0xA0) return " ";
    return EncodeUtf8(std::u32string(1, cp));
  }
  auto it = kNamed.find(name);
  return it == kNamed.end() ? "" : std::string(it->second);
}

class MarkupCleaner {
 public:
  MarkupCleaner(TemplateMode mode, ParseDiagnostics *diagnostics)
      : mode_(mode), diagnostics_(diagnostics) {}

  // Output may contain verbatim markers; see Finalize().
  std::string Clean(std::string_view s) {
    std::string out;
    CleanInto(s, &out);
    return out;
  }

 private:
  void Malformed() {
    if (diagnostics_ != nullptr) ++diagnostics_->malformed;
  }

  std::string CleanArg(std::string_view s) { return Clean(s); }

  void CleanInto(std::string_view s, std::string *out) {
    size_t i = 0;
    while (i < s.size()) {
      char ch = s[i];
      if (StartsWithAt(s, i, "<!--")) {
        size_t end = s.find("-->", i + 4);
        i = end == std::string_view::npos ? s.size() : end + 3;
        continue;
      }
      if (StartsWithAt(s, i, "{{")) {
        size_t end = FindClose(s, i);
        if (end == std::string_view::npos) {
          Malformed();
          i += 2;
          continue;
        }
        std::string_view inner = s.substr(i + 2, end - i - 4);
        if (!inner.empty() && inner.front() == '{') {
          // {{{parameter}}}
        } else {
          out->append(ExpandTemplate(inner));
        }
        i = end;
        continue;
      }
      if (StartsWithAt(s, i, "[[")) {
        size_t end = FindClose(s, i);
        if (end == std::string_view::npos) {
          Malformed();
          i += 2;
          continue;
        }
        out->append(RenderLink(s.substr(i + 2, end - i - 4)));
        i = end;
        continue;
      }
      if (ch == '[' && (StartsWithAt(s, i + 1, "http://") ||
                        StartsWithAt(s, i + 1, "https://") ||
                        StartsWithAt(s, i + 1, "//") ||
                        StartsWithAt(s, i + 1, "ftp://"))) {
        size_t end = s.find(']', i);
        if (end == std::string_view::npos) {
          Malformed();
          ++i;
          continue;
        }
        std::string_view inner = s.substr(i + 1, end - i - 1);
        size_t space = inner.find(' ');
        if (space != std::string_view::npos) CleanInto(inner.substr(space + 1), out);
        i = end + 1;
        continue;
      }
      if (StartsWithAt(s, i, "''")) {
        while (i < s.size() && s[i] == '\'') ++i;
        continue;
      }
      if (StartsWithAt(s, i, "__")) {
        size_t end = s.find("__", i + 2);
        if (end != std::string_view::npos && end > i + 2) {
          std::string_view word = s.substr(i + 2, end - i - 2);
          if (std::all_of(word.begin(), word.end(),
                          [](char c) { return c >= 'A' && c <= 'Z'; })) {
            i = end + 2;
            continue;
          }
        }
      }
      if (ch == '<') {
        size_t consumed = HandleTag(s, i, out);
        if (consumed > 0) {
          i += consumed;
          continue;
        }
      }
      if (ch == '&') {
        size_t semi = s.find(';', i);
        if (semi != std::string_view::npos && semi - i <= 10 && semi > i + 1) {
          std::string_view name = s.substr(i + 1, semi - i - 1);
          std::string decoded = DecodeEntity(name);
          if (!decoded.empty() || name == "shy" || name == "zwj" || name == "zwnj") {
            out->append(decoded);
            i = semi + 1;
            continue;
          }
        }
      }
      out->push_back(ch);
      ++i;
    }
  }

  // Returns the number of bytes consumed, 0 if `<` does not open a tag.
  size_t HandleTag(std::string_view s, size_t pos, std::string *out) {
    size_t close = s.find('>', pos);
    if (close == std::string_view::npos) return 0;
    std::string_view tag = s.substr(pos + 1, close - pos - 1);
    bool closing = !tag.empty() && tag.front() == '/';
    if (closing) tag.remove_prefix(1);
    size_t name_end = 0;
    while (name_end < tag.size() &&
           std::isalnum(static_cast<unsigned char>(tag[name_end]))) {
      ++name_end;
    }
    if (name_end == 0) return 0;
    std::string name = ToLower(tag.substr(0, name_end));
    bool self_closing = !tag.empty() && tag.back() == '/';
    static const std::set<std::string> kDropElements = {
        "ref", "gallery", "timeline", "syntaxhighlight", "score", "graph",
        "references", "templatestyles", "mapframe", "imagemap"};
    if (!closing && !self_closing && kDropElements.count(name) > 0) {
      std::string closer = "</" + name;
      size_t i = close + 1;
      while (i < s.size()) {
        size_t lt = s.find("</", i);
        if (lt == std::string_view::npos) break;
        if (IStartsWith(s.substr(lt), closer)) {
          size_t gt = s.find('>', lt);
          return (gt == std::string_view::npos ? s.size() : gt + 1) - pos;
        }
        i = lt + 2;
      }
      Malformed();
      return s.size() - pos;
    }
    if (name == "br" || name == "p" || name == "div" || name == "li") out->push_back(' ');
    return close - pos + 1;
  }

  std::string RenderLink(std::string_view inner) {
    std::vector<std::string_view> parts = SplitTopLevel(inner, '|');
    std::string target = Trim(parts[0]);
    bool leading_colon = !target.empty() && target.front() == ':';
    if (leading_colon) target = Trim(target.substr(1));
    size_t colon = target.find(':');
    if (!leading_colon && colon != std::string::npos) {
      std::string ns = ToLower(Trim(target.substr(0, colon)));
      if (ns == "file" || ns == "image" || ns == "category" || ns == "media") {
        return "";
      }
    }
    if (parts.size() > 1) {
      std::string display = Clean(parts.back());
      if (!Trim(display).empty()) return display;
    }
    size_t hash = target.find('#');
    if (hash != std::string::npos && hash > 0) target = target.substr(0, hash);
    return target;
  }

  std::string Verbatim(std::string_view inner) {
    std::string body;
    bool space = false;
    for (char c : inner) {
      if (c == ' ' || c == '\n' || c == '\t' || c == '\r') {
        space = true;
        continue;
      }
      if (space) body.push_back(' ');
      space = false;
      body.push_back(c);
    }
    if (space) body.push_back(' ');
    return std::string(kVerbatimOpen) + body + std::string(kVerbatimClose);
  }

  static std::string IsoDate(const std::vector<std::string> &args) {
    std::vector<std::string> numbers;
    for (const std::string &a : args) {
      std::string t = Trim(a);
      if (t.empty() || !std::all_of(t.begin(), t.end(),
                                    [](char c) { return c >= '0' && c <= '9'; })) {
        break;
      }
      numbers.push_back(t);
      if (numbers.size() == 3) break;
    }
    std::string out;
    for (size_t i = 0; i < numbers.size(); ++i) {
      std::string n = numbers[i];
      if (i > 0 && n.size() == 1) n = "0" + n;
      if (i > 0) out.push_back('-');
      out += n;
    }
    return out;
  }

  std::string ExpandTemplate(std::string_view inner) {
    std::vector<std::string_view> parts = SplitTopLevel(inner, '|');
    std::string name = NormalizeTemplateName(parts[0]);
    if (name.empty() || name.front() == '#') return "";
    // A colon in the name marks a parser function or transcluded page.
    if (name.find(':') != std::string::npos && !IStartsWith(name, "lang-")) return "";

    std::vector<std::string> positional;
    std::map<std::string, std::string> named;
    for (size_t i = 1; i < parts.size(); ++i) {
      size_t eq = FindTopLevel(parts[i], '=');
      if (eq != std::string_view::npos) {
        named[Trim(parts[i].substr(0, eq))] = CleanArg(parts[i].substr(eq + 1));
      } else {
        positional.push_back(CleanArg(parts[i]));
      }
    }
    auto pos = [&](size_t i) -> std::string {
      return i < positional.size() ? positional[i] : std::string();
    };

    static const std::set<std::string> kDropped = {
        "efn", "efn-ua", "efn-lr", "refn", "sfn", "sfnp", "sfnm", "harvnb",
        "harvtxt", "r", "rp", "ref label", "note", "note label",
        "citation needed", "cn", "fact", "clarify", "when", "who", "dubious",
        "better source needed", "citation", "reflist", "notelist", "toc",
        "flagicon", "flagicon image", "short description", "use dmy dates",
        "use mdy dates", "main", "see also", "further", "about", "redirect",
        "good article", "featured article", "authority control", "portal",
        "defaultsort", "anchor", "clear", "-", "coord", "commons category"};
    if (kDropped.count(name) > 0 || IStartsWith(name, "cite ") ||
        IStartsWith(name, "use ")) {
      return "";
    }
    if (name == "nowrap" || name == "nobr" || name == "small" ||
        name == "big" || name == "smaller" || name == "larger" ||
        name == "abbr" || name == "flag" || name == "flagcountry" ||
        name == "flagu" || name == "marriage" || name == "nbsp" ||
        name == "center" || name == "resize" || name == "keypress" ||
        name == "noitalic" || name == "not a typo" || name == "sic" ||
        name == "vanchor" || name == "ill" || name == "interlanguage link") {
      return name == "nbsp" ? " " : pos(name == "resize" && positional.size() > 1 ? 1 : 0);
    }
    if (name == "lang") return pos(1);
    if (IStartsWith(name, "lang-") || name == "transl" || name == "transliteration") {
      return pos(positional.size() > 1 ? positional.size() - 1 : 0);
    }
    if (name == "sort" || name == "sortname" || name == "dts") {
      if (name == "sortname") return Trim(pos(0) + " " + pos(1));
      if (name == "dts") return IsoDate(positional);
      return positional.size() > 1 ? pos(1) : pos(0);
    }
    if (name == "yes" || name == "y") return "Yes";
    if (name == "no" || name == "n") return "No";
    if (name == "n/a" || name == "na") return "N/A";
    if (name == "tba") return "TBA";
    if (name == "tbd") return "TBD";
    if (name == "!") return "|";
    if (name == "=") return "=";
    if (name == "ndash" || name == "snd" || name == "spaced ndash") return " – ";
    if (name == "mdash") return "—";
    if (name == "convert" || name == "cvt") return Trim(pos(0) + " " + pos(1));
    if (name == "url") return positional.size() > 1 ? pos(1) : pos(0);
    if (name == "birth date" || name == "birth date and age" ||
        name == "death date" || name == "death date and age" ||
        name == "start date" || name == "start date and age" ||
        name == "end date" || name == "dob" || name == "bda" ||
        name == "birth year and age" || name == "death year and age" ||
        name == "film date") {
      return IsoDate(positional);
    }
    if (name == "ubl" || name == "unbulleted list" || name == "plainlist" ||
        name == "plain list" || name == "flatlist" || name == "flat list" ||
        name == "hlist" || name == "collapsible list" || name == "bulleted list" ||
        name == "ordered list") {
      std::vector<std::string> items;
      for (const std::string &arg : positional) {
        for (std::string_view line : SplitTopLevel(arg, '\n')) {
          std::string item = Trim(line);
          while (!item.empty() && (item.front() == '*' || item.front() == '#')) {
            item = Trim(item.substr(1));
          }
          if (!item.empty()) items.push_back(item);
        }
      }
      return Join(items, ", ");
    }
    if (mode_ == TemplateMode::kKeepUnknown) return Verbatim(inner);
    return "";
  }

  TemplateMode mode_;
  ParseDiagnostics *diagnostics_;
};

// Collapses whitespace and trims, leaving verbatim regions untouched, then
// removes the verbatim markers.
std::string Finalize(std::string_view raw) {
  std::string out;
  bool pending = false;
  bool inside = false;
  size_t i = 0;
  while (i < raw.size()) {
    if (StartsWithAt(raw, i, kVerbatimOpen)) {
      if (pending && !out.empty()) out.push_back(' ');
      pending = false;
      inside = true;
      i += kVerbatimOpen.size();
      continue;
    }
    if (StartsWithAt(raw, i, kVerbatimClose)) {
      inside = false;
      i += kVerbatimClose.size();
      continue;
    }
    char c = raw[i];
    bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (space && !inside) {
      pending = true;
    } else {
      if (pending && !out.empty() && !inside) out.push_back(' ');
      pending = false;
      out.push_back(c);
    }
    ++i;
  }
  return out;
}

// Replaces HTML comments with spaces, keeping byte offsets and newlines.
std::string BlankComments(std::string_view text) {
  std::string out(text);
  size_t pos = 0;
  while ((pos = out.find("<!--", pos)) != std::string::npos) {
    size_t end = out.find("-->", pos + 4);
    end = end == std::string::npos ? out.size() : end + 3;
    for (size_t i = pos; i < end; ++i) {
      if (out[i] != '\n') out[i] = ' ';
    }
    pos = end;
  }
  return out;
}

std::string_view LStrip(std::string_view s) {
  size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ':')) ++i;
  return s.substr(i);
}

std::string_view RStrip(std::string_view s) {
  size_t n = s.size();
  while (n > 0 && (s[n - 1] == ' ' || s[n - 1] == '\t' || s[n - 1] == '\r')) --n;
  return s.substr(0, n);
}

struct Heading {
  int level = 0;
  std::string title;
};

std::optional<Heading> ParseHeading(std::string_view line) {
  line = RStrip(line);
  if (line.size() < 3 || line.front() != '=' || line.back() != '=') return std::nullopt;
  size_t left = 0;
  while (left < line.size() && line[left] == '=') ++left;
  size_t right = 0;
  while (right < line.size() && line[line.size() - 1 - right] == '=') ++right;
  if (left + right >= line.size()) return std::nullopt;
  int level = static_cast<int>(std::min({left, right, size_t{6}}));
  std::string_view middle = line.substr(level, line.size() - 2 * level);
  std::string title = Finalize(MarkupCleaner(TemplateMode::kDropUnknown, nullptr).Clean(middle));
  if (title.empty()) return std::nullopt;
  return Heading{level, title};
}

// Offset just past the line closing the table opened at `start`.
size_t FindTableEnd(std::string_view text, size_t start, ParseDiagnostics *diag) {
  int depth = 0;
  size_t pos = start;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    size_t next = eol == std::string_view::npos ? text.size() : eol + 1;
    std::string_view line = LStrip(text.substr(pos, next - pos));
    if (StartsWithAt(line, 0, "{|")) {
      ++depth;
    } else if (StartsWithAt(line, 0, "|}")) {
      --depth;
      if (depth == 0) return next;
    }
    pos = next;
  }
  ++diag->malformed;
  return text.size();
}

struct PendingCell {
  std::string raw;
  int colspan = 1;
  int rowspan = 1;
  bool header = false;
};

int ParseSpan(std::string_view attrs, std::string_view name) {
  std::string lower = ToLower(attrs);
  size_t at = lower.find(name);
  if (at == std::string::npos) return 1;
  size_t i = at + name.size();
  while (i < lower.size() && (lower[i] == ' ' || lower[i] == '=' ||
                              lower[i] == '"' || lower[i] == '\'')) {
    ++i;
  }
  int value = 0;
  bool digits = false;
  while (i < lower.size() && lower[i] >= '0' && lower[i] <= '9' && value < 100000) {
    value = value * 10 + (lower[i] - '0');
    digits = true;
    ++i;
  }
  return digits && value >= 1 ? value : 1;
}

PendingCell ParseCell(std::string_view piece, bool header) {
  PendingCell cell;
  cell.header = header;
  size_t bar = std::string_view::npos;
  {
    int depth = 0;
    for (size_t i = 0; i < piece.size(); ++i) {
      if (StartsWithAt(piece, i, "{{") || StartsWithAt(piece, i, "[[")) {
        ++depth;
        ++i;
      } else if ((StartsWithAt(piece, i, "}}") || StartsWithAt(piece, i, "]]")) && depth > 0) {
        --depth;
        ++i;
      } else if (piece[i] == '|' && depth == 0) {
        bar = i;
        break;
      }
    }
  }
  if (bar != std::string_view::npos) {
    std::string_view attrs = piece.substr(0, bar);
    if (attrs.find('=') != std::string_view::npos ||
        Trim(attrs).find_first_of("{[") == std::string::npos) {
      cell.colspan = ParseSpan(attrs, "colspan");
      cell.rowspan = ParseSpan(attrs, "rowspan");
      cell.raw = std::string(piece.substr(bar + 1));
      return cell;
    }
  }
  cell.raw = std::string(piece);
  return cell;
}

std::vector<std::string_view> SplitCells(std::string_view line, bool header) {
  std::vector<std::string_view> cells;
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i < line.size(); ++i) {
    if (StartsWithAt(line, i, "{{") || StartsWithAt(line, i, "[[")) {
      ++depth;
      ++i;
    } else if ((StartsWithAt(line, i, "}}") || StartsWithAt(line, i, "]]")) && depth > 0) {
      --depth;
      ++i;
    } else if (depth == 0 && (StartsWithAt(line, i, "||") ||
                              (header && StartsWithAt(line, i, "!!")))) {
      cells.push_back(line.substr(start, i - start));
      start = i + 2;
      ++i;
    }
  }
  cells.push_back(line.substr(start));
  return cells;
}

std::string CleanCell(std::string_view raw, ParseDiagnostics *diag) {
  return Finalize(MarkupCleaner(TemplateMode::kKeepUnknown, diag).Clean(raw));
}

RawTable ParseTableBlock(std::string_view block, ParseDiagnostics *diag);

std::string FlattenTable(const RawTable &table) {
  std::vector<std::string> parts;
  if (table.caption) parts.push_back(*table.caption);
  for (const auto &row : table.grid) {
    for (const auto &cell : row) {
      if (!cell.empty()) parts.push_back(cell);
    }
  }
  return Join(parts, " ");
}

RawTable ParseTableBlock(std::string_view block, ParseDiagnostics *diag) {
  RawTable table;
  std::vector<std::vector<PendingCell>> rows;
  std::vector<PendingCell> current;
  auto end_row = [&] {
    if (!current.empty()) rows.push_back(std::move(current));
    current.clear();
  };

  std::vector<std::string_view> lines;
  {
    size_t pos = 0;
    while (pos <= block.size()) {
      size_t eol = block.find('\n', pos);
      if (eol == std::string_view::npos) {
        if (pos < block.size()) lines.push_back(block.substr(pos));
        break;
      }
      lines.push_back(block.substr(pos, eol - pos));
      pos = eol + 1;
    }
  }

  for (size_t j = 1; j < lines.size(); ++j) {
    std::string_view line = LStrip(lines[j]);
    if (StartsWithAt(line, 0, "{|")) {
      // Nested table: gather to its close and flatten into the current cell.
      size_t k = j;
      int depth = 0;
      for (; k < lines.size(); ++k) {
        std::string_view l = LStrip(lines[k]);
        if (StartsWithAt(l, 0, "{|")) ++depth;
        if (StartsWithAt(l, 0, "|}") && --depth == 0) break;
      }
      if (k == lines.size()) {
        ++diag->malformed;
        k = lines.size() - 1;
      }
      std::string nested_text;
      for (size_t m = j; m <= k; ++m) {
        nested_text.append(lines[m]);
        nested_text.push_back('\n');
      }
      std::string flat = FlattenTable(ParseTableBlock(nested_text, diag));
      if (current.empty()) current.push_back(PendingCell{});
      current.back().raw += " " + flat;
      j = k;
      continue;
    }
    if (StartsWithAt(line, 0, "|}")) break;
    if (StartsWithAt(line, 0, "|+")) {
      PendingCell cap = ParseCell(line.substr(2), false);
      std::string text = CleanCell(cap.raw, diag);
      if (!text.empty()) table.caption = text;
      continue;
    }
    if (StartsWithAt(line, 0, "|-")) {
      end_row();
      continue;
    }
    if (StartsWithAt(line, 0, "!") || StartsWithAt(line, 0, "|")) {
      bool header = line.front() == '!';
      for (std::string_view piece : SplitCells(line.substr(1), header)) {
        current.push_back(ParseCell(piece, header));
      }
      continue;
    }
    if (!current.empty()) {
      current.back().raw.push_back('\n');
      current.back().raw.append(lines[j]);
    }
  }
  end_row();

  std::vector<RawRow> cleaned;
  cleaned.reserve(rows.size());
  for (const auto &row : rows) {
    RawRow out;
    for (const PendingCell &cell : row) {
      out.push_back(RawCell{CleanCell(cell.raw, diag), cell.colspan, cell.rowspan, cell.header});
    }
    cleaned.push_back(std::move(out));
  }
  if (cleaned.empty()) return table;

  size_t header_row = 0;
  for (size_t r = 0; r < cleaned.size(); ++r) {
    if (std::all_of(cleaned[r].begin(), cleaned[r].end(),
                    [](const RawCell &c) { return c.header; })) {
      header_row = r;
      break;
    }
  }
  Grid grid = ExpandSpans(cleaned, diag);
  size_t columns = grid.empty() ? 0 : grid[0].size();
  table.header.resize(columns);
  for (size_t c = 0; c < columns; ++c) {
    std::string name = grid[header_row][c];
    table.header[c] = name.empty() ? "col_" + std::to_string(c + 1) : name;
  }
  for (size_t r = 0; r < grid.size(); ++r) {
    if (r != header_row) table.grid.push_back(std::move(grid[r]));
  }
  return table;
}

Infobox ParseInfobox(std::string_view inner, ParseDiagnostics *diag) {
  Infobox box;
  std::vector<std::string_view> parts = SplitTopLevel(inner, '|');
  box.template_name = CollapseWhitespace(parts[0]);
  for (size_t i = 1; i < parts.size(); ++i) {
    size_t eq = FindTopLevel(parts[i], '=');
    if (eq == std::string_view::npos) continue;
    std::string key = Finalize(
        MarkupCleaner(TemplateMode::kDropUnknown, diag).Clean(parts[i].substr(0, eq)));
    if (key.empty()) continue;
    std::string value = CleanCell(parts[i].substr(eq + 1), diag);
    box.pairs.emplace_back(std::move(key), std::move(value));
  }
  return box;
}

class PageBuilder {
 public:
  explicit PageBuilder(ParseDiagnostics *diag) : diag_(diag) {
    sections_.emplace_back();
    paths_.insert("");
  }

  void StartSection(const Heading &heading) {
    FlushProse();
    while (!stack_.empty() && stack_.back().level >= heading.level) stack_.pop_back();
    stack_.push_back(heading);
    Section section;
    for (const Heading &h : stack_) section.heading_path.push_back(h.title);
    std::string key = Join(section.heading_path, "\x1f");
    if (paths_.count(key) > 0) {
      std::string base = section.heading_path.back();
      for (int n = 2;; ++n) {
        section.heading_path.back() = base + " (" + std::to_string(n) + ")";
        key = Join(section.heading_path, "\x1f");
        if (paths_.count(key) == 0) break;
      }
      stack_.back().title = section.heading_path.back();
    }
    paths_.insert(key);
    sections_.push_back(std::move(section));
  }

  void AppendProse(std::string_view text) {
    prose_.append(text);
    prose_.push_back('\n');
  }

  void FlushProse() {
    if (Trim(prose_).empty()) {
      prose_.clear();
      return;
    }
    std::string cleaned =
        Finalize(MarkupCleaner(TemplateMode::kDropUnknown, diag_).Clean(prose_));
    prose_.clear();
    for (std::string &s : SplitSentences(cleaned)) {
      sections_.back().sentences.push_back(std::move(s));
    }
  }

  void AddTable(RawTable table) {
    FlushProse();
    table.position = sections_.back().sentences.size();
    sections_.back().tables.push_back(std::move(table));
  }

  void AddInfobox(Infobox box) {
    FlushProse();
    box.position = sections_.back().sentences.size();
    sections_.back().infoboxes.push_back(std::move(box));
  }

  std::vector<Section> Finish() {
    FlushProse();
    return std::move(sections_);
  }

 private:
  ParseDiagnostics *diag_;
  std::vector<Section> sections_;
  std::vector<Heading> stack_;
  std::set<std::string> paths_;
  std::string prose_;
};

}  // namespace

std::string Section::Title() const {
  return heading_path.empty() ? std::string() : heading_path.back();
}

std::string CleanMarkup(std::string_view wikitext, TemplateMode mode,
                        ParseDiagnostics *diagnostics) {
  return Finalize(MarkupCleaner(mode, diagnostics).Clean(wikitext));
}

Grid ExpandSpans(const std::vector<RawRow> &rows, ParseDiagnostics *diagnostics) {
  ParseDiagnostics local;
  if (diagnostics == nullptr) diagnostics = &local;
  const size_t nrows = rows.size();
  std::vector<std::vector<std::optional<std::string>>> layout(nrows);
  auto ensure = [&](size_t r, size_t c) {
    if (layout[r].size() <= c) layout[r].resize(c + 1);
  };
  for (size_t r = 0; r < nrows; ++r) {
    size_t col = 0;
    for (const RawCell &cell : rows[r]) {
      while (col < layout[r].size() && layout[r][col].has_value()) ++col;
      size_t rowspan = static_cast<size_t>(std::max(1, cell.rowspan));
      size_t colspan = static_cast<size_t>(std::max(1, cell.colspan));
      if (r + rowspan > nrows) {
        rowspan = nrows - r;
        ++diagnostics->clipped_spans;
      }
      if (colspan > static_cast<size_t>(kMaxColspan)) {
        colspan = kMaxColspan;
        ++diagnostics->clipped_spans;
      }
      for (size_t dr = 0; dr < rowspan; ++dr) {
        for (size_t dc = 0; dc < colspan; ++dc) {
          ensure(r + dr, col + dc);
          auto &slot = layout[r + dr][col + dc];
          if (!slot.has_value()) slot = cell.text;
        }
      }
      col += colspan;
    }
  }
  size_t width = 0;
  for (const auto &row : layout) width = std::max(width, row.size());
  Grid grid(nrows, std::vector<std::string>(width));
  for (size_t r = 0; r < nrows; ++r) {
    for (size_t c = 0; c < layout[r].size(); ++c) {
      if (layout[r][c].has_value()) grid[r][c] = *layout[r][c];
    }
  }
  return grid;
}

Context AttachContext(const Section &section, size_t position) {
  const auto &s = section.sentences;
  if (position > s.size()) {
    throw InvalidArgument("context position " + std::to_string(position) +
                          " outside section with " + std::to_string(s.size()) +
                          " sentences");
  }
  Context ctx;
  size_t first = position >= 2 ? position - 2 : 0;
  ctx.before.assign(s.begin() + static_cast<std::ptrdiff_t>(first),
                    s.begin() + static_cast<std::ptrdiff_t>(position));
  size_t last = std::min(s.size(), position + 2);
  ctx.after.assign(s.begin() + static_cast<std::ptrdiff_t>(position),
                   s.begin() + static_cast<std::ptrdiff_t>(last));
  return ctx;
}

WikiPage ParsePage(std::string_view wikitext, std::string title, int64_t page_id,
                   ParseDiagnostics *diagnostics) {
  ParseDiagnostics local;
  ParseDiagnostics *diag = diagnostics != nullptr ? diagnostics : &local;
  const std::string text = BlankComments(wikitext);
  const std::string_view view = text;
  PageBuilder builder(diag);

  size_t pos = 0;
  while (pos < view.size()) {
    size_t eol = view.find('\n', pos);
    if (eol == std::string_view::npos) eol = view.size();
    std::string_view line = view.substr(pos, eol - pos);
    std::string_view stripped = LStrip(line);

    if (auto heading = ParseHeading(line)) {
      builder.StartSection(*heading);
      pos = eol + 1;
      continue;
    }
    if (StartsWithAt(stripped, 0, "{|")) {
      size_t end = FindTableEnd(view, pos, diag);
      RawTable table = ParseTableBlock(view.substr(pos, end - pos), diag);
      table.source_span = ByteSpan{pos, end};
      builder.AddTable(std::move(table));
      pos = end;
      continue;
    }
    if (Trim(line).empty()) {
      builder.FlushProse();
      pos = eol + 1;
      continue;
    }
    if (IStartsWith(stripped, "#redirect")) {
      pos = eol + 1;
      continue;
    }
    bool list_item = !line.empty() && (line[0] == '*' || line[0] == '#' || line[0] == ';');
    if (list_item || line[0] == ':') {
      builder.FlushProse();
      size_t skip = 0;
      while (skip < line.size() && (line[skip] == '*' || line[skip] == '#' ||
                                    line[skip] == ';' || line[skip] == ':')) {
        ++skip;
      }
      pos += skip;
    }

    std::string buffer;
    size_t i = pos;
    while (i < view.size() && view[i] != '\n') {
      if (StartsWithAt(view, i, "{{")) {
        size_t close = FindClose(view, i);
        if (close == std::string_view::npos) {
          ++diag->malformed;
          i += 2;
          continue;
        }
        std::string_view inner = view.substr(i + 2, close - i - 4);
        std::string name = NormalizeTemplateName(SplitTopLevel(inner, '|')[0]);
        if (IStartsWith(name, "infobox")) {
          builder.AppendProse(buffer);
          buffer.clear();
          builder.AddInfobox(ParseInfobox(inner, diag));
        } else {
          buffer.append(view.substr(i, close - i));
        }
        i = close;
        continue;
      }
      if (StartsWithAt(view, i, "[[")) {
        size_t close = FindClose(view, i);
        if (close != std::string_view::npos) {
          buffer.append(view.substr(i, close - i));
          i = close;
          continue;
        }
      }
      buffer.push_back(view[i]);
      ++i;
    }
    builder.AppendProse(buffer);
    if (list_item) builder.FlushProse();
    pos = i + 1;
  }

  WikiPage page;
  page.title = std::move(title);
  page.page_id = page_id;
  page.sections = builder.Finish();
  return page;
}

}  // namespace hetqa
