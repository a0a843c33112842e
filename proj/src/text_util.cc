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

#include "hetqa/text_util.h"

#include <algorithm>
#include <array>
#include <unordered_set>

namespace hetqa {

std::u32string DecodeUtf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    auto b0 = static_cast<unsigned char>(text[i]);
    char32_t cp;
    int extra;
    if (b0 < 0x80) {
      cp = b0;
      extra = 0;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      extra = 1;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      extra = 2;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      extra = 3;
    } else {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    if (i + extra >= text.size()) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string EncodeUtf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

char32_t LowerCodepoint(char32_t c) {
  if (c < 0x80) return (c >= 'A' && c <= 'Z') ? c + 0x20 : c;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c >= 0x100 && c <= 0x17F) {
    if (c == 0x130) return 'i';
    if (c == 0x178) return 0xFF;
    if ((c >= 0x100 && c <= 0x12F) || (c >= 0x132 && c <= 0x137) ||
        (c >= 0x14A && c <= 0x177)) {
      return (c % 2 == 0) ? c + 1 : c;
    }
    if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E)) {
      return (c % 2 == 1) ? c + 1 : c;
    }
    return c;
  }
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c == 0x386) return 0x3AC;
  if (c >= 0x388 && c <= 0x38A) return c + 0x25;
  if (c == 0x38C) return 0x3CC;
  if (c == 0x38E || c == 0x38F) return c + 0x3F;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

std::string ToLower(std::string_view text) {
  bool ascii = std::all_of(text.begin(), text.end(), [](char ch) {
    return static_cast<unsigned char>(ch) < 0x80;
  });
  if (ascii) {
    std::string out(text);
    for (char &ch : out) {
      if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch + 0x20);
    }
    return out;
  }
  std::u32string cps = DecodeUtf8(text);
  for (char32_t &c : cps) c = LowerCodepoint(c);
  return EncodeUtf8(cps);
}

bool IsSpaceCodepoint(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v' || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200B) || c == 0x2028 || c == 0x2029 ||
         c == 0x202F || c == 0x205F || c == 0x3000 || c == 0xFEFF;
}

bool IsAlnumCodepoint(char32_t c) {
  if (c < 0x80) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
           (c >= 'A' && c <= 'Z');
  }
  if (c < 0xC0) return c == 0xAA || c == 0xB5 || c == 0xBA;
  if (c == 0xD7 || c == 0xF7) return false;
  if (IsSpaceCodepoint(c)) return false;
  if (c >= 0x2000 && c <= 0x2BFF) return false;  // punctuation, symbols
  if (c >= 0x2E00 && c <= 0x2E7F) return false;
  if (c >= 0x3000 && c <= 0x303F) return false;
  if (c >= 0xFE10 && c <= 0xFE6F) return false;
  if (c >= 0xFF00 && c <= 0xFF0F) return false;
  if (c == 0xFFFD) return false;
  if (c >= 0x1F000 && c <= 0x1FAFF) return false;
  return true;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::u32string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(EncodeUtf8(current));
      current.clear();
    }
  };
  for (char32_t c : DecodeUtf8(text)) {
    if (IsAlnumCodepoint(c)) {
      current.push_back(LowerCodepoint(c));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

bool IsStopword(std::string_view token) {
  static const std::unordered_set<std::string_view> kStopwords = {
      "a",     "an",    "and",  "are",   "as",    "at",    "be",   "been",
      "but",   "by",    "did",  "do",    "does",  "for",   "from", "had",
      "has",   "have",  "he",   "her",   "his",   "how",   "i",    "if",
      "in",    "into",  "is",   "it",    "its",   "of",    "on",   "or",
      "she",   "so",    "than", "that",  "the",   "their", "them", "then",
      "there", "these", "they", "this",  "to",    "was",   "were", "what",
      "when",  "where", "which", "who",  "whom",  "why",   "will", "with",
      "you",   "your"};
  return kStopwords.count(token) > 0;
}

std::string Trim(std::string_view text) {
  const char *ws = " \t\n\r\f\v";
  size_t begin = text.find_first_not_of(ws);
  if (begin == std::string_view::npos) return "";
  size_t end = text.find_last_not_of(ws);
  return std::string(text.substr(begin, end - begin + 1));
}

std::string CollapseWhitespace(std::string_view text) {
  std::u32string out;
  bool pending_space = false;
  for (char32_t c : DecodeUtf8(text)) {
    if (IsSpaceCodepoint(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return EncodeUtf8(out);
}

std::string Join(const std::vector<std::string> &parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char ch : text) {
    if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

namespace {

bool IsAbbreviation(const std::u32string &text, size_t dot) {
  // Word immediately preceding the dot.
  size_t begin = dot;
  while (begin > 0 && !IsSpaceCodepoint(text[begin - 1]) &&
         text[begin - 1] != '(') {
    --begin;
  }
  std::u32string word = text.substr(begin, dot - begin);
  if (word.empty()) return false;
  // Single initials ("J. R. R. Tolkien") and dotted acronyms ("U.S.").
  if (word.size() == 1 && IsAlnumCodepoint(word[0]) &&
      LowerCodepoint(word[0]) != word[0]) {
    return true;
  }
  if (word.find('.') != std::u32string::npos) return true;
  static const std::array<std::string_view, 22> kAbbrev = {
      "mr",  "mrs", "ms",  "dr",  "st",  "jr",   "sr",   "vs",
      "etc", "no",  "inc", "ltd", "co",  "corp", "prof", "gen",
      "col", "lt",  "mt",  "ft",  "approx", "fig"};
  std::string lower = ToLower(EncodeUtf8(word));
  return std::find(kAbbrev.begin(), kAbbrev.end(), lower) != kAbbrev.end();
}

bool OpensSentence(char32_t c) {
  return LowerCodepoint(c) != c || c == '"' || c == '\'' || c == 0x201C ||
         c == 0x2018 || c == 0xAB;
}

}  // namespace

std::vector<std::string> SplitSentences(std::string_view text) {
  std::u32string cps = DecodeUtf8(text);
  std::vector<std::string> sentences;
  size_t start = 0;
  auto emit = [&](size_t end) {
    std::string s = CollapseWhitespace(EncodeUtf8(cps.substr(start, end - start)));
    if (!s.empty()) sentences.push_back(std::move(s));
  };
  for (size_t i = 0; i < cps.size(); ++i) {
    char32_t c = cps[i];
    if (c != '.' && c != '!' && c != '?') continue;
    // Allow closing quotes/brackets right after the terminator.
    size_t j = i + 1;
    while (j < cps.size() && (cps[j] == '"' || cps[j] == 0x201D ||
                              cps[j] == ')' || cps[j] == '\'')) {
      ++j;
    }
    if (j >= cps.size() || !IsSpaceCodepoint(cps[j])) continue;
    size_t k = j;
    while (k < cps.size() && IsSpaceCodepoint(cps[k])) ++k;
    if (k >= cps.size() || !OpensSentence(cps[k])) continue;
    if (c == '.' && IsAbbreviation(cps, i)) continue;
    emit(j);
    start = k;
    i = k - 1;
  }
  emit(cps.size());
  return sentences;
}

namespace {

bool IsQuote(char32_t c) {
  return c == '"' || c == '\'' || c == 0x201C || c == 0x201D || c == 0x2018 ||
         c == 0x2019 || c == 0xAB || c == 0xBB || c == '`';
}

}  // namespace

std::string NormalizeAnswer(std::string_view text) {
  std::u32string cps = DecodeUtf8(text);
  // Surrounding quotes, possibly nested or separated by spaces.
  size_t begin = 0;
  size_t end = cps.size();
  while (true) {
    while (begin < end && IsSpaceCodepoint(cps[begin])) ++begin;
    while (end > begin && IsSpaceCodepoint(cps[end - 1])) --end;
    if (end - begin >= 2 && IsQuote(cps[begin]) && IsQuote(cps[end - 1])) {
      ++begin;
      --end;
      continue;
    }
    break;
  }
  std::u32string kept;
  for (size_t i = begin; i < end; ++i) {
    char32_t c = cps[i];
    if (IsSpaceCodepoint(c)) {
      kept.push_back(' ');
    } else if (IsAlnumCodepoint(c)) {
      kept.push_back(LowerCodepoint(c));
    }
  }
  std::vector<std::string> words;
  for (std::string &w : SplitWords(EncodeUtf8(kept))) {
    if (w == "a" || w == "an" || w == "the") continue;
    words.push_back(std::move(w));
  }
  return Join(words, " ");
}

}  // namespace hetqa
