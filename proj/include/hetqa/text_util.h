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

// Unicode-aware text helpers shared by the parser, the index and the
// evaluation metrics.

#ifndef HETQA_TEXT_UTIL_H_
#define HETQA_TEXT_UTIL_H_

#include <string>
#include <string_view>
#include <vector>

namespace hetqa {

// Decodes UTF-8. Invalid bytes decode to U+FFFD.
std::u32string DecodeUtf8(std::string_view text);
std::string EncodeUtf8(std::u32string_view text);

// Simple case folding covering ASCII, Latin-1, Latin Extended-A, Greek and
// Cyrillic. Other code points are returned unchanged.
char32_t LowerCodepoint(char32_t c);
std::string ToLower(std::string_view text);

// Letters and digits. Code points outside the covered blocks are treated as
// word characters unless they are known punctuation, symbols or spaces.
bool IsAlnumCodepoint(char32_t c);
bool IsSpaceCodepoint(char32_t c);

// Lowercased maximal runs of alphanumeric code points.
std::vector<std::string> Tokenize(std::string_view text);

// Small English stoplist used by retrieval.
bool IsStopword(std::string_view token);

std::string Trim(std::string_view text);
std::string CollapseWhitespace(std::string_view text);
std::string Join(const std::vector<std::string> &parts, std::string_view sep);

// Whitespace-separated words.
std::vector<std::string> SplitWords(std::string_view text);

// Splits prose on '.', '!' or '?' followed by whitespace and an uppercase
// letter, digit or opening quote. Common abbreviations and single-letter
// initials do not end a sentence.
std::vector<std::string> SplitSentences(std::string_view text);

// Answer normalization used by the metrics: lowercase, strip surrounding
// quotes, remove punctuation, drop the articles a/an/the and collapse
// whitespace.
std::string NormalizeAnswer(std::string_view text);

}  // namespace hetqa

#endif  // HETQA_TEXT_UTIL_H_
