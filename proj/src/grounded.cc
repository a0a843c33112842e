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

#include "hetqa/grounded.h"

#include <regex>
#include <set>

#include "hetqa/errors.h"
#include "hetqa/text_util.h"

namespace hetqa {

std::string_view VerdictLabelName(VerdictLabel label) {
  switch (label) {
    case VerdictLabel::kSupported:
      return "SUPPORTED";
    case VerdictLabel::kRefuted:
      return "REFUTED";
    case VerdictLabel::kNotEnoughInfo:
      return "NOT_ENOUGH_INFO";
  }
  return "NOT_ENOUGH_INFO";
}

std::string DraftAnswer(std::string_view question, const LlmClient &llm) {
  return Trim(llm.Run(stage::kDraft, {{"question", std::string(question)}}));
}

std::vector<Claim> SplitClaims(std::string_view question, std::string_view draft,
                               const LlmClient &llm) {
  std::vector<Claim> claims;
  if (Trim(draft).empty()) return claims;
  std::string reply;
  try {
    reply = llm.Run(stage::kClaimSplit,
                    {{"question", std::string(question)}, {"draft", std::string(draft)}});
  } catch (const BackendUnavailable &) {
    return claims;
  }
  if (IsNoneReply(reply)) return claims;
  static const std::regex kBullet(R"(^\s*(?:[-*]|•|\d+[.)])\s*(.*)$)");
  size_t start = 0;
  while (start <= reply.size()) {
    size_t end = reply.find('\n', start);
    if (end == std::string::npos) end = reply.size();
    std::string line = reply.substr(start, end - start);
    start = end + 1;
    std::smatch m;
    if (!std::regex_match(line, m, kBullet)) continue;
    std::string text = CollapseWhitespace(m[1].str());
    if (text.empty() || IsNoneReply(text)) continue;
    claims.push_back(Claim{std::move(text), static_cast<int>(claims.size())});
  }
  return claims;
}

std::string FormatVerifyEvidence(const std::vector<Hit> &hits) {
  std::string out;
  for (const Hit &hit : hits) {
    out += "[" + hit.doc_id + "] " + CollapseWhitespace(hit.text) + "\n";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

Verdict ParseVerdict(std::string_view reply, const std::vector<Hit> &hits) {
  std::string text = Trim(reply);
  std::string upper;
  for (char c : text) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  Verdict verdict;
  if (upper.rfind("REFUTED", 0) == 0) {
    verdict.label = VerdictLabel::kRefuted;
    return verdict;
  }
  if (upper.rfind("SUPPORTED", 0) != 0) return verdict;
  std::set<std::string> known;
  for (const Hit &hit : hits) known.insert(hit.doc_id);
  std::set<std::string> seen;
  size_t pos = 0;
  while ((pos = text.find('[', pos)) != std::string::npos) {
    size_t close = text.find(']', pos + 1);
    if (close == std::string::npos) break;
    std::string id = Trim(text.substr(pos + 1, close - pos - 1));
    if (known.count(id) && seen.insert(id).second) verdict.supporting_ids.push_back(id);
    pos = close + 1;
  }
  if (!verdict.supporting_ids.empty()) verdict.label = VerdictLabel::kSupported;
  return verdict;
}

Verdict Verify(const Claim &claim, const std::vector<Hit> &hits, const LlmClient &llm) {
  if (hits.empty()) return Verdict{};
  try {
    std::string reply = llm.Run(stage::kVerify, {{"claim", claim.text},
                                                 {"evidence", FormatVerifyEvidence(hits)}});
    return ParseVerdict(reply, hits);
  } catch (const BackendUnavailable &) {
    return Verdict{};
  }
}

std::vector<EvidenceItem> FilterVerified(const std::vector<Claim> &claims,
                                         const std::vector<Verdict> &verdicts) {
  if (claims.size() != verdicts.size()) {
    throw InvalidArgument("claims and verdicts differ in length: " +
                          std::to_string(claims.size()) + " vs " +
                          std::to_string(verdicts.size()));
  }
  std::vector<EvidenceItem> items;
  for (size_t i = 0; i < claims.size(); ++i) {
    const Verdict &v = verdicts[i];
    if (v.label != VerdictLabel::kSupported || v.supporting_ids.empty()) continue;
    if (claims[i].text.empty()) continue;
    items.push_back(EvidenceItem{EvidenceKind::kLlmClaim, claims[i].text, v.supporting_ids.front()});
  }
  return items;
}

}  // namespace hetqa
