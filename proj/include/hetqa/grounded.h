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

// Verified generation: an LLM drafts an answer, the draft is split into
// claims and only claims grounded in retrieved passages become evidence.

#ifndef HETQA_GROUNDED_H_
#define HETQA_GROUNDED_H_

#include <string>
#include <string_view>
#include <vector>

#include "hetqa/evidence.h"
#include "hetqa/index.h"
#include "hetqa/llm.h"

namespace hetqa {

struct Claim {
  std::string text;
  int draft_index = 0;

  bool operator==(const Claim &) const = default;
};

enum class VerdictLabel { kSupported, kRefuted, kNotEnoughInfo };

std::string_view VerdictLabelName(VerdictLabel label);

struct Verdict {
  VerdictLabel label = VerdictLabel::kNotEnoughInfo;
  std::vector<std::string> supporting_ids;  // non-empty iff kSupported

  bool operator==(const Verdict &) const = default;
};

// The LLM's unconstrained answer. Throws BackendUnavailable.
std::string DraftAnswer(std::string_view question, const LlmClient &llm);

// One claim per "- claim" (or numbered) line of the splitter reply. An
// empty draft, a "None" reply or an LLM failure give no claims.
std::vector<Claim> SplitClaims(std::string_view question, std::string_view draft,
                               const LlmClient &llm);

// "[doc_id] text" per line.
std::string FormatVerifyEvidence(const std::vector<Hit> &hits);

// Parses "SUPPORTED: [id] [id]", "REFUTED" or anything else (NOT ENOUGH
// INFO). A SUPPORTED reply must cite at least one id from `hits`; ids not
// among the hits are discarded.
Verdict ParseVerdict(std::string_view reply, const std::vector<Hit> &hits);

// Fail-closed: no hits or an LLM failure give NOT_ENOUGH_INFO.
Verdict Verify(const Claim &claim, const std::vector<Hit> &hits, const LlmClient &llm);

// The SUPPORTED claims in draft order as LLM_CLAIM evidence, origin set to
// the first supporting id. Throws InvalidArgument when sizes differ.
std::vector<EvidenceItem> FilterVerified(const std::vector<Claim> &claims,
                                         const std::vector<Verdict> &verdicts);

}  // namespace hetqa

#endif  // HETQA_GROUNDED_H_
