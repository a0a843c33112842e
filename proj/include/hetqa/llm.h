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

// LLM access for every prompting stage: prompt templates, a remote chat
// backend and a deterministic rule-driven mock.

#ifndef HETQA_LLM_H_
#define HETQA_LLM_H_

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hetqa/http_client.h"

namespace hetqa {

using Bindings = std::map<std::string, std::string>;

struct ChatMessage {
  std::string role;
  std::string content;

  bool operator==(const ChatMessage &) const = default;
};

struct FewShotBlock {
  std::string user;
  std::string assistant;
};

// A prompt made of a system turn, verbatim few-shot exchanges and a final
// user turn with `{slot}` placeholders. Only the final turn is rendered.
struct PromptTemplate {
  std::string name;
  int version = 1;
  std::string system;
  std::vector<FewShotBlock> few_shot;
  std::string user_suffix;

  // Slot names in order of appearance in user_suffix.
  std::vector<std::string> Slots() const;
};

// Parses the JSON template format used by the files under prompts/.
// Throws InvalidArgument on a malformed file or a repeated slot name.
PromptTemplate ParsePromptTemplate(std::string_view json_text);

// Single-pass substitution of every slot. Throws UnboundSlot.
std::string RenderSuffix(const PromptTemplate &tmpl, const Bindings &bindings);

// System, few-shot blocks and the rendered user turn as one text.
std::string Render(const PromptTemplate &tmpl, const Bindings &bindings);

// The same content as chat messages.
std::vector<ChatMessage> RenderMessages(const PromptTemplate &tmpl, const Bindings &bindings);

class PromptLibrary {
 public:
  // Templates compiled in from prompts/.
  static const PromptLibrary &Builtin();

  // Builtin templates overridden by any *.json found in `dir`.
  static PromptLibrary WithOverrides(const std::string &dir);

  void Add(PromptTemplate tmpl);
  // Throws InvalidArgument for unknown names.
  const PromptTemplate &Get(std::string_view name) const;
  bool Has(std::string_view name) const;

 private:
  std::map<std::string, PromptTemplate, std::less<>> templates_;
};

// Template names of the pipeline stages.
namespace stage {
inline constexpr std::string_view kEntityDetection = "entity_detection";
inline constexpr std::string_view kSummarize = "summarize";
inline constexpr std::string_view kDraft = "draft";
inline constexpr std::string_view kClaimSplit = "claim_split";
inline constexpr std::string_view kVerify = "verify";
inline constexpr std::string_view kFuse = "fuse";
inline constexpr std::string_view kJudge = "judge";
}  // namespace stage

struct CompletionRequest {
  std::string template_name;  // empty for raw message requests
  Bindings bindings;
  std::string prompt;     // full rendered text
  std::string user_turn;  // rendered final user turn; what mock rules match
  std::vector<ChatMessage> messages;
  int max_tokens = 256;
  double temperature = 0.0;
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  // Throws BackendUnavailable.
  virtual std::string Complete(const CompletionRequest &request) = 0;
};

struct MockRule {
  std::string template_name;  // empty or "*" matches any template
  std::vector<std::string> contains;  // substrings of the rendered user turn, all required
  std::string reply;
};

// Loads rules from a JSON array (or {"rules": [...]}) of objects with
// "template", "contains" (a string or a list of strings) and "reply".
std::vector<MockRule> LoadMockRules(const std::string &path);
std::vector<MockRule> ParseMockRules(std::string_view json_text);

// Deterministic backend. The first rule whose template and substring match
// wins. Without a match, stages that have a built-in responder answer with
// it (when enabled); everything else gets "None".
class MockBackend : public LlmBackend {
 public:
  explicit MockBackend(std::vector<MockRule> rules = {}, bool builtin_responders = true);
  std::string Complete(const CompletionRequest &request) override;

 private:
  std::vector<MockRule> rules_;
  bool builtin_responders_;
};

// Answer of the built-in responder for a stage, or nullopt if the stage has
// none. Responders read the stage bindings:
//   summarize    question, passage -> best-overlapping sentence or table row
//   draft        -> "" (no parametric knowledge)
//   claim_split  draft -> one "- claim" line per sentence
//   verify       claim, evidence ("[doc_id] text" lines) -> "SUPPORTED: [id]"
//                when the normalized claim is a substring of a passage
//   fuse         evidence ("KIND: text" lines) -> answer span of the first
//                item that has one ("... is: X." gives X)
//   judge        gold, prediction -> "Yes" when the normalized token
//                multisets agree ignoring "and"
std::optional<std::string> BuiltinMockReply(const CompletionRequest &request);

// Always throws BackendUnavailable; stands in for a dead service.
class FailingBackend : public LlmBackend {
 public:
  std::string Complete(const CompletionRequest &request) override;
};

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
};

struct RemoteBackendOptions {
  Endpoint endpoint;
  std::string model = "gpt-4";
  std::string api_key;
  RetryPolicy retry;
  std::chrono::milliseconds timeout{60000};
  int max_in_flight = 8;
};

// POST /chat {"model","messages","temperature","max_tokens"} -> {"content"}.
class RemoteBackend : public LlmBackend {
 public:
  explicit RemoteBackend(RemoteBackendOptions options);
  std::string Complete(const CompletionRequest &request) override;

 private:
  RemoteBackendOptions options_;
  std::counting_semaphore<1024> in_flight_;
};

// Renders stage templates and forwards them to a backend. The only path by
// which pipeline stages reach an LLM.
class LlmClient {
 public:
  LlmClient(std::shared_ptr<LlmBackend> backend, PromptLibrary prompts = PromptLibrary::Builtin());

  // Temperature is fixed at 0 for every stage.
  std::string Run(std::string_view template_name, const Bindings &bindings,
                  int max_tokens = 256) const;

  const PromptLibrary &prompts() const { return prompts_; }

 private:
  std::shared_ptr<LlmBackend> backend_;
  PromptLibrary prompts_;
};

// True for the conventional "nothing to say" replies ("None", "none.", "").
bool IsNoneReply(std::string_view reply);

}  // namespace hetqa

#endif  // HETQA_LLM_H_
