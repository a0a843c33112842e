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

#include "hetqa/llm.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hetqa/errors.h"
#include "hetqa/text_util.h"

namespace hetqa {

// Defined in the generated builtin_prompts.cc.
const std::vector<std::string_view> &BuiltinPromptSources();

namespace {

using nlohmann::json;

bool IsSlotChar(char c, bool first) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         (!first && c >= '0' && c <= '9');
}

// Calls on_text for literal runs and on_slot for {name} occurrences.
template <typename TextFn, typename SlotFn>
void ScanSlots(std::string_view s, TextFn on_text, SlotFn on_slot) {
  size_t i = 0;
  size_t literal = 0;
  while (i < s.size()) {
    if (s[i] == '{' && i + 1 < s.size() && IsSlotChar(s[i + 1], true)) {
      size_t j = i + 1;
      while (j < s.size() && IsSlotChar(s[j], false)) ++j;
      if (j < s.size() && s[j] == '}') {
        on_text(s.substr(literal, i - literal));
        on_slot(s.substr(i + 1, j - i - 1));
        i = j + 1;
        literal = i;
        continue;
      }
    }
    ++i;
  }
  on_text(s.substr(literal));
}

class SemaphoreGuard {
 public:
  explicit SemaphoreGuard(std::counting_semaphore<1024> &sem) : sem_(sem) { sem_.acquire(); }
  ~SemaphoreGuard() { sem_.release(); }
  SemaphoreGuard(const SemaphoreGuard &) = delete;
  SemaphoreGuard &operator=(const SemaphoreGuard &) = delete;

 private:
  std::counting_semaphore<1024> &sem_;
};

std::string Get(const Bindings &b, const std::string &key) {
  auto it = b.find(key);
  return it == b.end() ? std::string() : it->second;
}

std::vector<std::string> Lines(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string t = Trim(line);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::set<std::string> ContentTokens(std::string_view text) {
  std::set<std::string> out;
  for (std::string &t : Tokenize(text)) {
    if (!IsStopword(t)) out.insert(std::move(t));
  }
  return out;
}

std::string SummarizeReply(const Bindings &b) {
  std::set<std::string> question = ContentTokens(Get(b, "question"));
  std::string passage = Get(b, "passage");
  std::vector<std::string> units;
  if (passage.find("<tr>") != std::string::npos) {
    size_t start = 0;
    while (start < passage.size()) {
      size_t end = passage.find("<tr>", start);
      std::string unit = Trim(passage.substr(start, end == std::string::npos ? std::string::npos
                                                                             : end - start));
      if (!unit.empty()) units.push_back(unit);
      if (end == std::string::npos) break;
      start = end + 4;
    }
  } else {
    units = SplitSentences(passage);
  }
  size_t best = 0;
  const std::string *choice = nullptr;
  for (const std::string &unit : units) {
    size_t overlap = 0;
    for (const std::string &t : ContentTokens(unit)) overlap += question.count(t);
    if (overlap > best) {
      best = overlap;
      choice = &unit;
    }
  }
  return choice == nullptr ? "None" : *choice;
}

std::string ClaimSplitReply(const Bindings &b) {
  std::vector<std::string> sentences = SplitSentences(Get(b, "draft"));
  if (sentences.empty()) return "None";
  std::string out;
  for (const std::string &s : sentences) out += "- " + s + "\n";
  return out;
}

std::string VerifyReply(const Bindings &b) {
  std::string claim = NormalizeAnswer(Get(b, "claim"));
  if (claim.empty()) return "NOT ENOUGH INFO";
  for (const std::string &line : Lines(Get(b, "evidence"))) {
    if (line.front() != '[') continue;
    size_t close = line.find(']');
    if (close == std::string::npos) continue;
    std::string id = line.substr(1, close - 1);
    std::string text = NormalizeAnswer(line.substr(close + 1));
    if (text.find(claim) != std::string::npos) return "SUPPORTED: [" + id + "]";
  }
  return "NOT ENOUGH INFO";
}

std::string FuseReply(const Bindings &b) {
  for (const std::string &line : Lines(Get(b, "evidence"))) {
    size_t colon = line.find(": ");
    if (colon == std::string::npos) continue;
    std::string text = Trim(line.substr(colon + 2));
    size_t is = text.rfind(" is: ");
    std::string span = is == std::string::npos ? text : text.substr(is + 5);
    span = Trim(span);
    while (!span.empty() && span.back() == '.') span.pop_back();
    span = Trim(span);
    if (!span.empty()) return span;
  }
  return "None";
}

std::string JudgeReply(const Bindings &b) {
  auto tokens = [](const std::string &s) {
    std::multiset<std::string> out;
    for (std::string &w : SplitWords(NormalizeAnswer(s))) {
      if (w != "and") out.insert(std::move(w));
    }
    return out;
  };
  return tokens(Get(b, "gold")) == tokens(Get(b, "prediction")) ? "Yes" : "No";
}

}  // namespace

std::vector<std::string> PromptTemplate::Slots() const {
  std::vector<std::string> slots;
  ScanSlots(
      user_suffix, [](std::string_view) {},
      [&](std::string_view name) { slots.emplace_back(name); });
  return slots;
}

PromptTemplate ParsePromptTemplate(std::string_view json_text) {
  PromptTemplate t;
  try {
    json j = json::parse(json_text);
    t.name = j.at("name").get<std::string>();
    t.version = j.value("version", 1);
    t.system = j.value("system", "");
    for (const json &shot : j.value("few_shot", json::array())) {
      t.few_shot.push_back(
          FewShotBlock{shot.at("user").get<std::string>(), shot.at("assistant").get<std::string>()});
    }
    t.user_suffix = j.at("user").get<std::string>();
  } catch (const json::exception &e) {
    throw InvalidArgument(std::string("malformed prompt template: ") + e.what());
  }
  std::set<std::string> seen;
  for (const std::string &slot : t.Slots()) {
    if (!seen.insert(slot).second) {
      throw InvalidArgument("prompt template " + t.name + " repeats slot {" + slot + "}");
    }
  }
  return t;
}

std::string RenderSuffix(const PromptTemplate &tmpl, const Bindings &bindings) {
  std::string out;
  ScanSlots(
      tmpl.user_suffix, [&](std::string_view text) { out.append(text); },
      [&](std::string_view name) {
        auto it = bindings.find(std::string(name));
        if (it == bindings.end()) throw UnboundSlot(std::string(name));
        out.append(it->second);
      });
  return out;
}

std::string Render(const PromptTemplate &tmpl, const Bindings &bindings) {
  std::vector<std::string> parts;
  if (!tmpl.system.empty()) parts.push_back(tmpl.system);
  for (const FewShotBlock &shot : tmpl.few_shot) parts.push_back(shot.user + "\n" + shot.assistant);
  parts.push_back(RenderSuffix(tmpl, bindings));
  return Join(parts, "\n\n");
}

std::vector<ChatMessage> RenderMessages(const PromptTemplate &tmpl, const Bindings &bindings) {
  std::vector<ChatMessage> messages;
  if (!tmpl.system.empty()) messages.push_back({"system", tmpl.system});
  for (const FewShotBlock &shot : tmpl.few_shot) {
    messages.push_back({"user", shot.user});
    messages.push_back({"assistant", shot.assistant});
  }
  messages.push_back({"user", RenderSuffix(tmpl, bindings)});
  return messages;
}

const PromptLibrary &PromptLibrary::Builtin() {
  static const PromptLibrary *library = [] {
    auto *lib = new PromptLibrary;
    for (std::string_view source : BuiltinPromptSources()) lib->Add(ParsePromptTemplate(source));
    return lib;
  }();
  return *library;
}

PromptLibrary PromptLibrary::WithOverrides(const std::string &dir) {
  PromptLibrary lib = Builtin();
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw InvalidArgument("prompt directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto &file : files) {
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    lib.Add(ParsePromptTemplate(ss.str()));
  }
  return lib;
}

void PromptLibrary::Add(PromptTemplate tmpl) {
  std::string name = tmpl.name;
  templates_[name] = std::move(tmpl);
}

const PromptTemplate &PromptLibrary::Get(std::string_view name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) throw InvalidArgument("unknown prompt template: " + std::string(name));
  return it->second;
}

bool PromptLibrary::Has(std::string_view name) const { return templates_.count(name) > 0; }

std::vector<MockRule> ParseMockRules(std::string_view json_text) {
  std::vector<MockRule> rules;
  try {
    json j = json::parse(json_text);
    const json &list = j.is_object() ? j.at("rules") : j;
    for (const json &r : list) {
      MockRule rule{r.value("template", ""), {}, r.at("reply").get<std::string>()};
      if (r.contains("contains")) {
        const json &c = r.at("contains");
        if (c.is_array()) {
          rule.contains = c.get<std::vector<std::string>>();
        } else {
          rule.contains.push_back(c.get<std::string>());
        }
      }
      rules.push_back(std::move(rule));
    }
  } catch (const json::exception &e) {
    throw InvalidArgument(std::string("malformed mock rules: ") + e.what());
  }
  return rules;
}

std::vector<MockRule> LoadMockRules(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read mock rules " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseMockRules(ss.str());
}

std::optional<std::string> BuiltinMockReply(const CompletionRequest &request) {
  const std::string &name = request.template_name;
  const Bindings &b = request.bindings;
  if (name == stage::kSummarize) return SummarizeReply(b);
  if (name == stage::kDraft) return std::string();
  if (name == stage::kClaimSplit) return ClaimSplitReply(b);
  if (name == stage::kVerify) return VerifyReply(b);
  if (name == stage::kFuse) return FuseReply(b);
  if (name == stage::kJudge) return JudgeReply(b);
  return std::nullopt;
}

MockBackend::MockBackend(std::vector<MockRule> rules, bool builtin_responders)
    : rules_(std::move(rules)), builtin_responders_(builtin_responders) {}

std::string MockBackend::Complete(const CompletionRequest &request) {
  const std::string &haystack = request.user_turn.empty() ? request.prompt : request.user_turn;
  for (const MockRule &rule : rules_) {
    bool template_ok = rule.template_name.empty() || rule.template_name == "*" ||
                       rule.template_name == request.template_name;
    if (!template_ok) continue;
    bool all = std::all_of(rule.contains.begin(), rule.contains.end(), [&](const std::string &c) {
      return haystack.find(c) != std::string::npos;
    });
    if (all) return rule.reply;
  }
  if (builtin_responders_) {
    if (auto reply = BuiltinMockReply(request)) return *reply;
  }
  return "None";
}

std::string FailingBackend::Complete(const CompletionRequest &) {
  throw BackendUnavailable("LLM backend unavailable");
}

RemoteBackend::RemoteBackend(RemoteBackendOptions options)
    : options_(std::move(options)), in_flight_(std::max(1, std::min(options_.max_in_flight, 1024))) {}

std::string RemoteBackend::Complete(const CompletionRequest &request) {
  json messages = json::array();
  for (const ChatMessage &m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  json body = {{"model", options_.model},
               {"messages", messages},
               {"temperature", request.temperature},
               {"max_tokens", request.max_tokens}};
  Headers headers;
  if (!options_.api_key.empty()) headers.emplace_back("Authorization", "Bearer " + options_.api_key);

  SemaphoreGuard guard(in_flight_);
  std::string last_error = "no attempt made";
  auto backoff = options_.retry.initial_backoff;
  for (int attempt = 1; attempt <= std::max(1, options_.retry.attempts); ++attempt) {
    try {
      HttpResponse response = HttpPost(options_.endpoint, "/chat", body.dump(-1, ' ', false,
                                                                            json::error_handler_t::replace),
                                       "application/json", options_.timeout, headers);
      if (response.status >= 200 && response.status < 300) {
        try {
          return json::parse(response.body).at("content").get<std::string>();
        } catch (const json::exception &e) {
          throw BackendUnavailable(std::string("malformed /chat reply: ") + e.what());
        }
      }
      last_error = "HTTP " + std::to_string(response.status);
      if (response.status < 500 && response.status != 429) {
        throw BackendUnavailable("LLM backend rejected request: " + last_error);
      }
    } catch (const TransportError &e) {
      last_error = e.what();
    }
    if (attempt < options_.retry.attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw BackendUnavailable("LLM backend unavailable after " +
                           std::to_string(options_.retry.attempts) + " attempts: " + last_error);
}

LlmClient::LlmClient(std::shared_ptr<LlmBackend> backend, PromptLibrary prompts)
    : backend_(std::move(backend)), prompts_(std::move(prompts)) {}

std::string LlmClient::Run(std::string_view template_name, const Bindings &bindings,
                           int max_tokens) const {
  const PromptTemplate &tmpl = prompts_.Get(template_name);
  CompletionRequest request;
  request.template_name = std::string(template_name);
  request.bindings = bindings;
  request.user_turn = RenderSuffix(tmpl, bindings);
  request.prompt = Render(tmpl, bindings);
  request.messages = RenderMessages(tmpl, bindings);
  request.max_tokens = max_tokens;
  request.temperature = 0.0;
  return backend_->Complete(request);
}

bool IsNoneReply(std::string_view reply) {
  std::string t = ToLower(Trim(reply));
  while (!t.empty() && (t.back() == '.' || t.back() == '!')) t.pop_back();
  return t.empty() || t == "none" || t == "n/a";
}

}  // namespace hetqa
