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

#include "fixture_shim.h"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <stdexcept>

#include "hetqa/text_util.h"

namespace hetqa::testing {

using nlohmann::json;

FixtureShim::FixtureShim() : server_(std::make_unique<httplib::Server>()) {
  // More workers than any client-side cap under test.
  server_->new_task_queue = [] { return new httplib::ThreadPool(32); };
  auto post = [this](const std::string &route) {
    server_->Post(route, [this, route](const httplib::Request &req, httplib::Response &res) {
      auto [status, body] = Handle(route, req.body, "");
      res.status = status;
      res.set_content(body, "application/json");
    });
  };
  for (const char *route : {"/retrieve", "/link", "/parse", "/chat"}) post(route);
  server_->Get("/sparql", [this](const httplib::Request &req, httplib::Response &res) {
    auto [status, body] = Handle("/sparql", "", req.get_param_value("query"));
    res.status = status;
    res.set_content(body, "application/sparql-results+json");
  });
}

FixtureShim::~FixtureShim() { Stop(); }

void FixtureShim::LoadFixture(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read shim fixture " + path);
  std::lock_guard<std::mutex> lock(mu_);
  fixture_ = json::parse(in);
}

void FixtureShim::AddCollection(const std::string &name, std::vector<Passage> passages) {
  auto index = std::make_shared<Bm25Index>(Bm25Index::Build(std::move(passages)));
  std::lock_guard<std::mutex> lock(mu_);
  collections_[name] = std::move(index);
}

void FixtureShim::ScriptChat(std::vector<std::pair<int, std::string>> replies) {
  std::lock_guard<std::mutex> lock(mu_);
  chat_script_ = std::move(replies);
  chat_next_ = 0;
}

void FixtureShim::OverrideRoute(const std::string &route, int status, std::string body) {
  std::lock_guard<std::mutex> lock(mu_);
  overrides_[route] = {status, std::move(body)};
}

void FixtureShim::DelayRoute(const std::string &route, int millis) {
  std::lock_guard<std::mutex> lock(mu_);
  delays_[route] = millis;
}

void FixtureShim::Start() {
  port_ = server_->bind_to_any_port("127.0.0.1");
  if (port_ < 0) throw std::runtime_error("shim: cannot bind");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void FixtureShim::Stop() {
  if (thread_.joinable()) {
    server_->stop();
    thread_.join();
  }
}

std::string FixtureShim::BaseUrl() const { return "http://127.0.0.1:" + std::to_string(port_); }

int FixtureShim::Count(const std::string &route) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = bodies_.find(route);
  return it == bodies_.end() ? 0 : static_cast<int>(it->second.size());
}

std::vector<std::string> FixtureShim::Bodies(const std::string &route) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = bodies_.find(route);
  return it == bodies_.end() ? std::vector<std::string>{} : it->second;
}

std::pair<int, std::string> FixtureShim::Handle(const std::string &route, const std::string &body,
                                                const std::string &query) {
  int delay = 0;
  {
    std::lock_guard<std::mutex> lock(mu_);
    bodies_[route].push_back(route == "/sparql" ? query : body);
    if (auto it = delays_.find(route); it != delays_.end()) delay = it->second;
    if (auto it = overrides_.find(route); it != overrides_.end()) return it->second;
  }
  if (delay > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay));
  if (route == "/sparql") return Sparql(query);
  json request;
  try {
    request = json::parse(body);
  } catch (const json::exception &) {
    return {400, R"({"error":"malformed JSON"})"};
  }
  try {
    if (route == "/retrieve") return Retrieve(request);
    if (route == "/link") return Link(request);
    if (route == "/parse") return Parse(request);
    if (route == "/chat") return Chat(request);
  } catch (const json::exception &e) {
    return {400, json{{"error", e.what()}}.dump()};
  }
  return {404, "{}"};
}

std::pair<int, std::string> FixtureShim::Retrieve(const json &request) {
  std::string collection = request.at("collection").get<std::string>();
  std::string query = request.at("query").get<std::string>();
  size_t k = request.at("k").get<size_t>();
  std::shared_ptr<Bm25Index> index;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = collections_.find(collection);
    if (it == collections_.end()) return {404, R"({"error":"unknown collection"})"};
    index = it->second;
  }
  json hits = json::array();
  if (k > 0) {
    for (const Hit &hit : index->Retrieve(query, k)) {
      hits.push_back({{"doc_id", hit.doc_id},
                      {"score", hit.score},
                      {"text", hit.text},
                      {"kind", PassageKindName(hit.kind)}});
    }
  }
  return {200, json{{"hits", hits}}.dump()};
}

std::pair<int, std::string> FixtureShim::Link(const json &request) {
  std::string text = ToLower(request.at("text").get<std::string>());
  std::vector<std::string> hinted;
  for (const json &h : request.value("hints", json::array())) {
    hinted.push_back(ToLower(h.at("surface").get<std::string>()));
  }
  json entities = json::array();
  std::lock_guard<std::mutex> lock(mu_);
  for (const json &e : fixture_.value("link", json::array())) {
    std::string surface = ToLower(e.at("surface").get<std::string>());
    bool hint = std::find(hinted.begin(), hinted.end(), surface) != hinted.end();
    if (e.value("requires_hint", false) ? !hint : text.find(surface) == std::string::npos) continue;
    entities.push_back({{"surface", e.at("surface")},
                        {"kb_id", e.at("kb_id")},
                        {"label", e.at("label")},
                        {"score", e.at("score")}});
  }
  return {200, json{{"entities", entities}}.dump()};
}

std::pair<int, std::string> FixtureShim::Parse(const json &request) {
  std::string question = request.at("question").get<std::string>();
  request.at("entities");
  std::lock_guard<std::mutex> lock(mu_);
  const json parses = fixture_.value("parse", json::object());
  if (parses.contains(question)) return {200, parses.at(question).dump()};
  return {200, R"({"sparql":"","mentions":[]})"};
}

std::pair<int, std::string> FixtureShim::Sparql(const std::string &query) {
  std::lock_guard<std::mutex> lock(mu_);
  const json results = fixture_.value("sparql", json::object());
  if (results.contains(query)) return {200, results.at(query).dump()};
  return {200, R"({"head":{"vars":["x"]},"results":{"bindings":[]}})"};
}

std::pair<int, std::string> FixtureShim::Chat(const json &request) {
  request.at("messages");
  int now = ++in_flight_chat_;
  int seen = max_concurrent_chat_.load();
  while (now > seen && !max_concurrent_chat_.compare_exchange_weak(seen, now)) {
  }
  std::pair<int, std::string> reply;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (chat_next_ < chat_script_.size()) {
      reply = chat_script_[chat_next_++];
    } else {
      reply = {200, default_chat_};
    }
  }
  int delay = 0;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = delays_.find("/chat-inflight"); it != delays_.end()) delay = it->second;
  }
  if (delay > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay));
  --in_flight_chat_;
  if (reply.first != 200) return {reply.first, json{{"error", reply.second}}.dump()};
  return {200, json{{"content", reply.second}}.dump()};
}

}  // namespace hetqa::testing
