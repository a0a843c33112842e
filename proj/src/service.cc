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

#include "hetqa/service.h"

#include <httplib.h>

#include <json.hpp>

#include "hetqa/errors.h"

namespace hetqa {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string ErrorJson(const std::string &message) {
  ordered_json j;
  j["error"] = message;
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace

std::string AskResponseJson(const AskResult &result) {
  ordered_json j;
  j["answer"] = result.answer.text;
  ordered_json evidences = ordered_json::array();
  for (const EvidenceItem &item : result.answer.pool.items) {
    evidences.push_back(ordered_json::array({EvidenceKindName(item.kind), item.text}));
  }
  j["evidences"] = std::move(evidences);
  return j.dump(4, ' ', false, json::error_handler_t::replace);
}

std::pair<int, std::string> HandleAsk(const Pipeline &pipeline, std::string_view body) {
  json request;
  try {
    request = json::parse(body);
  } catch (const json::exception &) {
    return {400, ErrorJson("request body is not valid JSON")};
  }
  if (!request.is_object() || !request.contains("question")) {
    return {400, ErrorJson("missing field: question")};
  }
  if (!request.at("question").is_string()) {
    return {400, ErrorJson("field question must be a string")};
  }
  std::string question = request.at("question").get<std::string>();
  try {
    return {200, AskResponseJson(pipeline.Ask(question))};
  } catch (const InvalidArgument &e) {
    return {400, ErrorJson(e.what())};
  } catch (const std::exception &e) {
    return {500, ErrorJson(e.what())};
  }
}

QaService::QaService(const Pipeline &pipeline)
    : pipeline_(pipeline), server_(std::make_unique<httplib::Server>()) {
  size_t threads = static_cast<size_t>(pipeline_.config().max_requests);
  server_->new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  server_->Get("/health", [](const httplib::Request &, httplib::Response &res) {
    res.status = 200;
    res.set_content("{\"status\":\"ok\"}", "application/json");
  });
  server_->Post("/ask", [this](const httplib::Request &req, httplib::Response &res) {
    auto [status, body] = HandleAsk(pipeline_, req.body);
    res.status = status;
    res.set_content(body, "application/json");
  });
}

QaService::~QaService() { Stop(); }

int QaService::BindToAnyPort(const std::string &host) { return server_->bind_to_any_port(host); }

bool QaService::Bind(const std::string &host, int port) { return server_->bind_to_port(host, port); }

bool QaService::ListenAfterBind() { return server_->listen_after_bind(); }

void QaService::Stop() {
  if (server_->is_running()) server_->stop();
}

void QaService::WaitUntilReady() const { server_->wait_until_ready(); }

}  // namespace hetqa
