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

// Minimal blocking HTTP client used by every remote service adapter.

#ifndef HETQA_HTTP_CLIENT_H_
#define HETQA_HTTP_CLIENT_H_

#include <chrono>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hetqa {

// "http://host:port/base" split into the origin and an optional path prefix.
struct Endpoint {
  std::string origin;     // scheme://host[:port]
  std::string base_path;  // "" or "/prefix" without trailing slash

  static Endpoint Parse(std::string_view url);
  bool empty() const { return origin.empty(); }
  std::string Url(std::string_view path) const { return origin + base_path + std::string(path); }
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

using Headers = std::vector<std::pair<std::string, std::string>>;

// Throws TransportError when the server cannot be reached or the request
// times out. Any HTTP status is returned to the caller.
HttpResponse HttpPost(const Endpoint &endpoint, std::string_view path,
                      const std::string &body, std::string_view content_type,
                      std::chrono::milliseconds timeout, const Headers &headers = {});

HttpResponse HttpGet(const Endpoint &endpoint, std::string_view path_and_query,
                     std::chrono::milliseconds timeout, const Headers &headers = {});

// Convenience for JSON services: POSTs `body` and returns the parsed reply
// text. Non-2xx statuses raise ProtocolError carrying the status.
std::string PostJson(const Endpoint &endpoint, std::string_view path,
                     const std::string &json_body, std::chrono::milliseconds timeout,
                     const Headers &headers = {});

std::string UrlEncode(std::string_view text);

}  // namespace hetqa

#endif  // HETQA_HTTP_CLIENT_H_
