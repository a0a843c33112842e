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

#include "hetqa/http_client.h"

#include <httplib.h>

#include "hetqa/errors.h"

namespace hetqa {
namespace {

httplib::Client MakeClient(const Endpoint &endpoint, std::chrono::milliseconds timeout) {
  httplib::Client client(endpoint.origin);
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  auto micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  client.set_follow_location(true);
  return client;
}

httplib::Headers ToHeaders(const Headers &headers) {
  httplib::Headers out;
  for (const auto &[k, v] : headers) out.emplace(k, v);
  return out;
}

}  // namespace

Endpoint Endpoint::Parse(std::string_view url) {
  Endpoint e;
  if (url.empty()) return e;
  size_t scheme_end = url.find("://");
  size_t host_start = scheme_end == std::string_view::npos ? 0 : scheme_end + 3;
  size_t slash = url.find('/', host_start);
  if (slash == std::string_view::npos) {
    e.origin = std::string(url);
  } else {
    e.origin = std::string(url.substr(0, slash));
    std::string_view path = url.substr(slash);
    while (!path.empty() && path.back() == '/') path.remove_suffix(1);
    e.base_path = std::string(path);
  }
  if (scheme_end == std::string_view::npos) e.origin = "http://" + e.origin;
  return e;
}

HttpResponse HttpPost(const Endpoint &endpoint, std::string_view path,
                      const std::string &body, std::string_view content_type,
                      std::chrono::milliseconds timeout, const Headers &headers) {
  if (endpoint.empty()) throw TransportError("no endpoint configured");
  httplib::Client client = MakeClient(endpoint, timeout);
  std::string full = endpoint.base_path + std::string(path);
  auto result = client.Post(full, ToHeaders(headers), body, std::string(content_type));
  if (!result) {
    throw TransportError("POST " + endpoint.Url(path) + " failed: " +
                         httplib::to_string(result.error()));
  }
  return HttpResponse{result->status, result->body};
}

HttpResponse HttpGet(const Endpoint &endpoint, std::string_view path_and_query,
                     std::chrono::milliseconds timeout, const Headers &headers) {
  if (endpoint.empty()) throw TransportError("no endpoint configured");
  httplib::Client client = MakeClient(endpoint, timeout);
  std::string full = endpoint.base_path + std::string(path_and_query);
  auto result = client.Get(full, ToHeaders(headers));
  if (!result) {
    throw TransportError("GET " + endpoint.Url(path_and_query) + " failed: " +
                         httplib::to_string(result.error()));
  }
  return HttpResponse{result->status, result->body};
}

std::string PostJson(const Endpoint &endpoint, std::string_view path,
                     const std::string &json_body, std::chrono::milliseconds timeout,
                     const Headers &headers) {
  HttpResponse response =
      HttpPost(endpoint, path, json_body, "application/json", timeout, headers);
  if (response.status < 200 || response.status >= 300) {
    throw ProtocolError("POST " + endpoint.Url(path) + " returned HTTP " +
                        std::to_string(response.status));
  }
  return response.body;
}

std::string UrlEncode(std::string_view text) {
  static const char *kHex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

}  // namespace hetqa
