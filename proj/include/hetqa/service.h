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

// HTTP surface of the pipeline: POST /ask and GET /health.

#ifndef HETQA_SERVICE_H_
#define HETQA_SERVICE_H_

#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "hetqa/pipeline.h"

namespace httplib {
class Server;
}  // namespace httplib

namespace hetqa {

// {"answer": ..., "evidences": [[kind, text], ...]} with 4-space indent.
// The CLI `ask` command prints the same document.
std::string AskResponseJson(const AskResult &result);

// Handles a POST /ask body. Returns the HTTP status and the response body;
// 400 for malformed requests.
std::pair<int, std::string> HandleAsk(const Pipeline &pipeline, std::string_view body);

class QaService {
 public:
  // At most config.max_requests requests are handled concurrently.
  explicit QaService(const Pipeline &pipeline);
  ~QaService();

  // Binds to a free port and returns it, or -1.
  int BindToAnyPort(const std::string &host);
  bool Bind(const std::string &host, int port);
  // Blocks until Stop().
  bool ListenAfterBind();
  void Stop();
  void WaitUntilReady() const;

 private:
  const Pipeline &pipeline_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace hetqa

#endif  // HETQA_SERVICE_H_
