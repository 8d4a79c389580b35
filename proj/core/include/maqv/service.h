// Copyright 2026 The MAQV Toolkit Authors.
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

#ifndef MAQV_SERVICE_H_
#define MAQV_SERVICE_H_

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "maqv/corpus.h"

namespace maqv {

using QueryParams = std::map<std::string, std::string>;

struct ApiResponse {
  int status = 200;
  std::string body;
};

// Copies `value` with every floating-point number rounded to `digits`
// significant digits.
Json RoundFloats(const Json& value, int digits = 6);

// Rounded, key-sorted, compact serialization used for every response body.
std::string StableDump(const Json& value);

// Read-only JSON API over an immutable corpus. Bodies are envelopes
// {status, data | error, params, corpus_digest}; identical requests yield
// identical bytes. Safe for concurrent use.
class ApiService {
 public:
  explicit ApiService(Corpus corpus);

  ApiResponse Handle(std::string_view method, std::string_view path,
                     const QueryParams& query) const;

  const Corpus& corpus() const { return corpus_; }
  std::size_t cache_size() const;

 private:
  ApiResponse Route(std::string_view path, const QueryParams& query) const;

  Corpus corpus_;
  mutable std::mutex cache_mu_;
  mutable std::map<std::string, ApiResponse> cache_;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string cors_origin = "*";
  std::string static_dir;  // optional dashboard bundle served under /app
};

// HTTP front end for ApiService.
class HttpServer {
 public:
  HttpServer(const ApiService& api, ServerOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and returns the bound port, or -1.
  int Bind();
  // Serves until Stop(); call after Bind().
  bool Run();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace maqv

#endif  // MAQV_SERVICE_H_
