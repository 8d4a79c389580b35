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

#ifndef MAQV_EXTRACT_H_
#define MAQV_EXTRACT_H_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maqv/clock.h"
#include "maqv/corpus.h"

namespace maqv {

struct PromptBundle {
  std::string system_message;
  std::string user_message;

  friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

// Serializes strings the way Python's json.dumps(..., ensure_ascii=False)
// does: ", " separators, non-ASCII left as UTF-8.
std::string PythonJsonDumps(const std::vector<std::string>& items);

// Instantiates the extraction prompt template for one mission.
// Throws kPrecondition on an empty text; libraries are never empty.
PromptBundle BuildPrompt(const ActionLibrary& library,
                         std::string_view walkthrough_text);

struct BackendConfig {
  std::string model_id = "gpt-4.1-2025-04-14";
  double temperature = 0.0;
  double top_p = 1.0;
  double timeout_seconds = 30.0;
  int max_retries = 5;
  double rate_limit_seconds = 5.0;

  // Throws kPrecondition when temperature < 0, top_p outside (0,1] or
  // max_retries < 1.
  void Validate() const;
};

// Wire contract of a text-completion call.
struct CompletionRequest {
  std::string model_id;
  std::string system;
  std::string user;
  double temperature = 0.0;
  double top_p = 1.0;
  double timeout_seconds = 30.0;
};

// Raised by backends for transport or provider failures.
class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual std::string name() const = 0;
  virtual std::string Complete(const CompletionRequest& request) = 0;
};

// Offline deterministic backend: keyword-matches the library against the
// mission text embedded in the prompt.
class StubBackend final : public CompletionBackend {
 public:
  explicit StubBackend(const ActionLibrary& library) : library_(library) {}
  std::string name() const override { return "stub"; }
  std::string Complete(const CompletionRequest& request) override;

 private:
  const ActionLibrary& library_;
};

// Keyword matcher behind StubBackend. Walks the text left to right; at each
// word, an action-name keyword wins over a category keyword, and a category
// keyword maps to the first library action of that category. Returns the
// JSON array text.
std::string StubComplete(std::string_view text, const ActionLibrary& library);

// OpenAI-compatible chat-completions client (POST {base}/v1/chat/completions).
struct ChatBackendOptions {
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string api_key;  // sent as a bearer token when non-empty
};
std::unique_ptr<CompletionBackend> MakeChatBackend(ChatBackendOptions options);

// Serializes calls to `inner` through a shared rate limiter.
class RateLimitedBackend final : public CompletionBackend {
 public:
  RateLimitedBackend(CompletionBackend& inner, RateLimiter& limiter)
      : inner_(inner), limiter_(limiter) {}
  std::string name() const override { return inner_.name(); }
  std::string Complete(const CompletionRequest& request) override {
    limiter_.Acquire();
    return inner_.Complete(request);
  }

 private:
  CompletionBackend& inner_;
  RateLimiter& limiter_;
};

enum class ExtractionStatus { kOk, kFailed };

enum class FailureReason {
  kNone,
  kMalformedJson,
  kNonStringElement,
  kUnknownAction,
  kBackendError,
};

std::string_view FailureReasonName(FailureReason r);

struct ExtractionOutcome {
  ExtractionStatus status = ExtractionStatus::kFailed;
  ActionSequence sequence;  // meaningful when ok
  int attempts = 0;
  FailureReason failure_reason = FailureReason::kNone;
  std::string detail;
};

// One line per attempt in the extraction log.
struct AttemptRecord {
  std::string mission_id;
  int attempt = 0;
  std::string status;  // "ok" | "failed"
  std::string reason;  // failure reason name, empty when ok
};

using AttemptSink = std::function<void(const AttemptRecord&)>;

// Removes a surrounding ``` / ```json fence and trims whitespace.
std::string StripCodeFence(std::string_view response);

struct ResponseCheck {
  FailureReason reason = FailureReason::kNone;
  ActionSequence sequence;
  std::vector<std::string> unknown;  // names outside the library
};

// Validates one raw response: JSON array, all strings, all library members.
ResponseCheck CheckResponse(std::string_view response,
                            const ActionLibrary& library);

// Runs the retry loop for one mission. Each attempt must yield an array of
// library action names. An unknown-action answer earns one repair attempt
// with a corrective note; a second violation fails the mission. The clock
// sleeps rate_limit_seconds between attempts.
ExtractionOutcome ExtractSequence(const MissionRecord& mission,
                                  const ActionLibrary& library,
                                  CompletionBackend& backend,
                                  const BackendConfig& config, Clock& clock,
                                  const AttemptSink& sink = {});

// Appended to the user message on the repair attempt.
std::string RepairNote(const std::vector<std::string>& unknown);

}  // namespace maqv

#endif  // MAQV_EXTRACT_H_
