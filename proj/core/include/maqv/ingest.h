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

#ifndef MAQV_INGEST_H_
#define MAQV_INGEST_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "maqv/clock.h"
#include "maqv/corpus.h"
#include "maqv/html.h"

namespace maqv {

// --- slug candidates ----------------------------------------------------

enum class SlugVariant { kExact, kSuffix, kCasePermuted };

std::string_view SlugVariantName(SlugVariant v);

struct SlugCandidate {
  std::string slug;
  SlugVariant variant = SlugVariant::kExact;

  friend bool operator==(const SlugCandidate&, const SlugCandidate&) = default;
};

struct SlugOptions {
  std::vector<std::string> suffixes = {"_(Quest)", "_(Mission)", "_(quest)"};
  std::vector<std::string> stop_words = {"a",  "an", "the", "of", "to",
                                         "in", "on", "at",  "for", "and"};
  std::size_t max_candidates = 16;
};

// Deterministic candidate list: exact underscore form, suffix variants,
// then case permutations of stop words. No duplicates; capped.
std::vector<SlugCandidate> GenerateSlugCandidates(
    std::string_view title, const SlugOptions& options = SlugOptions());

// --- HTTP transport -----------------------------------------------------

struct HttpResponse {
  int status = 0;  // 0 when the transport failed before a response
  std::string body;
  std::string error;  // transport-level failure description
};

// Minimal GET transport.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse Get(const std::string& url,
                           const std::multimap<std::string, std::string>& query,
                           double timeout_seconds) = 0;
};

// cpp-httplib backed transport; `url` must be absolute (http or https).
std::unique_ptr<HttpTransport> MakeHttpTransport();

// Splits "https://host:port/path" into ("https://host:port", "/path").
std::pair<std::string, std::string> SplitUrl(std::string_view url);

// --- fetching -----------------------------------------------------------

struct FetchPolicy {
  double rate_limit_seconds = 5.0;
  int max_retries = 5;
  double timeout_seconds = 30.0;
  std::string license = "CC BY-SA 3.0";
};

struct FetchResult {
  std::string raw_html;
  std::string final_slug;
  std::vector<std::string> redirect_chain;  // titles, requested first
  SnapshotMeta snapshot;
  int attempts = 0;
};

enum class FetchStatus { kOk, kMissing, kFailed };

struct FetchOutcome {
  FetchStatus status = FetchStatus::kFailed;
  std::optional<FetchResult> result;
  std::string error;
  int attempts = 0;
};

// Talks to one MediaWiki Action API endpoint (".../api.php"). Requests are
// serialized through the fetcher's rate limiter.
class WikiFetcher {
 public:
  WikiFetcher(std::string api_endpoint, FetchPolicy policy,
              HttpTransport& transport, Clock& clock);

  // Fetches one slug via action=parse; follows redirects; retries HTTP 429,
  // 5xx and transport failures up to policy.max_retries attempts.
  FetchOutcome FetchPage(std::string_view slug);

  // Tries candidates in order; missing pages fall through to the next one.
  FetchOutcome FetchFirstAvailable(std::span<const SlugCandidate> candidates);

  const std::string& endpoint() const { return endpoint_; }

 private:
  std::string endpoint_;
  FetchPolicy policy_;
  HttpTransport& transport_;
  Clock& clock_;
  RateLimiter limiter_;
};

// "https://x.fandom.com/api.php" + slug + oldid ->
// "https://x.fandom.com/index.php?title=<slug>&oldid=<rev>".
std::string SnapshotUrl(std::string_view api_endpoint, std::string_view slug,
                        long long revision_id);

// --- admission ----------------------------------------------------------

enum class RejectionReason { kEmpty, kTooShort };

std::string_view RejectionReasonName(RejectionReason r);

struct Rejection {
  RejectionReason reason;
  int word_count = 0;
};

struct AdmissionInput {
  std::string mission_id;
  std::string game_id;
  std::string title;
  QuestType quest_type = QuestType::kMain;
  std::optional<SnapshotMeta> snapshot;
};

using Admission = std::variant<MissionRecord, Rejection>;

// Admits iff the cleaned text has at least kMinWordCount words.
Admission AdmitMission(std::string_view text, const AdmissionInput& input);

// Mission id derived from a game id and title ("fallout4/mama-murphy").
std::string MakeMissionId(std::string_view game_id, std::string_view title);

// --- snapshot store -----------------------------------------------------

// One JSON file per page, keyed by revision id: <dir>/<revision_id>.json.
class SnapshotStore {
 public:
  explicit SnapshotStore(std::filesystem::path dir);

  std::filesystem::path PathFor(long long revision_id) const;
  bool Contains(long long revision_id) const;
  // Writes once; an existing snapshot is never overwritten.
  void Save(const FetchResult& result) const;
  FetchResult Load(long long revision_id) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace maqv

#endif  // MAQV_INGEST_H_
