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

#include "maqv/ingest.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <httplib.h>

#include "maqv/error.h"
#include "maqv/sha256.h"
#include "maqv/text.h"

namespace maqv {

std::string_view SlugVariantName(SlugVariant v) {
  switch (v) {
    case SlugVariant::kExact: return "exact";
    case SlugVariant::kSuffix: return "suffix";
    case SlugVariant::kCasePermuted: return "case-permuted";
  }
  return "exact";
}

namespace {

std::string Capitalized(std::string_view word) {
  std::string out = ToLower(word);
  if (!out.empty()) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  return out;
}

bool IsLowercaseWord(std::string_view word) {
  return !word.empty() && std::islower(static_cast<unsigned char>(word[0]));
}

}  // namespace

std::vector<SlugCandidate> GenerateSlugCandidates(std::string_view title,
                                                  const SlugOptions& options) {
  std::vector<SlugCandidate> out;
  std::set<std::string> seen;
  auto add = [&](std::string slug, SlugVariant variant) {
    if (out.size() >= options.max_candidates) return;
    if (seen.insert(slug).second) out.push_back({std::move(slug), variant});
  };

  const std::vector<std::string> words = SplitWhitespace(title);
  if (words.empty()) return out;
  std::string exact;
  for (const std::string& w : words) {
    if (!exact.empty()) exact += '_';
    exact += w;
  }
  add(exact, SlugVariant::kExact);
  for (const std::string& suffix : options.suffixes) {
    add(exact + suffix, SlugVariant::kSuffix);
  }

  std::vector<std::size_t> stop_positions;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string lowered = ToLower(words[i]);
    if (std::find(options.stop_words.begin(), options.stop_words.end(),
                  lowered) != options.stop_words.end()) {
      stop_positions.push_back(i);
    }
  }
  // Each mask bit toggles the case of one stop word; mask 0 is the exact
  // form. Positions beyond 16 bits cannot fit under the cap anyway.
  const std::size_t bits = std::min<std::size_t>(stop_positions.size(), 16);
  for (std::size_t mask = 1; mask < (std::size_t{1} << bits); ++mask) {
    if (out.size() >= options.max_candidates) break;
    std::vector<std::string> variant = words;
    for (std::size_t b = 0; b < bits; ++b) {
      if (!(mask & (std::size_t{1} << b))) continue;
      std::string& w = variant[stop_positions[b]];
      w = IsLowercaseWord(w) ? Capitalized(w) : ToLower(w);
    }
    std::string slug;
    for (const std::string& w : variant) {
      if (!slug.empty()) slug += '_';
      slug += w;
    }
    add(std::move(slug), SlugVariant::kCasePermuted);
  }
  return out;
}

// --- transport ----------------------------------------------------------

std::pair<std::string, std::string> SplitUrl(std::string_view url) {
  std::size_t scheme = url.find("://");
  std::size_t host_start = scheme == std::string_view::npos ? 0 : scheme + 3;
  std::size_t path_start = url.find('/', host_start);
  if (path_start == std::string_view::npos) {
    return {std::string(url), "/"};
  }
  return {std::string(url.substr(0, path_start)),
          std::string(url.substr(path_start))};
}

namespace {

class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse Get(const std::string& url,
                   const std::multimap<std::string, std::string>& query,
                   double timeout_seconds) override {
    auto [base, path] = SplitUrl(url);
    HttpResponse out;
    try {
      httplib::Client client(base);
      const auto secs = static_cast<time_t>(timeout_seconds);
      client.set_connection_timeout(secs, 0);
      client.set_read_timeout(secs, 0);
      client.set_follow_location(true);
      httplib::Params params(query.begin(), query.end());
      httplib::Headers headers = {{"User-Agent", "maqv-toolkit/0.1"}};
      auto res = client.Get(path, params, headers);
      if (!res) {
        out.error = httplib::to_string(res.error());
        return out;
      }
      out.status = res->status;
      out.body = res->body;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    return out;
  }
};

bool IsTransient(int status) {
  return status == 0 || status == 429 || status >= 500;
}

}  // namespace

std::unique_ptr<HttpTransport> MakeHttpTransport() {
  return std::make_unique<HttplibTransport>();
}

// --- fetcher ------------------------------------------------------------

std::string SnapshotUrl(std::string_view api_endpoint, std::string_view slug,
                        long long revision_id) {
  std::string base(api_endpoint);
  const std::string api = "api.php";
  if (base.size() >= api.size() &&
      base.compare(base.size() - api.size(), api.size(), api) == 0) {
    base.replace(base.size() - api.size(), api.size(), "index.php");
  } else {
    if (!base.empty() && base.back() != '/') base += '/';
    base += "index.php";
  }
  return base + "?title=" + std::string(slug) +
         "&oldid=" + std::to_string(revision_id);
}

WikiFetcher::WikiFetcher(std::string api_endpoint, FetchPolicy policy,
                         HttpTransport& transport, Clock& clock)
    : endpoint_(std::move(api_endpoint)),
      policy_(std::move(policy)),
      transport_(transport),
      clock_(clock),
      limiter_(clock, policy_.rate_limit_seconds) {
  if (policy_.max_retries < 1) {
    throw Error(ErrorKind::kPrecondition, "max_retries must be >= 1");
  }
}

FetchOutcome WikiFetcher::FetchPage(std::string_view slug) {
  const std::multimap<std::string, std::string> query = {
      {"action", "parse"},   {"page", std::string(slug)},
      {"prop", "text|revid|displaytitle"},
      {"redirects", "1"},    {"format", "json"},
      {"formatversion", "2"}};
  FetchOutcome outcome;
  for (int attempt = 1; attempt <= policy_.max_retries; ++attempt) {
    outcome.attempts = attempt;
    limiter_.Acquire();
    HttpResponse res = transport_.Get(endpoint_, query, policy_.timeout_seconds);
    if (res.status == 404) {
      outcome.status = FetchStatus::kMissing;
      outcome.error = "HTTP 404";
      return outcome;
    }
    if (IsTransient(res.status)) {
      outcome.error = res.status == 0 ? "transport: " + res.error
                                      : "HTTP " + std::to_string(res.status);
      continue;
    }
    if (res.status != 200) {
      outcome.status = FetchStatus::kFailed;
      outcome.error = "HTTP " + std::to_string(res.status);
      return outcome;
    }
    Json doc = Json::parse(res.body, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) {
      outcome.error = "malformed API response";
      continue;
    }
    if (auto err = doc.find("error"); err != doc.end()) {
      const std::string code = err->value("code", "");
      if (code == "missingtitle" || code == "invalidtitle" ||
          code == "pagecannotexist") {
        outcome.status = FetchStatus::kMissing;
        outcome.error = code;
        return outcome;
      }
      outcome.error = "API error: " + code;
      if (code == "ratelimited" || code == "maxlag" || code == "readonly") {
        continue;
      }
      outcome.status = FetchStatus::kFailed;
      return outcome;
    }
    auto parse = doc.find("parse");
    if (parse == doc.end() || !parse->is_object()) {
      outcome.error = "response lacks 'parse'";
      continue;
    }
    FetchResult result;
    const Json& text = (*parse)["text"];
    if (text.is_string()) {
      result.raw_html = text.get<std::string>();
    } else if (text.is_object() && text.contains("*")) {
      result.raw_html = text["*"].get<std::string>();
    }
    std::string title = parse->value("title", std::string(slug));
    std::replace(title.begin(), title.end(), ' ', '_');
    result.final_slug = title;
    if (auto redirects = parse->find("redirects");
        redirects != parse->end() && redirects->is_array() &&
        !redirects->empty()) {
      result.redirect_chain.emplace_back(slug);
      for (const Json& r : *redirects) {
        std::string to = r.value("to", "");
        std::replace(to.begin(), to.end(), ' ', '_');
        result.redirect_chain.push_back(to);
      }
    }
    result.snapshot.revision_id = parse->value("revid", 0LL);
    result.snapshot.snapshot_url =
        SnapshotUrl(endpoint_, result.final_slug, result.snapshot.revision_id);
    result.snapshot.retrieved_at = clock_.UtcTimestamp();
    result.snapshot.license = policy_.license;
    result.snapshot.html_sha256 = Sha256Hex(result.raw_html);
    result.attempts = attempt;
    outcome.status = FetchStatus::kOk;
    outcome.result = std::move(result);
    outcome.error.clear();
    return outcome;
  }
  outcome.status = FetchStatus::kFailed;
  return outcome;
}

FetchOutcome WikiFetcher::FetchFirstAvailable(
    std::span<const SlugCandidate> candidates) {
  FetchOutcome last;
  last.status = FetchStatus::kMissing;
  last.error = "no candidates";
  int total_attempts = 0;
  for (const SlugCandidate& c : candidates) {
    FetchOutcome outcome = FetchPage(c.slug);
    total_attempts += outcome.attempts;
    if (outcome.status != FetchStatus::kMissing) {
      outcome.attempts = total_attempts;
      return outcome;
    }
    last = std::move(outcome);
  }
  last.attempts = total_attempts;
  return last;
}

// --- admission ----------------------------------------------------------

std::string_view RejectionReasonName(RejectionReason r) {
  return r == RejectionReason::kEmpty ? "empty" : "too-short";
}

std::string MakeMissionId(std::string_view game_id, std::string_view title) {
  std::string slug;
  bool dash = false;
  for (char ch : title) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      if (dash && !slug.empty()) slug += '-';
      slug += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      dash = false;
    } else {
      dash = true;
    }
  }
  return std::string(game_id) + "/" + slug;
}

Admission AdmitMission(std::string_view text, const AdmissionInput& input) {
  const int words = CountWords(text);
  if (words == 0) return Rejection{RejectionReason::kEmpty, 0};
  if (words < kMinWordCount) return Rejection{RejectionReason::kTooShort, words};
  MissionRecord m;
  m.mission_id = input.mission_id.empty()
                     ? MakeMissionId(input.game_id, input.title)
                     : input.mission_id;
  m.game_id = input.game_id;
  m.title = input.title;
  m.quest_type = input.quest_type;
  m.walkthrough_text = std::string(text);
  m.word_count = words;
  m.snapshot = input.snapshot;
  return m;
}

// --- snapshot store -----------------------------------------------------

SnapshotStore::SnapshotStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path SnapshotStore::PathFor(long long revision_id) const {
  return dir_ / (std::to_string(revision_id) + ".json");
}

bool SnapshotStore::Contains(long long revision_id) const {
  return std::filesystem::exists(PathFor(revision_id));
}

void SnapshotStore::Save(const FetchResult& result) const {
  const auto path = PathFor(result.snapshot.revision_id);
  if (std::filesystem::exists(path)) return;
  Json doc{{"snapshot", ToJson(result.snapshot)},
           {"final_slug", result.final_slug},
           {"redirect_chain", result.redirect_chain},
           {"raw_html", result.raw_html}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

FetchResult SnapshotStore::Load(long long revision_id) const {
  Json doc = ReadJsonFile(PathFor(revision_id));
  FetchResult r;
  const Json& s = doc.at("snapshot");
  r.snapshot.revision_id = s.at("revision_id").get<long long>();
  r.snapshot.snapshot_url = s.at("snapshot_url").get<std::string>();
  r.snapshot.retrieved_at = s.at("retrieved_at").get<std::string>();
  r.snapshot.license = s.at("license").get<std::string>();
  r.snapshot.html_sha256 = s.at("html_sha256").get<std::string>();
  r.final_slug = doc.value("final_slug", "");
  r.redirect_chain = doc.value("redirect_chain", std::vector<std::string>{});
  r.raw_html = doc.at("raw_html").get<std::string>();
  if (Sha256Hex(r.raw_html) != r.snapshot.html_sha256) {
    throw Error(ErrorKind::kMalformed,
                "snapshot " + std::to_string(revision_id) + ": digest mismatch");
  }
  return r;
}

}  // namespace maqv
