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

#include <gtest/gtest.h>

#include <algorithm>
#include <deque>
#include <filesystem>

#include "fixtures.h"
#include "maqv/clock.h"
#include "maqv/html.h"
#include "maqv/ingest.h"
#include "maqv/sha256.h"
#include "oracles.h"

namespace maqv {
namespace {

bool HasSlug(const std::vector<SlugCandidate>& list, const std::string& slug) {
  return std::any_of(list.begin(), list.end(),
                     [&](const SlugCandidate& c) { return c.slug == slug; });
}

TEST(SlugTest, ExactFormComesFirst) {
  auto list = GenerateSlugCandidates("A Night to Remember");
  ASSERT_FALSE(list.empty());
  EXPECT_EQ(list[0].slug, "A_Night_to_Remember");
  EXPECT_EQ(list[0].variant, SlugVariant::kExact);
}

TEST(SlugTest, QuestSuffixVariant) {
  auto list = GenerateSlugCandidates("The Heist");
  EXPECT_TRUE(HasSlug(list, "The_Heist_(Quest)"));
}

TEST(SlugTest, StopWordCasePermutations) {
  auto list = GenerateSlugCandidates("Gangs of Novigrad");
  EXPECT_TRUE(HasSlug(list, "Gangs_of_Novigrad"));
  EXPECT_TRUE(HasSlug(list, "Gangs_Of_Novigrad"));
}

TEST(SlugTest, NoDuplicatesAndCapped) {
  SlugOptions opts;
  opts.max_candidates = 5;
  auto list = GenerateSlugCandidates("The Lord of the Rings in the Hall of the King", opts);
  EXPECT_LE(list.size(), 5u);
  for (std::size_t i = 0; i < list.size(); ++i) {
    for (std::size_t j = i + 1; j < list.size(); ++j) EXPECT_NE(list[i].slug, list[j].slug);
  }
  EXPECT_EQ(GenerateSlugCandidates("The Heist"), GenerateSlugCandidates("The Heist"));
}

TEST(Sha256Test, MatchesKnownVectors) {
  EXPECT_EQ(Sha256Hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(oracle::Sha256("abc"), Sha256Hex("abc"));
}

TEST(Sha256Test, AgreesWithIndependentImplementation) {
  std::string data;
  for (int len = 0; len < 300; ++len) {
    EXPECT_EQ(Sha256Hex(data), oracle::Sha256(data)) << "length " << len;
    data.push_back(static_cast<char>((len * 37 + 11) & 0xFF));
  }
}

TEST(HtmlTest, WalkthroughBeatsDescription) {
  const char* html =
      "<div class=\"portable-infobox\">Quest giver: Preston</div>"
      "<p>Intro paragraph.</p>"
      "<h2><span class=\"mw-headline\">Description</span></h2><p>Short summary.</p>"
      "<h2><span class=\"mw-headline\">Walkthrough</span><span "
      "class=\"mw-editsection\">[edit]</span></h2>"
      "<p>Climb the tower.</p><p>Fight the raiders.</p>"
      "<h2>Notes</h2><p>Trivia.</p>";
  auto parsed = ParseWalkthrough(html);
  ASSERT_TRUE(parsed.has_value());
  EXPECT_EQ(parsed->source_section, "Walkthrough");
  EXPECT_EQ(parsed->text, "Climb the tower.\nFight the raiders.");
}

TEST(HtmlTest, InfoboxOnlyIsEmpty) {
  const char* html =
      "<aside class=\"portable-infobox\"><h2>Stats</h2><p>Level 5</p></aside>"
      "<table class=\"infobox\"><tr><td>Reward: 100 caps</td></tr></table>";
  EXPECT_FALSE(ParseWalkthrough(html).has_value());
}

TEST(HtmlTest, IntroFallback) {
  auto parsed = ParseWalkthrough("<p>Only an intro &amp; nothing else.</p><h2>Gallery</h2>");
  ASSERT_TRUE(parsed.has_value());
  EXPECT_EQ(parsed->source_section, "intro");
  EXPECT_EQ(parsed->text, "Only an intro & nothing else.");
}

TEST(HtmlTest, MalformedMarkupDoesNotThrow) {
  const char* inputs[] = {"", "<", "<p", "<div><p>unclosed", "</p></div>text",
                          "<script>alert(1)</script>", "<!-- open comment",
                          "<h2>Walkthrough</h2>"};
  for (const char* in : inputs) {
    EXPECT_NO_THROW(ParseWalkthrough(in)) << in;
  }
  EXPECT_FALSE(ParseWalkthrough("<script>var a = 1;</script>").has_value());
}

TEST(HtmlTest, EntityDecoding) {
  EXPECT_EQ(DecodeEntities("a &lt;b&gt; &#39;c&#x27; &quot;"), "a <b> 'c' \"");
}

// Scripted transport: pops one response per call and records call times.
class ScriptedTransport : public HttpTransport {
 public:
  ScriptedTransport(Clock& clock, std::deque<HttpResponse> script)
      : clock_(clock), script_(std::move(script)) {}

  HttpResponse Get(const std::string&, const std::multimap<std::string, std::string>& query,
                   double) override {
    times.push_back(clock_.Now());
    pages.push_back(query.find("page")->second);
    if (script_.empty()) return {500, "", ""};
    HttpResponse r = script_.front();
    script_.pop_front();
    return r;
  }

  std::vector<double> times;
  std::vector<std::string> pages;

 private:
  Clock& clock_;
  std::deque<HttpResponse> script_;
};

HttpResponse ParseOk(const std::string& title, const std::string& html, long long rev) {
  Json body = {{"parse", {{"title", title}, {"revid", rev}, {"text", html}}}};
  return {200, body.dump(), ""};
}

TEST(FetcherTest, DigestMatchesIndependentSha256) {
  ManualClock clock;
  const std::string html = "<p>Fixed page body for hashing.</p>";
  ScriptedTransport t(clock, {ParseOk("Mama Murphy", html, 123456)});
  WikiFetcher f("https://fallout.fandom.com/api.php", {}, t, clock);
  FetchOutcome out = f.FetchPage("Mama_Murphy");
  ASSERT_EQ(out.status, FetchStatus::kOk);
  EXPECT_EQ(out.result->snapshot.html_sha256, oracle::Sha256(html));
  EXPECT_EQ(out.result->snapshot.revision_id, 123456);
  EXPECT_EQ(out.result->snapshot.snapshot_url,
            "https://fallout.fandom.com/index.php?title=Mama_Murphy&oldid=123456");
  EXPECT_TRUE(IsIso8601Timestamp(out.result->snapshot.retrieved_at));
  EXPECT_EQ(out.result->snapshot.license, "CC BY-SA 3.0");
}

TEST(FetcherTest, FallsBackToSecondCandidate) {
  ManualClock clock;
  ScriptedTransport t(clock, {{404, "", ""}, ParseOk("The Heist (Quest)", "<p>x</p>", 7)});
  WikiFetcher f("https://w.fandom.com/api.php", {}, t, clock);
  auto candidates = GenerateSlugCandidates("The Heist");
  FetchOutcome out = f.FetchFirstAvailable(candidates);
  ASSERT_EQ(out.status, FetchStatus::kOk);
  EXPECT_EQ(out.result->final_slug, "The_Heist_(Quest)");
  EXPECT_EQ(t.pages[1], candidates[1].slug);
}

TEST(FetcherTest, MissingTitleErrorFallsThrough) {
  ManualClock clock;
  Json missing = {{"error", {{"code", "missingtitle"}}}};
  ScriptedTransport t(clock, {{200, missing.dump(), ""}, ParseOk("B", "<p>b</p>", 2)});
  WikiFetcher f("https://w.fandom.com/api.php", {}, t, clock);
  std::vector<SlugCandidate> c = {{"A", SlugVariant::kExact}, {"B", SlugVariant::kSuffix}};
  EXPECT_EQ(f.FetchFirstAvailable(c).status, FetchStatus::kOk);
}

TEST(FetcherTest, RetriesThenSucceeds) {
  ManualClock clock;
  ScriptedTransport t(clock, {{503, "", ""}, {0, "", "timeout"}, ParseOk("P", "<p>p</p>", 1)});
  WikiFetcher f("https://w.fandom.com/api.php", {}, t, clock);
  FetchOutcome out = f.FetchPage("P");
  ASSERT_EQ(out.status, FetchStatus::kOk);
  EXPECT_EQ(out.attempts, 3);
}

TEST(FetcherTest, GivesUpAfterMaxRetries) {
  ManualClock clock;
  ScriptedTransport t(clock, {});
  FetchPolicy policy;
  policy.max_retries = 5;
  WikiFetcher f("https://w.fandom.com/api.php", policy, t, clock);
  FetchOutcome out = f.FetchPage("P");
  EXPECT_EQ(out.status, FetchStatus::kFailed);
  EXPECT_EQ(out.attempts, 5);
  EXPECT_EQ(t.times.size(), 5u);
}

TEST(FetcherTest, RequestsAreSpacedByRateLimit) {
  ManualClock clock;
  ScriptedTransport t(clock, {{429, "", ""}, {429, "", ""}, ParseOk("P", "<p>p</p>", 1),
                              {404, "", ""}, ParseOk("Q", "<p>q</p>", 2)});
  WikiFetcher f("https://w.fandom.com/api.php", {}, t, clock);
  f.FetchPage("P");
  std::vector<SlugCandidate> c = {{"X", SlugVariant::kExact}, {"Q", SlugVariant::kSuffix}};
  f.FetchFirstAvailable(c);
  ASSERT_EQ(t.times.size(), 5u);
  for (std::size_t i = 1; i < t.times.size(); ++i) {
    EXPECT_GE(t.times[i] - t.times[i - 1], 5.0 - 1e-9);
  }
}

TEST(RateLimiterTest, FirstAcquireDoesNotWait) {
  ManualClock clock(100.0);
  RateLimiter limiter(clock, 5.0);
  limiter.Acquire();
  EXPECT_TRUE(clock.sleeps().empty());
  clock.Advance(2.0);
  limiter.Acquire();
  ASSERT_EQ(clock.sleeps().size(), 1u);
  EXPECT_NEAR(clock.sleeps()[0], 3.0, 1e-9);
}

TEST(SplitUrlTest, SplitsOrigin) {
  auto [origin, path] = SplitUrl("https://fallout.fandom.com:443/api.php");
  EXPECT_EQ(origin, "https://fallout.fandom.com:443");
  EXPECT_EQ(path, "/api.php");
}

TEST(AdmissionTest, ThirtyFiveWordsAdmitted) {
  AdmissionInput in{"", "fallout4", "Mama Murphy's Vision", QuestType::kMain, std::nullopt};
  Admission a = AdmitMission(testing::Words(35), in);
  ASSERT_TRUE(std::holds_alternative<MissionRecord>(a));
  const auto& m = std::get<MissionRecord>(a);
  EXPECT_EQ(m.word_count, 35);
  EXPECT_EQ(m.mission_id, "fallout4/mama-murphy-s-vision");
}

TEST(AdmissionTest, ThirtyFourWordsRejected) {
  Admission a = AdmitMission(testing::Words(34), {"m", "g", "t", QuestType::kSide, {}});
  ASSERT_TRUE(std::holds_alternative<Rejection>(a));
  EXPECT_EQ(std::get<Rejection>(a).reason, RejectionReason::kTooShort);
  EXPECT_EQ(std::get<Rejection>(a).word_count, 34);
}

TEST(AdmissionTest, EmptyTextRejected) {
  Admission a = AdmitMission("  \n ", {"m", "g", "t", QuestType::kSide, {}});
  ASSERT_TRUE(std::holds_alternative<Rejection>(a));
  EXPECT_EQ(std::get<Rejection>(a).reason, RejectionReason::kEmpty);
}

TEST(SnapshotStoreTest, WritesOnceAndReloads) {
  auto dir = std::filesystem::temp_directory_path() / "maqv_snapshot_store_test";
  std::filesystem::remove_all(dir);
  SnapshotStore store(dir);
  FetchResult r;
  r.raw_html = "<p>v1</p>";
  r.final_slug = "P";
  r.snapshot = {99, "https://w/index.php?title=P&oldid=99", "2025-05-01T12:00:00Z",
                "CC BY-SA 3.0", Sha256Hex(r.raw_html)};
  store.Save(r);
  ASSERT_TRUE(store.Contains(99));
  FetchResult changed = r;
  changed.raw_html = "<p>v2</p>";
  store.Save(changed);
  FetchResult back = store.Load(99);
  EXPECT_EQ(back.raw_html, "<p>v1</p>");
  EXPECT_EQ(back.snapshot, r.snapshot);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace maqv
