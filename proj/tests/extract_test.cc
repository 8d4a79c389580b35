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

#include <deque>

#include "fixtures.h"
#include "maqv/clock.h"
#include "maqv/error.h"
#include "maqv/extract.h"
#include "maqv/rng.h"

namespace maqv {
namespace {

ActionLibrary FalloutLibrary() { return LoadLibrary(testing::ReadFixture("corpus/fallout4.json")); }

MissionRecord Mission(const std::string& text) {
  MissionRecord m;
  m.mission_id = "fallout4/test";
  m.game_id = "fallout4";
  m.walkthrough_text = text;
  m.word_count = 40;
  return m;
}

class ScriptedBackend : public CompletionBackend {
 public:
  ScriptedBackend(Clock& clock, std::deque<std::string> script)
      : clock_(clock), script_(std::move(script)) {}
  std::string name() const override { return "scripted"; }
  std::string Complete(const CompletionRequest& request) override {
    times.push_back(clock_.Now());
    requests.push_back(request);
    if (script_.empty()) return "[\"Teleport\"]";
    std::string r = script_.front();
    script_.pop_front();
    if (r == "!throw") throw BackendError("HTTP 503");
    return r;
  }

  std::vector<double> times;
  std::vector<CompletionRequest> requests;

 private:
  Clock& clock_;
  std::deque<std::string> script_;
};

TEST(PromptTest, GoldenMamaMurphyPrompt) {
  Json golden = testing::ReadFixture("prompts/fallout4_mama_murphy.json");
  PromptBundle p = BuildPrompt(FalloutLibrary(), golden["mission_description"].get<std::string>());
  EXPECT_EQ(p.system_message, golden["system"].get<std::string>());
  EXPECT_EQ(p.user_message, golden["user"].get<std::string>());
}

TEST(PromptTest, EmptyTextIsPreconditionError) {
  try {
    BuildPrompt(FalloutLibrary(), "");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPrecondition);
  }
}

TEST(PromptTest, SingleActionLibraryEmbedsOneElementArray) {
  ActionLibrary lib("g", {{"Jump", Category::kTraversal, {}, ""}});
  PromptBundle p = BuildPrompt(lib, "Jump over it.");
  EXPECT_NE(p.user_message.find("[\"Jump\"]"), std::string::npos);
}

TEST(PromptTest, PythonDumpsEscaping) {
  EXPECT_EQ(PythonJsonDumps({}), "[]");
  EXPECT_EQ(PythonJsonDumps({"a", "b"}), "[\"a\", \"b\"]");
  EXPECT_EQ(PythonJsonDumps({"q\"\\\n"}), "[\"q\\\"\\\\\\n\"]");
  EXPECT_EQ(PythonJsonDumps({"caf\xc3\xa9"}), "[\"caf\xc3\xa9\"]");
  EXPECT_EQ(PythonJsonDumps({std::string(1, '\x01')}), "[\"\\u0001\"]");
}

TEST(BackendConfigTest, Validation) {
  BackendConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.temperature = -0.1;
  EXPECT_THROW(c.Validate(), Error);
  c = {};
  c.top_p = 0;
  EXPECT_THROW(c.Validate(), Error);
  c = {};
  c.max_retries = 0;
  EXPECT_THROW(c.Validate(), Error);
}

TEST(ExtractTest, ValidArrayIsOk) {
  ManualClock clock;
  ScriptedBackend b(clock, {"[\"Dialogue Choice\",\"Pip-Boy Fast-Travel\"]"});
  ActionLibrary lib = FalloutLibrary();
  auto out = ExtractSequence(Mission("text"), lib, b, {}, clock);
  ASSERT_EQ(out.status, ExtractionStatus::kOk);
  EXPECT_EQ(out.sequence.steps,
            (std::vector<std::string>{"Dialogue Choice", "Pip-Boy Fast-Travel"}));
  EXPECT_EQ(out.attempts, 1);
  EXPECT_TRUE(clock.sleeps().empty());
}

TEST(ExtractTest, ObjectThenArrayTakesTwoAttempts) {
  ManualClock clock;
  ScriptedBackend b(clock, {"{\"a\":1}", "[\"Melee Bash\"]"});
  ActionLibrary lib = FalloutLibrary();
  auto out = ExtractSequence(Mission("text"), lib, b, {}, clock);
  ASSERT_EQ(out.status, ExtractionStatus::kOk);
  EXPECT_EQ(out.attempts, 2);
  ASSERT_EQ(clock.sleeps().size(), 1u);
  EXPECT_DOUBLE_EQ(clock.sleeps()[0], 5.0);
}

TEST(ExtractTest, UnknownActionFailsAfterOneRepair) {
  ManualClock clock;
  ScriptedBackend b(clock, {});
  ActionLibrary lib = FalloutLibrary();
  std::vector<AttemptRecord> log;
  auto out = ExtractSequence(Mission("text"), lib, b, {}, clock,
                             [&](const AttemptRecord& r) { log.push_back(r); });
  EXPECT_EQ(out.status, ExtractionStatus::kFailed);
  EXPECT_EQ(out.failure_reason, FailureReason::kUnknownAction);
  EXPECT_EQ(out.attempts, 2);
  ASSERT_EQ(b.requests.size(), 2u);
  EXPECT_EQ(b.requests[0].user.find("Note: "), std::string::npos);
  EXPECT_NE(b.requests[1].user.find("Teleport"), std::string::npos);
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[1].reason, "unknown-action");
  EXPECT_TRUE(out.sequence.empty());
}

TEST(ExtractTest, RepairCanSucceed) {
  ManualClock clock;
  ScriptedBackend b(clock, {"[\"Teleport\"]", "[\"Sneak Crouch\"]"});
  ActionLibrary lib = FalloutLibrary();
  auto out = ExtractSequence(Mission("text"), lib, b, {}, clock);
  EXPECT_EQ(out.status, ExtractionStatus::kOk);
  EXPECT_EQ(out.attempts, 2);
}

TEST(ExtractTest, RetryBudgetAndSpacing) {
  ManualClock clock;
  ScriptedBackend b(clock, {"!throw", "not json", "[1,2]", "!throw", "```\n{}\n```",
                            "[\"Melee Bash\"]"});
  ActionLibrary lib = FalloutLibrary();
  BackendConfig cfg;
  auto out = ExtractSequence(Mission("text"), lib, b, cfg, clock);
  EXPECT_EQ(out.status, ExtractionStatus::kFailed);
  EXPECT_EQ(out.attempts, 5);
  EXPECT_EQ(b.times.size(), 5u);
  for (std::size_t i = 1; i < b.times.size(); ++i) {
    EXPECT_GE(b.times[i] - b.times[i - 1], 5.0);
  }
  EXPECT_EQ(out.failure_reason, FailureReason::kMalformedJson);
}

TEST(ExtractTest, SamplingParametersReachBackend) {
  ManualClock clock;
  ScriptedBackend b(clock, {"[]"});
  ActionLibrary lib = FalloutLibrary();
  ExtractSequence(Mission("text"), lib, b, {}, clock);
  ASSERT_EQ(b.requests.size(), 1u);
  EXPECT_EQ(b.requests[0].model_id, "gpt-4.1-2025-04-14");
  EXPECT_EQ(b.requests[0].temperature, 0.0);
  EXPECT_EQ(b.requests[0].top_p, 1.0);
}

TEST(CheckResponseTest, Classification) {
  ActionLibrary lib = FalloutLibrary();
  EXPECT_EQ(CheckResponse("[\"Melee Bash\"]", lib).reason, FailureReason::kNone);
  EXPECT_EQ(CheckResponse("```json\n[\"Melee Bash\"]\n```", lib).reason, FailureReason::kNone);
  EXPECT_EQ(CheckResponse("[]", lib).reason, FailureReason::kNone);
  EXPECT_EQ(CheckResponse("{\"a\":1}", lib).reason, FailureReason::kMalformedJson);
  EXPECT_EQ(CheckResponse("", lib).reason, FailureReason::kMalformedJson);
  EXPECT_EQ(CheckResponse("[\"Melee Bash\", 3]", lib).reason, FailureReason::kNonStringElement);
  ResponseCheck unknown = CheckResponse("[\"Melee Bash\", \"Teleport\"]", lib);
  EXPECT_EQ(unknown.reason, FailureReason::kUnknownAction);
  EXPECT_EQ(unknown.unknown, std::vector<std::string>{"Teleport"});
}

TEST(CheckResponseTest, FuzzedResponsesNeverEscapeTheLibrary) {
  ActionLibrary lib = FalloutLibrary();
  const std::vector<std::string> pieces = {
      "[", "]", "\"", ",", "{", "}", "Melee Bash", "Teleport", "1", "null",
      "```", "json", "\n", " ", "\"Sneak Crouch\"", "\\", "\xff"};
  Rng rng(7);
  for (int trial = 0; trial < 3000; ++trial) {
    std::string s;
    int n = static_cast<int>(rng.Below(12));
    for (int i = 0; i < n; ++i) s += pieces[rng.Below(pieces.size())];
    ResponseCheck c;
    ASSERT_NO_THROW(c = CheckResponse(s, lib)) << s;
    if (c.reason == FailureReason::kNone) {
      for (const auto& step : c.sequence.steps) EXPECT_TRUE(lib.Contains(step)) << s;
    }
  }
}

TEST(StubBackendTest, KeywordOrder) {
  ActionLibrary lib("spiderman2", {{"Web-Swing Traversal", Category::kTraversal, {}, ""},
                                   {"Melee Combo", Category::kCombat, {}, ""}});
  EXPECT_EQ(Json::parse(StubComplete("swing across town then fight", lib)),
            Json({"Web-Swing Traversal", "Melee Combo"}));
}

TEST(StubBackendTest, NoMatchesGiveEmptyArray) {
  ActionLibrary lib("spiderman2", {{"Web-Swing Traversal", Category::kTraversal, {}, ""}});
  EXPECT_EQ(Json::parse(StubComplete("nothing relevant here", lib)), Json::array());
}

TEST(StubBackendTest, DeterministicThroughPrompt) {
  ManualClock clock;
  ActionLibrary lib = FalloutLibrary();
  StubBackend stub(lib);
  MissionRecord m = Mission("Talk to Mama Murphy, then sneak past the raiders and fight.");
  auto a = ExtractSequence(m, lib, stub, {}, clock);
  auto b = ExtractSequence(m, lib, stub, {}, clock);
  ASSERT_EQ(a.status, ExtractionStatus::kOk);
  EXPECT_FALSE(a.sequence.empty());
  EXPECT_EQ(a.sequence, b.sequence);
}

TEST(RateLimitedBackendTest, SharedLimiterSpacesCalls) {
  ManualClock clock;
  RateLimiter limiter(clock, 5.0);
  ScriptedBackend inner(clock, {"[]", "[]", "[]"});
  RateLimitedBackend b(inner, limiter);
  for (int i = 0; i < 3; ++i) b.Complete({});
  EXPECT_DOUBLE_EQ(inner.times[1] - inner.times[0], 5.0);
  EXPECT_DOUBLE_EQ(inner.times[2] - inner.times[1], 5.0);
}

}  // namespace
}  // namespace maqv
