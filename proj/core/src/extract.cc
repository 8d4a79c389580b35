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

#include "maqv/extract.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>

#include <httplib.h>

#include "maqv/error.h"
#include "maqv/text.h"

namespace maqv {

std::string PythonJsonDumps(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += '"';
    for (unsigned char ch : items[i]) {
      switch (ch) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        case '\b': out += "\\b"; break;
        case '\f': out += "\\f"; break;
        default:
          if (ch < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
            out += buf;
          } else {
            out += static_cast<char>(ch);
          }
      }
    }
    out += '"';
  }
  out += "]";
  return out;
}

namespace {

constexpr std::string_view kSystemMessage =
    "You are an expert game analyst who converts free-form mission "
    "descriptions into ordered lists of predefined game actions. "
    "Your task is to break down mission walkthroughs into elementary "
    "action steps and map each step to exactly one predefined action.";

constexpr std::string_view kInstructions =
    "Instruction:\n"
    "1. Read the mission description.\n"
    "2. Break it into elementary action steps.\n"
    "3. Map each step to exactly one predefined action.\n"
    "4. Ignore narrative or non-action details.\n"
    "5. Output ONLY the ordered list of action names as a JSON array.\n\n";

constexpr std::string_view kDescriptionMarker = "Mission description:\n\"";
constexpr std::string_view kRepairMarker = "\n\nNote: ";

}  // namespace

PromptBundle BuildPrompt(const ActionLibrary& library,
                         std::string_view walkthrough_text) {
  if (Trim(walkthrough_text).empty()) {
    throw Error(ErrorKind::kPrecondition, "build_prompt: empty mission text");
  }
  if (library.size() == 0) {
    throw Error(ErrorKind::kPrecondition, "build_prompt: empty library");
  }
  PromptBundle bundle;
  bundle.system_message = std::string(kSystemMessage);
  bundle.user_message = "Predefined actions (choose only from this list):\n";
  bundle.user_message += PythonJsonDumps(library.ActionNames());
  bundle.user_message += "\n\n";
  bundle.user_message += kInstructions;
  bundle.user_message += kDescriptionMarker;
  bundle.user_message += walkthrough_text;
  bundle.user_message += "\"";
  return bundle;
}

void BackendConfig::Validate() const {
  if (temperature < 0) {
    throw Error(ErrorKind::kPrecondition, "temperature must be >= 0");
  }
  if (!(top_p > 0 && top_p <= 1)) {
    throw Error(ErrorKind::kPrecondition, "top_p must be in (0, 1]");
  }
  if (max_retries < 1) {
    throw Error(ErrorKind::kPrecondition, "max_retries must be >= 1");
  }
  if (rate_limit_seconds < 0 || timeout_seconds <= 0) {
    throw Error(ErrorKind::kPrecondition, "invalid rate limit or timeout");
  }
}

std::string_view FailureReasonName(FailureReason r) {
  switch (r) {
    case FailureReason::kNone: return "";
    case FailureReason::kMalformedJson: return "malformed-json";
    case FailureReason::kNonStringElement: return "non-string-element";
    case FailureReason::kUnknownAction: return "unknown-action";
    case FailureReason::kBackendError: return "backend-error";
  }
  return "";
}

// --- stub backend -------------------------------------------------------

namespace {

struct CategoryLexicon {
  Category category;
  std::vector<std::string_view> words;
};

const std::vector<CategoryLexicon>& Lexicon() {
  static const std::vector<CategoryLexicon> kLexicon = {
      {Category::kTraversal,
       {"travel", "swing", "drive", "ride", "walk", "run", "sprint", "climb",
        "head", "fly", "swim", "sail", "journey"}},
      {Category::kCombat,
       {"fight", "combat", "attack", "kill", "defeat", "battle", "slay"}},
      {Category::kStealth, {"sneak", "stealth", "hide", "crouch", "infiltrate"}},
      {Category::kPuzzleInvestigation,
       {"investigate", "inspect", "examine", "solve", "puzzle", "clue",
        "search", "track"}},
      {Category::kSocialInteraction,
       {"talk", "speak", "ask", "convince", "persuade", "dialogue", "negotiate",
        "meet"}},
      {Category::kEnvironmentalInteraction,
       {"open", "loot", "collect", "gather", "activate", "destroy", "build"}},
      {Category::kSpecialAbility, {"ability", "power", "cast", "magic"}},
      {Category::kGadgetDeployment, {"gadget", "deploy", "drone", "trap"}},
      {Category::kRangedInteraction,
       {"shoot", "snipe", "throw", "bow", "arrow"}},
  };
  return kLexicon;
}

constexpr std::array<std::string_view, 12> kNameStopWords = {
    "with", "from", "into", "onto", "over", "the", "and",
    "for",  "your", "their", "through", "under"};

std::vector<std::string> WordTokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool KeywordMatches(const std::string& token, std::string_view keyword) {
  if (token == keyword) return true;
  // Inflected forms ("swinging", "fights") for keywords long enough to be
  // unambiguous prefixes.
  return keyword.size() >= 4 && token.size() > keyword.size() &&
         token.compare(0, keyword.size(), keyword) == 0;
}

std::string_view MissionTextFromPrompt(std::string_view user) {
  std::size_t start = user.rfind(kDescriptionMarker);
  if (start == std::string_view::npos) return user;
  std::string_view rest = user.substr(start + kDescriptionMarker.size());
  std::size_t repair = rest.find(std::string("\"") + std::string(kRepairMarker));
  if (repair != std::string_view::npos) return rest.substr(0, repair);
  if (!rest.empty() && rest.back() == '"') rest.remove_suffix(1);
  return rest;
}

}  // namespace

std::string StubComplete(std::string_view text, const ActionLibrary& library) {
  // Name keywords in library order; first owner wins.
  std::vector<std::pair<std::string, const ActionDef*>> name_keywords;
  for (const ActionDef& a : library.actions()) {
    for (std::string& w : WordTokens(a.name)) {
      if (w.size() < 4) continue;
      if (std::find(kNameStopWords.begin(), kNameStopWords.end(), w) !=
          kNameStopWords.end()) {
        continue;
      }
      bool taken = std::any_of(name_keywords.begin(), name_keywords.end(),
                               [&](const auto& kw) { return kw.first == w; });
      if (!taken) name_keywords.emplace_back(std::move(w), &a);
    }
  }
  auto first_of_category = [&](Category c) -> const ActionDef* {
    for (const ActionDef& a : library.actions()) {
      if (a.category == c) return &a;
    }
    return nullptr;
  };

  std::vector<std::string> steps;
  const std::vector<std::string> tokens = WordTokens(text);
  std::size_t last_match_token = static_cast<std::size_t>(-2);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const ActionDef* hit = nullptr;
    for (const auto& [kw, action] : name_keywords) {
      if (KeywordMatches(tokens[i], kw)) {
        hit = action;
        break;
      }
    }
    if (!hit) {
      for (const CategoryLexicon& entry : Lexicon()) {
        bool matched = std::any_of(
            entry.words.begin(), entry.words.end(),
            [&](std::string_view w) { return KeywordMatches(tokens[i], w); });
        if (matched) {
          hit = first_of_category(entry.category);
          if (hit) break;
        }
      }
    }
    if (!hit) continue;
    // Adjacent words naming the same action ("web swing") count once.
    if (!steps.empty() && steps.back() == hit->name && last_match_token + 1 == i) {
      last_match_token = i;
      continue;
    }
    steps.push_back(hit->name);
    last_match_token = i;
  }
  return Json(steps).dump();
}

std::string StubBackend::Complete(const CompletionRequest& request) {
  return StubComplete(MissionTextFromPrompt(request.user), library_);
}

// --- chat backend -------------------------------------------------------

namespace {

class ChatBackend final : public CompletionBackend {
 public:
  explicit ChatBackend(ChatBackendOptions options) : options_(std::move(options)) {}

  std::string name() const override { return "chat"; }

  std::string Complete(const CompletionRequest& request) override {
    Json body{{"model", request.model_id},
              {"messages",
               Json::array({Json{{"role", "system"}, {"content", request.system}},
                            Json{{"role", "user"}, {"content", request.user}}})},
              {"temperature", request.temperature},
              {"top_p", request.top_p}};
    httplib::Client client(options_.base_url);
    const auto secs = static_cast<time_t>(request.timeout_seconds);
    client.set_connection_timeout(secs, 0);
    client.set_read_timeout(secs, 0);
    client.set_write_timeout(secs, 0);
    httplib::Headers headers;
    if (!options_.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + options_.api_key);
    }
    auto res = client.Post(options_.path, headers, body.dump(), "application/json");
    if (!res) throw BackendError("transport: " + httplib::to_string(res.error()));
    if (res->status != 200) {
      throw BackendError("HTTP " + std::to_string(res->status));
    }
    Json doc = Json::parse(res->body, nullptr, false);
    if (doc.is_discarded()) throw BackendError("unparseable provider response");
    try {
      return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const Json::exception& e) {
      throw BackendError(std::string("unexpected provider response: ") + e.what());
    }
  }

 private:
  ChatBackendOptions options_;
};

}  // namespace

std::unique_ptr<CompletionBackend> MakeChatBackend(ChatBackendOptions options) {
  return std::make_unique<ChatBackend>(std::move(options));
}

// --- validation and retry -----------------------------------------------

std::string StripCodeFence(std::string_view response) {
  std::string_view s = Trim(response);
  if (s.substr(0, 3) == "```") {
    std::size_t newline = s.find('\n');
    s = newline == std::string_view::npos ? std::string_view() : s.substr(newline + 1);
    s = Trim(s);
    if (s.size() >= 3 && s.substr(s.size() - 3) == "```") {
      s.remove_suffix(3);
    }
  }
  return std::string(Trim(s));
}

ResponseCheck CheckResponse(std::string_view response,
                            const ActionLibrary& library) {
  ResponseCheck check;
  Json doc = Json::parse(StripCodeFence(response), nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) {
    check.reason = FailureReason::kMalformedJson;
    return check;
  }
  for (const Json& item : doc) {
    if (!item.is_string()) {
      check.reason = FailureReason::kNonStringElement;
      check.sequence.steps.clear();
      return check;
    }
    check.sequence.steps.push_back(item.get<std::string>());
  }
  for (const std::string& step : check.sequence.steps) {
    if (!library.Contains(step) &&
        std::find(check.unknown.begin(), check.unknown.end(), step) ==
            check.unknown.end()) {
      check.unknown.push_back(step);
    }
  }
  if (!check.unknown.empty()) {
    check.reason = FailureReason::kUnknownAction;
    check.sequence.steps.clear();
  }
  return check;
}

std::string RepairNote(const std::vector<std::string>& unknown) {
  return std::string(kRepairMarker) +
         "your previous answer used actions that are not in the predefined "
         "list: " +
         PythonJsonDumps(unknown) +
         ". Use only names from the predefined list, spelled exactly.";
}

ExtractionOutcome ExtractSequence(const MissionRecord& mission,
                                  const ActionLibrary& library,
                                  CompletionBackend& backend,
                                  const BackendConfig& config, Clock& clock,
                                  const AttemptSink& sink) {
  config.Validate();
  const PromptBundle prompt = BuildPrompt(library, mission.walkthrough_text);
  CompletionRequest request;
  request.model_id = config.model_id;
  request.system = prompt.system_message;
  request.temperature = config.temperature;
  request.top_p = config.top_p;
  request.timeout_seconds = config.timeout_seconds;

  ExtractionOutcome outcome;
  std::optional<std::vector<std::string>> repair_for;
  auto log = [&](int attempt, bool ok, FailureReason reason) {
    if (sink) {
      sink({mission.mission_id, attempt, ok ? "ok" : "failed",
            std::string(FailureReasonName(reason))});
    }
  };

  for (int attempt = 1; attempt <= config.max_retries; ++attempt) {
    if (attempt > 1) clock.SleepFor(Clock::Duration(config.rate_limit_seconds));
    outcome.attempts = attempt;
    request.user = prompt.user_message;
    if (repair_for) request.user += RepairNote(*repair_for);

    std::string response;
    try {
      response = backend.Complete(request);
    } catch (const BackendError& e) {
      outcome.failure_reason = FailureReason::kBackendError;
      outcome.detail = e.what();
      log(attempt, false, outcome.failure_reason);
      continue;
    }
    ResponseCheck check = CheckResponse(response, library);
    if (check.reason == FailureReason::kNone) {
      outcome.status = ExtractionStatus::kOk;
      outcome.sequence = std::move(check.sequence);
      outcome.failure_reason = FailureReason::kNone;
      outcome.detail.clear();
      log(attempt, true, FailureReason::kNone);
      return outcome;
    }
    outcome.failure_reason = check.reason;
    outcome.detail = check.reason == FailureReason::kUnknownAction
                         ? "unknown actions: " + PythonJsonDumps(check.unknown)
                         : std::string(FailureReasonName(check.reason));
    log(attempt, false, check.reason);
    if (check.reason == FailureReason::kUnknownAction) {
      if (repair_for) break;  // repair already spent
      repair_for = std::move(check.unknown);
    }
  }
  outcome.status = ExtractionStatus::kFailed;
  outcome.sequence.steps.clear();
  return outcome;
}

}  // namespace maqv
