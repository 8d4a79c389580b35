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

#include "maqv/corpus.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "maqv/error.h"
#include "maqv/sha256.h"
#include "maqv/text.h"

namespace maqv {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformed: return "malformed";
    case ErrorKind::kDuplicateName: return "duplicate-name";
    case ErrorKind::kOutOfRange: return "out-of-range";
    case ErrorKind::kUnknownCategory: return "unknown-category";
    case ErrorKind::kUnresolvedAction: return "unresolved-action";
    case ErrorKind::kUnknownGame: return "unknown-game";
    case ErrorKind::kTooShort: return "too-short";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kNotFound: return "not-found";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kNetwork: return "network";
  }
  return "unknown";
}

namespace {

constexpr std::array<std::string_view, kDimensionCount> kDimKeys = {
    "u", "c", "n", "e", "p", "a"};
constexpr std::array<std::string_view, kDimensionCount> kDimLabels = {
    "U", "C", "N", "E", "P", "A"};
constexpr std::array<std::string_view, kDimensionCount> kDimNames = {
    "Uniqueness", "Combat",          "Narrative",
    "Exploration", "Problem-Solving", "Emotion"};

constexpr std::array<std::string_view, kCategoryCount> kCategoryNames = {
    "Traversal",
    "Combat",
    "Stealth",
    "Puzzle & Investigation",
    "Social Interaction",
    "Environmental Interaction",
    "Special Ability",
    "Gadget Deployment",
    "Ranged Interaction"};

// Short forms from rating tables.
constexpr std::array<std::string_view, kCategoryCount> kCategoryShort = {
    "trav", "cbt", "stl", "pi", "soc", "env", "spa", "gdt", "rng"};

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorKind::kMalformed, what);
}

const Json& Field(const Json& obj, const char* key, const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end()) Malformed(ctx + ": missing field '" + key + "'");
  return *it;
}

std::string StringField(const Json& obj, const char* key,
                        const std::string& ctx) {
  const Json& v = Field(obj, key, ctx);
  if (!v.is_string()) Malformed(ctx + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::string OptionalString(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return {};
  return it->get<std::string>();
}

// Scores may be JSON numbers or decimal strings.
double ParseScore(const Json& v, const std::string& ctx) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc() && ptr == s.data() + s.size()) return out;
  }
  Malformed(ctx + ": score must be a decimal number");
}

}  // namespace

std::string_view DimensionKey(Dimension d) {
  return kDimKeys[static_cast<std::size_t>(d)];
}
std::string_view DimensionLabel(Dimension d) {
  return kDimLabels[static_cast<std::size_t>(d)];
}
std::string_view DimensionName(Dimension d) {
  return kDimNames[static_cast<std::size_t>(d)];
}

bool MaqvVector::InUnitRange() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) {
    return x >= -kScoreTolerance && x <= 1.0 + kScoreTolerance;
  });
}

double MaqvVector::Max() const {
  return *std::max_element(values_.begin(), values_.end());
}

std::string_view CategoryName(Category c) {
  return kCategoryNames[static_cast<std::size_t>(c)];
}

std::optional<Category> ParseCategory(std::string_view text) {
  const std::string lowered = ToLower(Trim(text));
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    if (lowered == ToLower(kCategoryNames[i]) || lowered == kCategoryShort[i]) {
      return kAllCategories[i];
    }
  }
  if (lowered == "s") return Category::kStealth;
  if (lowered == "puzzle and investigation") {
    return Category::kPuzzleInvestigation;
  }
  return std::nullopt;
}

std::string_view QuestTypeName(QuestType t) {
  switch (t) {
    case QuestType::kMain: return "Main";
    case QuestType::kSide: return "Side";
    case QuestType::kPoi: return "POI";
  }
  return "Main";
}

std::optional<QuestType> ParseQuestType(std::string_view text) {
  if (text == "Main") return QuestType::kMain;
  if (text == "Side") return QuestType::kSide;
  if (text == "POI") return QuestType::kPoi;
  return std::nullopt;
}

bool IsSha256Hex(std::string_view text) {
  return text.size() == 64 &&
         std::all_of(text.begin(), text.end(), [](char ch) {
           return (ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'f');
         });
}

bool IsIso8601Timestamp(std::string_view text) {
  static const std::regex kPattern(
      R"(\d{4}-\d{2}-\d{2}(T\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}:?\d{2})?)?)");
  return std::regex_match(text.begin(), text.end(), kPattern);
}

// --- ActionLibrary ------------------------------------------------------

ActionLibrary::ActionLibrary(std::string game_id, std::vector<ActionDef> actions)
    : game_id_(std::move(game_id)), actions_(std::move(actions)) {
  if (actions_.empty()) {
    throw Error(ErrorKind::kMalformed,
                "library '" + game_id_ + "' has no actions");
  }
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    const ActionDef& a = actions_[i];
    if (a.name.empty()) {
      throw Error(ErrorKind::kMalformed,
                  "library '" + game_id_ + "': empty action name");
    }
    if (!a.scores.InUnitRange()) {
      throw Error(ErrorKind::kOutOfRange,
                  "action '" + a.name + "': score outside [0,1]");
    }
    if (!index_.emplace(a.name, i).second) {
      throw Error(ErrorKind::kDuplicateName,
                  "library '" + game_id_ + "': duplicate action '" + a.name +
                      "'");
    }
  }
}

const ActionDef* ActionLibrary::Find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &actions_[it->second];
}

std::vector<std::string> ActionLibrary::ActionNames() const {
  std::vector<std::string> names;
  names.reserve(actions_.size());
  for (const ActionDef& a : actions_) names.push_back(a.name);
  return names;
}

// --- JSON conversion ----------------------------------------------------

Json ToJson(const MaqvVector& v) {
  Json j = Json::object();
  for (Dimension d : kAllDimensions) j[std::string(DimensionKey(d))] = v[d];
  return j;
}

MaqvVector MaqvFromJson(const Json& j) {
  if (!j.is_object()) Malformed("scores must be an object");
  MaqvVector v;
  for (Dimension d : kAllDimensions) {
    const std::string key(DimensionKey(d));
    v[d] = ParseScore(Field(j, key.c_str(), "scores"), "scores." + key);
  }
  return v;
}

Json ToJson(const ActionDef& action) {
  return Json{{"name", action.name},
              {"category", std::string(CategoryName(action.category))},
              {"scores", ToJson(action.scores)},
              {"description", action.description}};
}

Json ToJson(const SnapshotMeta& s) {
  return Json{{"revision_id", s.revision_id},
              {"snapshot_url", s.snapshot_url},
              {"retrieved_at", s.retrieved_at},
              {"license", s.license},
              {"html_sha256", s.html_sha256}};
}

Json ToJson(const MissionRecord& m) {
  Json j{{"mission_id", m.mission_id},
         {"title", m.title},
         {"quest_type", std::string(QuestTypeName(m.quest_type))},
         {"walkthrough_text", m.walkthrough_text},
         {"word_count", m.word_count}};
  if (!m.valid) j["valid"] = false;
  if (m.snapshot) j["snapshot"] = ToJson(*m.snapshot);
  if (m.sequence) j["sequence"] = m.sequence->steps;
  return j;
}

Json ToJson(const GameData& g) {
  Json actions = Json::array();
  for (const ActionDef& a : g.library.actions()) actions.push_back(ToJson(a));
  Json missions = Json::array();
  for (const MissionRecord& m : g.missions) missions.push_back(ToJson(m));
  return Json{{"game_id", g.game_id},
              {"title", g.title},
              {"actions", std::move(actions)},
              {"missions", std::move(missions)}};
}

Json ToJson(const Corpus& corpus) {
  Json out = Json::array();
  for (const GameData& g : corpus.games()) out.push_back(ToJson(g));
  return out;
}

// --- loading ------------------------------------------------------------

ActionLibrary LoadLibrary(const Json& doc) {
  if (!doc.is_object()) Malformed("game document must be an object");
  const std::string game_id = StringField(doc, "game_id", "game");
  const Json& actions = Field(doc, "actions", "game '" + game_id + "'");
  if (!actions.is_array()) Malformed("'actions' must be an array");
  std::vector<ActionDef> defs;
  defs.reserve(actions.size());
  for (const Json& a : actions) {
    if (!a.is_object()) Malformed("action entries must be objects");
    ActionDef def;
    def.name = StringField(a, "name", "action");
    const std::string ctx = "action '" + def.name + "'";
    const std::string category = StringField(a, "category", ctx);
    auto parsed = ParseCategory(category);
    if (!parsed) {
      throw Error(ErrorKind::kUnknownCategory,
                  ctx + ": unknown category '" + category + "'");
    }
    def.category = *parsed;
    def.scores = MaqvFromJson(Field(a, "scores", ctx));
    def.description = OptionalString(a, "description");
    defs.push_back(std::move(def));
  }
  return ActionLibrary(game_id, std::move(defs));
}

ActionLibrary LoadLibrary(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    Malformed(std::string("library: ") + e.what());
  }
  return LoadLibrary(doc);
}

void ResolveSequence(const ActionSequence& sequence,
                     const ActionLibrary& library, std::string_view context) {
  for (const std::string& step : sequence.steps) {
    if (!library.Contains(step)) {
      throw Error(ErrorKind::kUnresolvedAction,
                  std::string(context) + ": action '" + step +
                      "' is not in the library of '" + library.game_id() +
                      "'");
    }
  }
}

namespace {

SnapshotMeta LoadSnapshot(const Json& j, const std::string& ctx) {
  if (!j.is_object()) Malformed(ctx + ": snapshot must be an object");
  SnapshotMeta s;
  const Json& rev = Field(j, "revision_id", ctx);
  if (!rev.is_number_integer()) Malformed(ctx + ": revision_id must be an integer");
  s.revision_id = rev.get<long long>();
  s.snapshot_url = StringField(j, "snapshot_url", ctx);
  s.retrieved_at = StringField(j, "retrieved_at", ctx);
  s.license = StringField(j, "license", ctx);
  s.html_sha256 = StringField(j, "html_sha256", ctx);
  if (!IsSha256Hex(s.html_sha256)) {
    Malformed(ctx + ": html_sha256 must be 64 lowercase hex characters");
  }
  if (!IsIso8601Timestamp(s.retrieved_at)) {
    Malformed(ctx + ": retrieved_at is not ISO-8601");
  }
  return s;
}

MissionRecord LoadMission(const Json& j, const ActionLibrary& library) {
  if (!j.is_object()) Malformed("mission entries must be objects");
  MissionRecord m;
  m.game_id = library.game_id();
  m.mission_id = StringField(j, "mission_id", "mission");
  const std::string ctx = "mission '" + m.mission_id + "'";
  m.title = OptionalString(j, "title");
  const std::string type = StringField(j, "quest_type", ctx);
  auto parsed = ParseQuestType(type);
  if (!parsed) Malformed(ctx + ": quest_type must be Main, Side or POI");
  m.quest_type = *parsed;
  m.walkthrough_text = OptionalString(j, "walkthrough_text");
  if (auto it = j.find("word_count"); it != j.end()) {
    if (!it->is_number_integer()) Malformed(ctx + ": word_count must be an integer");
    m.word_count = it->get<int>();
  } else {
    m.word_count = CountWords(m.walkthrough_text);
  }
  if (auto it = j.find("valid"); it != j.end()) {
    if (!it->is_boolean()) Malformed(ctx + ": valid must be a boolean");
    m.valid = it->get<bool>();
  }
  if (m.valid && m.word_count < kMinWordCount) {
    throw Error(ErrorKind::kTooShort,
                ctx + ": word_count " + std::to_string(m.word_count) +
                    " below " + std::to_string(kMinWordCount));
  }
  if (auto it = j.find("snapshot"); it != j.end() && !it->is_null()) {
    m.snapshot = LoadSnapshot(*it, ctx);
  }
  if (auto it = j.find("sequence"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) Malformed(ctx + ": sequence must be an array");
    ActionSequence seq;
    for (const Json& step : *it) {
      if (!step.is_string()) Malformed(ctx + ": sequence steps must be strings");
      seq.steps.push_back(step.get<std::string>());
    }
    ResolveSequence(seq, library, ctx);
    m.sequence = std::move(seq);
  }
  return m;
}

std::vector<const Json*> GameDocuments(const Json& docs) {
  std::vector<const Json*> out;
  if (docs.is_array()) {
    for (const Json& d : docs) out.push_back(&d);
  } else if (docs.is_object()) {
    if (!docs.empty()) out.push_back(&docs);
  } else if (!docs.is_null()) {
    Malformed("corpus document must be an object or an array");
  }
  return out;
}

}  // namespace

Corpus LoadCorpus(const Json& docs, std::span<const ActionLibrary> libraries) {
  std::vector<GameData> games;
  for (const Json* doc : GameDocuments(docs)) {
    if (!doc->is_object()) Malformed("game document must be an object");
    GameData game;
    game.game_id = StringField(*doc, "game_id", "game");
    auto lib = std::find_if(libraries.begin(), libraries.end(),
                            [&](const ActionLibrary& l) {
                              return l.game_id() == game.game_id;
                            });
    if (lib == libraries.end()) {
      throw Error(ErrorKind::kUnknownGame,
                  "no action library for game '" + game.game_id + "'");
    }
    game.library = *lib;
    game.title = OptionalString(*doc, "title");
    if (auto it = doc->find("missions"); it != doc->end()) {
      if (!it->is_array()) Malformed("'missions' must be an array");
      for (const Json& m : *it) {
        game.missions.push_back(LoadMission(m, game.library));
      }
    }
    games.push_back(std::move(game));
  }
  return Corpus(std::move(games));
}

Corpus LoadCorpus(const Json& docs) {
  std::vector<ActionLibrary> libraries;
  for (const Json* doc : GameDocuments(docs)) {
    libraries.push_back(LoadLibrary(*doc));
  }
  return LoadCorpus(docs, libraries);
}

Json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    Malformed(path.string() + ": " + e.what());
  }
}

Corpus LoadCorpusFromPaths(std::span<const std::filesystem::path> paths) {
  Json docs = Json::array();
  auto append = [&](const std::filesystem::path& file) {
    Json doc = ReadJsonFile(file);
    if (doc.is_array()) {
      for (Json& d : doc) docs.push_back(std::move(d));
    } else if (!doc.empty()) {
      docs.push_back(std::move(doc));
    }
  };
  for (const auto& path : paths) {
    if (std::filesystem::is_directory(path)) {
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
          files.push_back(entry.path());
        }
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) append(f);
    } else {
      append(path);
    }
  }
  return LoadCorpus(docs);
}

// --- Corpus -------------------------------------------------------------

Corpus::Corpus(std::vector<GameData> games) : games_(std::move(games)) {
  std::set<std::string> game_ids;
  std::set<std::string> mission_ids;
  for (const GameData& g : games_) {
    if (!game_ids.insert(g.game_id).second) {
      throw Error(ErrorKind::kDuplicateName, "duplicate game '" + g.game_id + "'");
    }
    for (const MissionRecord& m : g.missions) {
      if (!mission_ids.insert(m.mission_id).second) {
        throw Error(ErrorKind::kDuplicateName,
                    "duplicate mission id '" + m.mission_id + "'");
      }
    }
  }
  digest_ = Sha256Hex(ToJson(*this).dump());
}

const GameData* Corpus::FindGame(std::string_view game_id) const {
  for (const GameData& g : games_) {
    if (g.game_id == game_id) return &g;
  }
  return nullptr;
}

const MissionRecord* Corpus::FindMission(std::string_view mission_id) const {
  for (const GameData& g : games_) {
    for (const MissionRecord& m : g.missions) {
      if (m.mission_id == mission_id) return &m;
    }
  }
  return nullptr;
}

const ActionLibrary* Corpus::LibraryFor(std::string_view game_id) const {
  const GameData* g = FindGame(game_id);
  return g ? &g->library : nullptr;
}

std::map<QuestType, int> Corpus::CountsByType() const {
  std::map<QuestType, int> counts;
  for (QuestType t : kAllQuestTypes) counts[t] = 0;
  for (const GameData& g : games_) {
    for (const MissionRecord& m : g.missions) {
      if (m.valid) ++counts[m.quest_type];
    }
  }
  return counts;
}

int Corpus::ValidMissionCount() const {
  int total = 0;
  for (const auto& [type, n] : CountsByType()) total += n;
  return total;
}

Corpus Corpus::Subset(std::span<const std::string> game_ids) const {
  std::vector<GameData> games;
  for (const std::string& id : game_ids) {
    const GameData* g = FindGame(id);
    if (!g) throw Error(ErrorKind::kUnknownGame, "unknown game '" + id + "'");
    games.push_back(*g);
  }
  return Corpus(std::move(games));
}

CorpusStats ComputeCorpusStats(const Corpus& corpus) {
  CorpusStats stats;
  std::map<QuestType, long long> steps_by_type;
  long long total_steps = 0;
  for (const GameData& g : corpus.games()) {
    for (const MissionRecord& m : g.missions) {
      if (!m.extracted()) continue;
      const auto n = static_cast<long long>(m.sequence->size());
      steps_by_type[m.quest_type] += n;
      ++stats.count_by_type[m.quest_type];
      total_steps += n;
      ++stats.extracted_missions;
    }
  }
  if (stats.extracted_missions > 0) {
    stats.overall_mean =
        static_cast<double>(total_steps) / stats.extracted_missions;
  }
  for (const auto& [type, count] : stats.count_by_type) {
    stats.mean_by_type[type] =
        static_cast<double>(steps_by_type[type]) / count;
  }
  return stats;
}

Json ExportAnnotations(const Corpus& corpus) {
  Json games = Json::array();
  for (const GameData& g : corpus.games()) {
    Json missions = Json::array();
    for (const MissionRecord& m : g.missions) {
      if (!m.extracted()) continue;
      MaqvVector mean;
      for (const std::string& step : m.sequence->steps) {
        const MaqvVector& s = g.library.Find(step)->scores;
        for (std::size_t d = 0; d < kDimensionCount; ++d) mean[d] += s[d];
      }
      for (std::size_t d = 0; d < kDimensionCount; ++d) {
        mean[d] /= static_cast<double>(m.sequence->size());
      }
      Json entry{{"mission_id", m.mission_id},
                 {"title", m.title},
                 {"quest_type", std::string(QuestTypeName(m.quest_type))},
                 {"sequence", m.sequence->steps},
                 {"maqv_mean", ToJson(mean)}};
      if (m.snapshot) {
        entry["attribution_url"] = m.snapshot->snapshot_url;
        entry["revision_id"] = m.snapshot->revision_id;
        entry["license"] = m.snapshot->license;
      }
      missions.push_back(std::move(entry));
    }
    games.push_back(Json{{"game_id", g.game_id},
                         {"title", g.title},
                         {"missions", std::move(missions)}});
  }
  return Json{{"games", std::move(games)}};
}

}  // namespace maqv
