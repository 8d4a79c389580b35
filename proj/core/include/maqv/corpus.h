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

#ifndef MAQV_CORPUS_H_
#define MAQV_CORPUS_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace maqv {

using Json = nlohmann::json;

// The six MAQV dimensions, in their fixed serialization order.
enum class Dimension { kU = 0, kC, kN, kE, kP, kA };

inline constexpr std::size_t kDimensionCount = 6;
inline constexpr std::array<Dimension, kDimensionCount> kAllDimensions = {
    Dimension::kU, Dimension::kC, Dimension::kN,
    Dimension::kE, Dimension::kP, Dimension::kA};

// Lowercase single-letter key used in documents ("u", "c", ...).
std::string_view DimensionKey(Dimension d);
// Upper-case label ("U", "C", ...).
std::string_view DimensionLabel(Dimension d);
// Full name ("Uniqueness", ...).
std::string_view DimensionName(Dimension d);

// Tolerance for score comparisons after decimal parsing.
inline constexpr double kScoreTolerance = 1e-9;

// Six experiential scores in [0,1].
class MaqvVector {
 public:
  MaqvVector() = default;
  explicit MaqvVector(const std::array<double, kDimensionCount>& values)
      : values_(values) {}

  double operator[](Dimension d) const {
    return values_[static_cast<std::size_t>(d)];
  }
  double& operator[](Dimension d) {
    return values_[static_cast<std::size_t>(d)];
  }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  double u() const { return values_[0]; }
  double c() const { return values_[1]; }
  double n() const { return values_[2]; }
  double e() const { return values_[3]; }
  double p() const { return values_[4]; }
  double a() const { return values_[5]; }

  const std::array<double, kDimensionCount>& values() const { return values_; }

  // True when every component lies in [0,1] (within kScoreTolerance).
  bool InUnitRange() const;
  double Max() const;

  friend bool operator==(const MaqvVector&, const MaqvVector&) = default;

 private:
  std::array<double, kDimensionCount> values_{};
};

// Canonical action categories. The set is closed.
enum class Category {
  kTraversal,
  kCombat,
  kStealth,
  kPuzzleInvestigation,
  kSocialInteraction,
  kEnvironmentalInteraction,
  kSpecialAbility,
  kGadgetDeployment,
  kRangedInteraction,
};

inline constexpr std::size_t kCategoryCount = 9;
inline constexpr std::array<Category, kCategoryCount> kAllCategories = {
    Category::kTraversal,           Category::kCombat,
    Category::kStealth,             Category::kPuzzleInvestigation,
    Category::kSocialInteraction,   Category::kEnvironmentalInteraction,
    Category::kSpecialAbility,      Category::kGadgetDeployment,
    Category::kRangedInteraction};

std::string_view CategoryName(Category c);
// Accepts full names ("Puzzle & Investigation") and the short forms used in
// rating tables ("PI", "Trav", "S"/"Stl", ...). Case-insensitive.
std::optional<Category> ParseCategory(std::string_view text);

struct ActionDef {
  std::string name;
  Category category = Category::kTraversal;
  MaqvVector scores;
  std::string description;
};

// Closed per-game action vocabulary. Immutable once constructed.
class ActionLibrary {
 public:
  ActionLibrary() = default;
  // Validates: non-empty, unique names, scores in range.
  ActionLibrary(std::string game_id, std::vector<ActionDef> actions);

  const std::string& game_id() const { return game_id_; }
  const std::vector<ActionDef>& actions() const { return actions_; }
  std::size_t size() const { return actions_.size(); }

  const ActionDef* Find(std::string_view name) const;
  bool Contains(std::string_view name) const { return Find(name) != nullptr; }
  std::vector<std::string> ActionNames() const;

 private:
  std::string game_id_;
  std::vector<ActionDef> actions_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class QuestType { kMain, kSide, kPoi };

inline constexpr std::array<QuestType, 3> kAllQuestTypes = {
    QuestType::kMain, QuestType::kSide, QuestType::kPoi};

std::string_view QuestTypeName(QuestType t);  // "Main" | "Side" | "POI"
std::optional<QuestType> ParseQuestType(std::string_view text);

struct SnapshotMeta {
  long long revision_id = 0;
  std::string snapshot_url;
  std::string retrieved_at;  // ISO-8601
  std::string license;
  std::string html_sha256;   // 64 lowercase hex chars

  friend bool operator==(const SnapshotMeta&, const SnapshotMeta&) = default;
};

bool IsSha256Hex(std::string_view text);
bool IsIso8601Timestamp(std::string_view text);

struct ActionSequence {
  std::vector<std::string> steps;

  bool empty() const { return steps.empty(); }
  std::size_t size() const { return steps.size(); }
  friend bool operator==(const ActionSequence&, const ActionSequence&) = default;
};

// Minimum whitespace-token count for an admissible walkthrough.
inline constexpr int kMinWordCount = 35;

struct MissionRecord {
  std::string mission_id;
  std::string game_id;
  std::string title;
  QuestType quest_type = QuestType::kMain;
  std::string walkthrough_text;
  int word_count = 0;
  bool valid = true;
  std::optional<SnapshotMeta> snapshot;
  std::optional<ActionSequence> sequence;

  // Analytics only consider extracted missions with a non-empty sequence.
  bool extracted() const {
    return valid && sequence.has_value() && !sequence->empty();
  }
};

// One game: its library plus missions.
struct GameData {
  std::string game_id;
  std::string title;
  ActionLibrary library;
  std::vector<MissionRecord> missions;
};

// Arithmetic means of steps per mission, overall and per quest type. Groups
// with no extracted missions are absent.
struct CorpusStats {
  std::optional<double> overall_mean;
  std::map<QuestType, double> mean_by_type;
  std::map<QuestType, int> count_by_type;  // extracted missions only
  int extracted_missions = 0;
};

// Immutable validated dataset spanning one or more games.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<GameData> games);

  const std::vector<GameData>& games() const { return games_; }
  bool empty() const { return games_.empty(); }

  const GameData* FindGame(std::string_view game_id) const;
  const MissionRecord* FindMission(std::string_view mission_id) const;
  const ActionLibrary* LibraryFor(std::string_view game_id) const;

  // Counts of valid missions by quest type.
  std::map<QuestType, int> CountsByType() const;
  int ValidMissionCount() const;

  // Sub-corpus restricted to the given games (in the order given).
  Corpus Subset(std::span<const std::string> game_ids) const;

  // SHA-256 over the canonical serialization; stable for a fixed corpus.
  const std::string& digest() const { return digest_; }

 private:
  std::vector<GameData> games_;
  std::string digest_;
};

// --- documents ---------------------------------------------------------

// Parses the "actions" part of a game document.
ActionLibrary LoadLibrary(const Json& doc);
ActionLibrary LoadLibrary(std::string_view text);

// Loads game documents against previously loaded libraries. `docs` may be a
// single game document, an array of game documents, or an empty document
// ({} or []), which yields an empty corpus.
Corpus LoadCorpus(const Json& docs, std::span<const ActionLibrary> libraries);

// Loads game documents whose libraries are embedded in the same documents.
Corpus LoadCorpus(const Json& docs);

// Reads JSON files; directories contribute every *.json file (sorted).
Json ReadJsonFile(const std::filesystem::path& path);
Corpus LoadCorpusFromPaths(std::span<const std::filesystem::path> paths);

Json ToJson(const MaqvVector& v);
MaqvVector MaqvFromJson(const Json& j);
Json ToJson(const ActionDef& action);
Json ToJson(const SnapshotMeta& snapshot);
Json ToJson(const MissionRecord& mission);
Json ToJson(const GameData& game);
Json ToJson(const Corpus& corpus);  // array of game documents

// Derived-annotation export: sequences, per-mission MAQV means and
// attribution URLs. Walkthrough text is never included.
Json ExportAnnotations(const Corpus& corpus);

CorpusStats ComputeCorpusStats(const Corpus& corpus);

// Validates a sequence against a library; throws kUnresolvedAction.
void ResolveSequence(const ActionSequence& sequence,
                     const ActionLibrary& library,
                     std::string_view context);

}  // namespace maqv

#endif  // MAQV_CORPUS_H_
