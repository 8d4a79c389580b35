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

#include "fixtures.h"

#include <tuple>

#include "maqv/rng.h"

namespace maqv::testing {

std::filesystem::path FixturePath(const std::string& relative) {
  return std::filesystem::path(MAQV_FIXTURE_DIR) / relative;
}

Json ReadFixture(const std::string& relative) {
  return ReadJsonFile(FixturePath(relative));
}

Corpus FixtureCorpus() {
  std::vector<std::filesystem::path> paths = {FixturePath("corpus")};
  return LoadCorpusFromPaths(paths);
}

std::string Words(int words) {
  std::string out;
  for (int i = 0; i < words; ++i) {
    if (i) out += ' ';
    out += "w" + std::to_string(i);
  }
  return out;
}

Json GameDoc(const std::string& game_id, const std::vector<ToyAction>& actions,
             const std::vector<std::tuple<std::string, std::string,
                                          std::vector<std::string>>>& missions) {
  Json doc = {{"game_id", game_id}, {"title", game_id}};
  Json acts = Json::array();
  for (const ToyAction& a : actions) {
    acts.push_back({{"name", a.name},
                    {"category", a.category},
                    {"scores", VecToJson(a.scores)},
                    {"description", a.name}});
  }
  doc["actions"] = acts;
  Json ms = Json::array();
  int i = 0;
  for (const auto& [title, type, steps] : missions) {
    Json m = {{"mission_id", game_id + "/m" + std::to_string(i++)},
              {"title", title},
              {"quest_type", type},
              {"walkthrough_text", Words(40)},
              {"word_count", 40}};
    if (!steps.empty()) m["sequence"] = steps;
    ms.push_back(m);
  }
  doc["missions"] = ms;
  return doc;
}

Vec6 RandomVec(std::uint64_t& state) {
  Rng rng(state++);
  Vec6 v{};
  for (double& x : v) x = static_cast<double>(rng.Below(101)) / 100.0;
  return v;
}

Corpus RandomCorpus(std::uint64_t seed, int games, int max_missions, int max_len) {
  static const char* kCats[] = {"Traversal", "Combat", "Stealth", "Social Interaction"};
  static const char* kTypes[] = {"Main", "Side", "POI"};
  Rng rng(seed);
  std::uint64_t vec_state = seed * 7919 + 1;
  Json docs = Json::array();
  for (int g = 0; g < games; ++g) {
    std::vector<ToyAction> actions;
    int n_actions = 2 + static_cast<int>(rng.Below(4));
    for (int a = 0; a < n_actions; ++a) {
      actions.push_back({"A" + std::to_string(a), kCats[rng.Below(4)], RandomVec(vec_state)});
    }
    std::vector<std::tuple<std::string, std::string, std::vector<std::string>>> missions;
    int n_missions = 1 + static_cast<int>(rng.Below(max_missions));
    for (int m = 0; m < n_missions; ++m) {
      std::vector<std::string> steps;
      int len = static_cast<int>(rng.Below(max_len + 1));
      for (int s = 0; s < len; ++s) steps.push_back(actions[rng.Below(n_actions)].name);
      missions.emplace_back("M" + std::to_string(m), kTypes[rng.Below(3)], steps);
    }
    docs.push_back(GameDoc("g" + std::to_string(g), actions, missions));
  }
  return LoadCorpus(docs);
}

}  // namespace maqv::testing
