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

#ifndef MAQV_TESTS_FIXTURES_H_
#define MAQV_TESTS_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "maqv/analytics.h"
#include "maqv/corpus.h"

namespace maqv::testing {

std::filesystem::path FixturePath(const std::string& relative);
Json ReadFixture(const std::string& relative);

// Every game document under fixtures/corpus.
Corpus FixtureCorpus();

// Text with exactly `words` whitespace-separated tokens.
std::string Words(int words);

struct ToyAction {
  std::string name;
  std::string category;
  Vec6 scores{};
};

// One game document. Missions are (title, quest type, steps); an empty step
// list leaves the mission unextracted.
Json GameDoc(const std::string& game_id, const std::vector<ToyAction>& actions,
             const std::vector<std::tuple<std::string, std::string,
                                          std::vector<std::string>>>& missions);

// Random corpus: `games` games, each with a few actions over a small
// category set and 1..max_missions missions of length 0..max_len.
Corpus RandomCorpus(std::uint64_t seed, int games, int max_missions, int max_len);

Vec6 RandomVec(std::uint64_t& state);

}  // namespace maqv::testing

#endif  // MAQV_TESTS_FIXTURES_H_
