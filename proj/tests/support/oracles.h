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

#ifndef MAQV_TESTS_ORACLES_H_
#define MAQV_TESTS_ORACLES_H_

// Reference implementations written independently of core.

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maqv/analytics.h"
#include "maqv/corpus.h"

namespace maqv::oracle {

// FIPS 180-4 SHA-256, lowercase hex.
std::string Sha256(std::string_view data);

struct AlignCounts {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  int edits = 0;
};

// Enumerates every global alignment; keeps fewest edits, then most matches.
AlignCounts ExhaustiveAlign(std::span<const std::string> gold,
                            std::span<const std::string> pred);

int Levenshtein(std::span<const std::string> gold, std::span<const std::string> pred);

struct WardMerge {
  std::vector<int> members;  // sorted leaf indices of the new cluster
  double height = 0;
};

// Greedy Ward: each step merges the pair whose union raises the
// within-cluster sum of squares least, evaluated from the raw members.
std::vector<WardMerge> BruteWard(std::span<const Vec6> points);

// (game, window) -> support, by enumerating every window directly.
std::map<std::pair<std::string, std::array<std::string, 3>>, int> WindowCounts(
    const Corpus& corpus, bool by_category);

struct EigenPcaResult {
  std::vector<std::array<double, 2>> coords;
  std::array<double, 2> explained_ratio{};
};

// Covariance PCA through Eigen's self-adjoint solver, same sign rule as core:
// the largest-magnitude loading of each component is positive.
EigenPcaResult EigenPca(std::span<const Vec6> points);

// Edge-renormalized discrete Gaussian at one index, summed term by term.
double GaussianAt(std::span<const double> values, double sigma, std::size_t index);

// Quadratic-weighted kappa from explicit observed and expected tables.
std::optional<double> ContingencyKappa(std::span<const int> a, std::span<const int> b,
                                       int levels);

}  // namespace maqv::oracle

#endif  // MAQV_TESTS_ORACLES_H_
