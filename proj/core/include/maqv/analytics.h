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

#ifndef MAQV_ANALYTICS_H_
#define MAQV_ANALYTICS_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maqv/corpus.h"

namespace maqv {

using Vec6 = std::array<double, kDimensionCount>;
using Series6 = std::array<std::vector<double>, kDimensionCount>;

inline constexpr int kProgressGridPoints = 101;
inline constexpr double kDefaultSigma = 2.0;

// --- per-mission views --------------------------------------------------

// Discrete Gaussian smoothing in step-index units. The kernel is truncated
// at round(4 sigma) steps and renormalized over the samples that exist near
// the edges. sigma == 0 returns the input.
std::vector<double> GaussianSmooth(std::span<const double> values, double sigma);

// Linear interpolation of per-step values onto `points` evenly spaced
// progress positions in [0,1]. Step i of N sits at (i + 0.5) / N; positions
// before the first or after the last center take the end values.
std::vector<double> InterpolateToGrid(std::span<const double> step_values,
                                      int points = kProgressGridPoints);

struct QualityFlow {
  std::string mission_id;
  double sigma = kDefaultSigma;
  Series6 raw;             // one value per step
  Series6 smoothed_steps;  // smoothed, one value per step
  Series6 smoothed;        // smoothed, on the progress grid
};

// Throws kPrecondition on an empty sequence, kUnresolvedAction on a step
// missing from the library.
QualityFlow ComputeQualityFlow(const ActionSequence& sequence,
                               const ActionLibrary& library,
                               double sigma = kDefaultSigma,
                               std::string mission_id = {});

struct TimelineSegment {
  std::size_t index = 0;
  std::string action;
  Category category = Category::kTraversal;
  double start_percent = 0;
  double end_percent = 0;
};

std::vector<TimelineSegment> ComputeTimeline(const ActionSequence& sequence,
                                             const ActionLibrary& library);

struct MissionSummary {
  std::size_t steps = 0;
  Vec6 mean{};
  Vec6 sd{};  // population SD over steps
};

MissionSummary ComputeMissionSummary(const ActionSequence& sequence,
                                     const ActionLibrary& library);

struct StoryboardBox {
  Category category = Category::kTraversal;
  std::vector<std::string> actions;  // the run, in order

  std::size_t run_length() const { return actions.size(); }
};

std::vector<StoryboardBox> ComputeStoryboard(const ActionSequence& sequence,
                                             const ActionLibrary& library);

// --- cross-title views --------------------------------------------------

enum class CentroidKind { kAction, kMission };

std::string_view CentroidKindName(CentroidKind k);  // "action" | "mission"
std::optional<CentroidKind> ParseCentroidKind(std::string_view text);

struct CentroidRow {
  std::string game_id;
  CentroidKind kind = CentroidKind::kAction;
  Vec6 centroid{};
  Vec6 row_percent{};  // centroid scaled so its largest entry is 100
  bool degenerate = false;  // all-zero centroid; row_percent is all zero
  int support = 0;          // actions or extracted missions averaged
};

// Action-level rows average each game's ActionDef vectors; mission-level
// rows average per-mission step means. Games without extracted missions are
// skipped for mission-level rows and named in `warnings` when given.
std::vector<CentroidRow> ComputeCentroids(const Corpus& corpus,
                                          CentroidKind kind,
                                          std::vector<std::string>* warnings = nullptr);

struct RadarVector {
  Vec6 values{};
  bool degenerate = false;
};

RadarVector NormalizeRadar(const Vec6& v);

struct PcaResult {
  std::vector<std::array<double, 2>> coords;  // one row per input point
  std::array<double, 2> explained_ratio{};
  std::array<Vec6, 2> components{};
  Vec6 mean{};
  Vec6 eigenvalues{};  // sorted descending
};

// Covariance PCA on mean-centered points. Each component's largest-magnitude
// loading is made positive. Throws kPrecondition for fewer than two points.
PcaResult PcaMap(std::span<const Vec6> points);

// Cyclic Jacobi eigen-decomposition of a symmetric 6x6 matrix. Eigenvectors
// are returned as rows, sorted by descending eigenvalue.
void SymmetricEigen(const std::array<Vec6, kDimensionCount>& matrix,
                    Vec6& eigenvalues,
                    std::array<Vec6, kDimensionCount>& eigenvectors);

double Euclidean(const Vec6& a, const Vec6& b);

std::vector<std::vector<double>> DistanceMatrix(std::span<const Vec6> points);

// scipy-style linkage row. Leaves are 0..n-1; the cluster formed by row k
// gets id n + k.
struct LinkageRow {
  int left = 0;
  int right = 0;
  double height = 0;
  int size = 0;
};

// Ward clustering via Lance-Williams updates. Height between clusters i and
// j is sqrt(2 n_i n_j / (n_i + n_j)) * |c_i - c_j|, which reduces to the
// Euclidean distance for singletons. Ties go to the smallest (id, id) pair.
std::vector<LinkageRow> WardLinkage(std::span<const Vec6> points);

struct DendrogramNode {
  int id = 0;
  std::optional<std::string> leaf;  // game id for leaves
  int left = -1;
  int right = -1;
  double height = 0;
  int size = 1;
};

struct Dendrogram {
  std::vector<DendrogramNode> nodes;  // leaves first, root last
  std::vector<LinkageRow> linkage;

  const DendrogramNode& root() const { return nodes.back(); }
};

Dendrogram WardDendrogram(std::span<const Vec6> points,
                          std::span<const std::string> labels);

// --- motifs and counts --------------------------------------------------

enum class StepLevel { kCategory, kAction };

std::string_view StepLevelName(StepLevel l);
std::optional<StepLevel> ParseStepLevel(std::string_view text);

inline constexpr std::size_t kMotifWindow = 3;

struct MotifCount {
  std::array<std::string, kMotifWindow> motif;
  std::string game_id;
  int support = 0;
};

// Labels of each step at the requested level.
std::vector<std::string> StepLabels(const ActionSequence& sequence,
                                    const ActionLibrary& library,
                                    StepLevel level);

// Overlapping three-step windows, counted within missions only. Ordered by
// game (corpus order), then support descending, then motif.
std::vector<MotifCount> MotifCounts(const Corpus& corpus, StepLevel level);

// The k best motifs of one game from MotifCounts output.
std::vector<MotifCount> TopMotifs(std::span<const MotifCount> counts,
                                  std::string_view game_id, std::size_t k = 3);

struct CountBar {
  std::string label;
  int count = 0;
};

// Per-game step-occurrence counts, top k with lexicographic tie-break.
std::map<std::string, std::vector<CountBar>> TopCounts(const Corpus& corpus,
                                                       StepLevel level,
                                                       std::size_t k = 5);

// --- chart-data documents -----------------------------------------------

Json ToJson(const QualityFlow& flow);
Json ToJson(std::span<const TimelineSegment> timeline);
Json ToJson(const MissionSummary& summary);
Json ToJson(std::span<const StoryboardBox> boxes);
Json ToJson(std::span<const CentroidRow> rows);
Json ToJson(const PcaResult& pca, std::span<const std::string> labels);
Json ToJson(const Dendrogram& dendrogram);
Json ToJson(std::span<const MotifCount> motifs);
Json ToJson(const std::map<std::string, std::vector<CountBar>>& counts);
Json VecToJson(const Vec6& v);  // {"u":..,"c":..,...}

// CSV tables (header row first).
std::string CentroidsCsv(std::span<const CentroidRow> rows);
std::string MotifsCsv(std::span<const MotifCount> motifs);
std::string TopCountsCsv(const std::map<std::string, std::vector<CountBar>>& counts);

}  // namespace maqv

#endif  // MAQV_ANALYTICS_H_
