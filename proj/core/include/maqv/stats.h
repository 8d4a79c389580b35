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

#ifndef MAQV_STATS_H_
#define MAQV_STATS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maqv/corpus.h"

namespace maqv {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr int kDefaultResamples = 2000;

struct Interval {
  double lo = 0;
  double hi = 0;
};

// Percentile of a sample with linear interpolation between order
// statistics (numpy's default). `q` in [0,1]; `values` need not be sorted.
double Percentile(std::vector<double> values, double q);

// --- gold sets ----------------------------------------------------------

enum class DisagreementTag { kMissing, kSpurious, kMislabel, kMergeSplit, kGranularityDrift };

std::string_view DisagreementTagName(DisagreementTag t);
std::optional<DisagreementTag> ParseDisagreementTag(std::string_view text);

struct GoldEntry {
  std::string mission_id;
  ActionSequence sequence;
  std::vector<DisagreementTag> tags;
};

// Gold or predicted sequences keyed by mission id.
struct SequenceSet {
  std::vector<GoldEntry> entries;

  const GoldEntry* Find(std::string_view mission_id) const;
};

// Accepts {"entries":[...]} or a bare array of {mission_id, sequence, tags}.
// Throws kMalformed on bad shape or duplicate mission ids.
SequenceSet LoadSequenceSet(const Json& doc);

// Checks every sequence against the mission's library in `corpus`.
void ValidateSequenceSet(const SequenceSet& set, const Corpus& corpus);

// --- sampling -----------------------------------------------------------

struct SampleStratum {
  std::string game_id;
  QuestType quest_type = QuestType::kMain;
  int available = 0;
  int quota = 0;
};

struct StratifiedSample {
  std::vector<std::string> mission_ids;  // stratum order, then draw order
  std::vector<SampleStratum> strata;     // sorted by (game_id, quest_type)
  std::string rng_name;
  std::uint64_t seed = 0;
};

// Strata are (game, quest type) pairs among valid missions. Each stratum
// gets one slot, the rest is split in proportion to each stratum's remaining
// missions by largest remainder. Strata are drawn in sorted order from one
// Rng stream; each stratum's missions are sorted by id, shuffled, and the
// first `quota` taken. Throws kPrecondition when n exceeds the corpus.
StratifiedSample SampleStratified(const Corpus& corpus, int n = 80,
                                  std::uint64_t seed = kDefaultSeed);

// --- alignment ----------------------------------------------------------

enum class AlignOp { kMatch, kSubstitution, kDeletion, kInsertion };

std::string_view AlignOpName(AlignOp op);

struct AlignmentReport {
  std::vector<AlignOp> ops;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  int edit_distance = 0;
  double ned = 0;
  int score = 0;  // matches - substitutions - gaps
};

// Global alignment of gold against pred. Among alignments with the fewest
// edit operations, the one with the most matches is chosen; traceback
// prefers diagonal, then deletion (gold only), then insertion (pred only).
AlignmentReport NwAlign(std::span<const std::string> gold,
                        std::span<const std::string> pred);
AlignmentReport NwAlign(const ActionSequence& gold, const ActionSequence& pred);

struct MetricsReport {
  int missions = 0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double exact_match_rate = 0;
  double mean_ned = 0;
  std::optional<Interval> precision_ci;
  std::optional<Interval> recall_ci;
  std::optional<Interval> f1_ci;
  std::optional<Interval> exact_match_ci;
  std::optional<Interval> ned_ci;
};

// Pooled precision/recall from raw counts. With no predictions precision is
// 1 when nothing was missed, else 0; recall mirrors this.
double PooledPrecision(int tp, int fp, int fn);
double PooledRecall(int tp, int fp, int fn);
double F1(double precision, double recall);

// Micro-pooled metrics with percentile bootstrap CIs over missions. Resample
// r draws from Rng(seed + r). resamples == 0 skips the CIs. Throws
// kPrecondition on empty input.
MetricsReport SequenceMetrics(std::span<const AlignmentReport> reports,
                              int resamples = kDefaultResamples,
                              std::uint64_t seed = kDefaultSeed);

struct MissionAlignment {
  std::string mission_id;
  std::string game_id;
  AlignmentReport report;
};

// Aligns every gold entry with its prediction; a missing prediction aligns
// against the empty sequence.
std::vector<MissionAlignment> AlignSets(const SequenceSet& gold,
                                        const SequenceSet& pred,
                                        const Corpus* corpus = nullptr);

double MissionF1(const AlignmentReport& report);

// --- hypothesis tests ---------------------------------------------------

// Midranks (1-based) of `values`.
std::vector<double> MidRanks(std::span<const double> values);

struct KruskalWallisResult {
  double h = 0;
  double p = 1;
  int df = 0;
};

// Tie-corrected H with a chi-square(k-1) p value. Throws kPrecondition for
// fewer than two groups, an empty group, or fewer than three values.
KruskalWallisResult KruskalWallis(std::span<const std::vector<double>> groups);

// Holm step-down adjustment, monotone and capped at 1.
std::vector<double> HolmAdjust(std::span<const double> pvalues);

struct MannWhitneyResult {
  double u = 0;  // for the first sample
  double p_two_sided = 1;
  double r_rank_biserial = 0;
  bool exact = false;
};

// Exact permutation p when n1*n2 <= 400, otherwise the tie-corrected normal
// approximation without continuity correction.
MannWhitneyResult MannWhitney(std::span<const double> a, std::span<const double> b);

// r_U = 1 - 2U / (n1 n2).
double RankBiserial(double u, int n1, int n2);

// Spearman rho (Pearson on midranks). Empty when either side is constant.
std::optional<double> Spearman(std::span<const double> a, std::span<const double> b);

// --- inter-rater reliability --------------------------------------------

inline constexpr int kGridLevels = 5;
inline constexpr double kGridStep = 0.25;

using Vec6Ratings = std::array<double, kDimensionCount>;

struct RatingItem {
  std::string game;
  std::string category;
  std::string action;
  Vec6Ratings rater_a{};
  Vec6Ratings rater_b{};
  std::optional<int> max_delta_printed;
};

// Two raters, six dimensions, scores on {0, 0.25, 0.5, 0.75, 1}.
struct RatingGrid {
  std::vector<RatingItem> items;
};

// {"items":[{game, category, action, a:{u..a}, b:{u..a}}]}; throws
// kOutOfRange for off-grid scores and kMalformed for bad shape.
RatingGrid LoadRatingGrid(const Json& doc);
Json ToJson(const RatingGrid& grid);

// Grid level 0..4 of a score.
int GridLevel(double score);

// Quadratic-weighted Cohen's kappa over `levels` ordinal levels. Empty when
// either rater uses a single level.
std::optional<double> WeightedKappa(std::span<const int> a, std::span<const int> b,
                                    int levels = kGridLevels);

struct KappaEstimate {
  std::optional<double> kappa;  // empty: undefined (degenerate marginals)
  std::optional<Interval> ci;   // percentile bootstrap over items
};

// `dimension` empty pools every item x dimension cell.
KappaEstimate GridKappa(const RatingGrid& grid, std::optional<Dimension> dimension,
                        int resamples = kDefaultResamples,
                        std::uint64_t seed = kDefaultSeed);

struct AgreementStats {
  int cells = 0;
  double exact_rate = 0;
  double off_by_one_rate = 0;
  double mad = 0;
};

AgreementStats ComputeAgreement(const RatingGrid& grid,
                                std::optional<Dimension> dimension = std::nullopt);

// Per item, the largest |a - b| in grid steps over the six dimensions.
std::vector<int> MaxStepDelta(const RatingGrid& grid);

struct DimensionIrr {
  Dimension dimension = Dimension::kU;
  KappaEstimate kappa;
  AgreementStats agreement;
  std::optional<double> spearman;
};

struct IrrReport {
  int items = 0;
  std::array<DimensionIrr, kDimensionCount> per_dimension{};
  KappaEstimate pooled;
  AgreementStats agreement;
  std::vector<int> max_step_delta;
  std::vector<std::string> items_with_max_delta_2;
};

IrrReport ComputeIrr(const RatingGrid& grid, int resamples = kDefaultResamples,
                     std::uint64_t seed = kDefaultSeed);

// --- questionnaires -----------------------------------------------------

// 10 items in 1..5; 2.5 * (sum of odd (x-1) + sum of even (5-x)).
double SusScore(std::span<const int> responses);

struct UeqsScores {
  double pragmatic = 0;
  double hedonic = 0;
};

// 8 items in [-3, 3]; pragmatic = mean of 1-4, hedonic = mean of 5-8.
UeqsScores UeqsScore(std::span<const double> items);

// Single 7-point item, returned unchanged after range check.
int SeqScore(int response);

// --- documents ----------------------------------------------------------

Json ToJson(const AlignmentReport& report);
// Table rows {metric, value, ci_lo, ci_hi} mirroring the evaluation tables.
Json ToJson(const MetricsReport& report);
Json ToJson(const IrrReport& report, const RatingGrid& grid);
std::string MetricsCsv(const MetricsReport& report);
std::string IrrCsv(const IrrReport& report);

}  // namespace maqv

#endif  // MAQV_STATS_H_
