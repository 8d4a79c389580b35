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

#include "maqv/stats.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include <boost/math/special_functions/gamma.hpp>

#include "maqv/error.h"
#include "maqv/rng.h"
#include "maqv/text.h"

namespace maqv {

double Percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorKind::kPrecondition, "percentile of empty sample");
  std::sort(values.begin(), values.end());
  double pos = q * static_cast<double>(values.size() - 1);
  std::size_t i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= values.size()) return values.back();
  double t = pos - static_cast<double>(i);
  return values[i] + t * (values[i + 1] - values[i]);
}

namespace {

Interval PercentileInterval(const std::vector<double>& values) {
  return {Percentile(values, 0.025), Percentile(values, 0.975)};
}

}  // namespace

// --- gold sets ----------------------------------------------------------

std::string_view DisagreementTagName(DisagreementTag t) {
  switch (t) {
    case DisagreementTag::kMissing: return "missing";
    case DisagreementTag::kSpurious: return "spurious";
    case DisagreementTag::kMislabel: return "mislabel";
    case DisagreementTag::kMergeSplit: return "merge/split";
    case DisagreementTag::kGranularityDrift: return "granularity drift";
  }
  return "";
}

std::optional<DisagreementTag> ParseDisagreementTag(std::string_view text) {
  std::string t = ToLower(Trim(text));
  for (DisagreementTag tag :
       {DisagreementTag::kMissing, DisagreementTag::kSpurious, DisagreementTag::kMislabel,
        DisagreementTag::kMergeSplit, DisagreementTag::kGranularityDrift}) {
    if (t == DisagreementTagName(tag)) return tag;
  }
  if (t == "merge" || t == "split" || t == "merge-split") return DisagreementTag::kMergeSplit;
  if (t == "granularity" || t == "granularity-drift") return DisagreementTag::kGranularityDrift;
  return std::nullopt;
}

const GoldEntry* SequenceSet::Find(std::string_view mission_id) const {
  for (const GoldEntry& e : entries) {
    if (e.mission_id == mission_id) return &e;
  }
  return nullptr;
}

SequenceSet LoadSequenceSet(const Json& doc) {
  const Json* list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("entries")) {
      throw Error(ErrorKind::kMalformed, "sequence set: missing 'entries'");
    }
    list = &doc.at("entries");
  }
  if (!list->is_array()) throw Error(ErrorKind::kMalformed, "sequence set: expected array");
  SequenceSet set;
  std::set<std::string> seen;
  for (const Json& item : *list) {
    if (!item.is_object() || !item.contains("mission_id") || !item.contains("sequence") ||
        !item.at("sequence").is_array()) {
      throw Error(ErrorKind::kMalformed, "sequence set: entry needs mission_id and sequence");
    }
    GoldEntry e;
    e.mission_id = item.at("mission_id").get<std::string>();
    if (!seen.insert(e.mission_id).second) {
      throw Error(ErrorKind::kMalformed, "sequence set: duplicate mission " + e.mission_id);
    }
    for (const Json& s : item.at("sequence")) {
      if (!s.is_string()) throw Error(ErrorKind::kMalformed, "sequence set: non-string step");
      e.sequence.steps.push_back(s.get<std::string>());
    }
    if (item.contains("tags")) {
      for (const Json& t : item.at("tags")) {
        auto tag = ParseDisagreementTag(t.get<std::string>());
        if (!tag) {
          throw Error(ErrorKind::kMalformed, "sequence set: unknown tag " + t.dump());
        }
        e.tags.push_back(*tag);
      }
    }
    set.entries.push_back(std::move(e));
  }
  return set;
}

void ValidateSequenceSet(const SequenceSet& set, const Corpus& corpus) {
  for (const GoldEntry& e : set.entries) {
    const MissionRecord* m = corpus.FindMission(e.mission_id);
    if (!m) throw Error(ErrorKind::kNotFound, "unknown mission " + e.mission_id);
    ResolveSequence(e.sequence, *corpus.LibraryFor(m->game_id), e.mission_id);
  }
}

// --- sampling -----------------------------------------------------------

StratifiedSample SampleStratified(const Corpus& corpus, int n, std::uint64_t seed) {
  using Key = std::pair<std::string, QuestType>;
  std::map<Key, std::vector<std::string>> strata;
  int total = 0;
  for (const GameData& g : corpus.games()) {
    for (const MissionRecord& m : g.missions) {
      if (!m.valid) continue;
      strata[{g.game_id, m.quest_type}].push_back(m.mission_id);
      ++total;
    }
  }
  if (n < 0 || n > total) {
    throw Error(ErrorKind::kPrecondition, "sample size " + std::to_string(n) +
                                              " exceeds corpus size " +
                                              std::to_string(total));
  }

  StratifiedSample out;
  out.rng_name = std::string(Rng::kName);
  out.seed = seed;
  std::vector<std::vector<std::string>*> members;
  for (auto& [key, ids] : strata) {
    std::sort(ids.begin(), ids.end());
    out.strata.push_back({key.first, key.second, static_cast<int>(ids.size()), 0});
    members.push_back(&ids);
  }

  const std::size_t s = out.strata.size();
  int remaining = n;
  if (static_cast<std::size_t>(n) < s) {
    // Too few slots for one per stratum: the largest strata win.
    std::vector<std::size_t> order(s);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return out.strata[x].available > out.strata[y].available;
    });
    for (int i = 0; i < n; ++i) out.strata[order[i]].quota = 1;
    remaining = 0;
  } else {
    for (SampleStratum& st : out.strata) st.quota = 1;
    remaining -= static_cast<int>(s);
  }

  if (remaining > 0) {
    long long spare_total = 0;
    for (const SampleStratum& st : out.strata) spare_total += st.available - st.quota;
    std::vector<std::pair<long long, std::size_t>> remainders;
    int assigned = 0;
    for (std::size_t i = 0; i < s; ++i) {
      long long spare = out.strata[i].available - out.strata[i].quota;
      long long num = static_cast<long long>(remaining) * spare;
      int whole = static_cast<int>(num / spare_total);
      out.strata[i].quota += whole;
      assigned += whole;
      remainders.emplace_back(num % spare_total, i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    for (int i = 0; i < remaining - assigned; ++i) ++out.strata[remainders[i].second].quota;
  }

  Rng rng(seed);
  for (std::size_t i = 0; i < s; ++i) {
    std::vector<std::string> ids = *members[i];
    rng.Shuffle(std::span<std::string>(ids));
    for (int k = 0; k < out.strata[i].quota; ++k) out.mission_ids.push_back(ids[k]);
  }
  return out;
}

// --- alignment ----------------------------------------------------------

std::string_view AlignOpName(AlignOp op) {
  switch (op) {
    case AlignOp::kMatch: return "match";
    case AlignOp::kSubstitution: return "substitution";
    case AlignOp::kDeletion: return "deletion";
    case AlignOp::kInsertion: return "insertion";
  }
  return "";
}

AlignmentReport NwAlign(std::span<const std::string> gold,
                        std::span<const std::string> pred) {
  const std::size_t g = gold.size(), p = pred.size();
  // Cost per cell: (edit operations, -matches), compared lexicographically.
  using Cost = std::pair<int, int>;
  std::vector<std::vector<Cost>> dp(g + 1, std::vector<Cost>(p + 1));
  for (std::size_t i = 0; i <= g; ++i) dp[i][0] = {static_cast<int>(i), 0};
  for (std::size_t j = 0; j <= p; ++j) dp[0][j] = {static_cast<int>(j), 0};
  auto diag_cost = [&](std::size_t i, std::size_t j) {
    Cost c = dp[i - 1][j - 1];
    if (gold[i - 1] == pred[j - 1]) {
      c.second -= 1;
    } else {
      c.first += 1;
    }
    return c;
  };
  for (std::size_t i = 1; i <= g; ++i) {
    for (std::size_t j = 1; j <= p; ++j) {
      Cost best = diag_cost(i, j);
      Cost del{dp[i - 1][j].first + 1, dp[i - 1][j].second};
      Cost ins{dp[i][j - 1].first + 1, dp[i][j - 1].second};
      best = std::min({best, del, ins});
      dp[i][j] = best;
    }
  }

  AlignmentReport r;
  std::size_t i = g, j = p;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && diag_cost(i, j) == dp[i][j]) {
      r.ops.push_back(gold[i - 1] == pred[j - 1] ? AlignOp::kMatch : AlignOp::kSubstitution);
      --i;
      --j;
    } else if (i > 0 && Cost{dp[i - 1][j].first + 1, dp[i - 1][j].second} == dp[i][j]) {
      r.ops.push_back(AlignOp::kDeletion);
      --i;
    } else {
      r.ops.push_back(AlignOp::kInsertion);
      --j;
    }
  }
  std::reverse(r.ops.begin(), r.ops.end());

  int matches = 0, subs = 0, dels = 0, ins = 0;
  for (AlignOp op : r.ops) {
    switch (op) {
      case AlignOp::kMatch: ++matches; break;
      case AlignOp::kSubstitution: ++subs; break;
      case AlignOp::kDeletion: ++dels; break;
      case AlignOp::kInsertion: ++ins; break;
    }
  }
  r.tp = matches;
  r.fp = subs + ins;
  r.fn = subs + dels;
  r.edit_distance = subs + ins + dels;
  r.score = matches - subs - ins - dels;
  const std::size_t longest = std::max(g, p);
  r.ned = longest == 0 ? 0.0 : static_cast<double>(r.edit_distance) / longest;
  return r;
}

AlignmentReport NwAlign(const ActionSequence& gold, const ActionSequence& pred) {
  return NwAlign(std::span<const std::string>(gold.steps),
                 std::span<const std::string>(pred.steps));
}

double PooledPrecision(int tp, int fp, int fn) {
  if (tp + fp == 0) return fn == 0 ? 1.0 : 0.0;
  return static_cast<double>(tp) / (tp + fp);
}

double PooledRecall(int tp, int fp, int fn) {
  if (tp + fn == 0) return fp == 0 ? 1.0 : 0.0;
  return static_cast<double>(tp) / (tp + fn);
}

double F1(double precision, double recall) {
  return precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
}

namespace {

struct PointMetrics {
  double precision, recall, f1, exact, ned;
};

PointMetrics Pool(std::span<const AlignmentReport> reports,
                  std::span<const std::size_t> index) {
  int tp = 0, fp = 0, fn = 0, exact = 0;
  double ned = 0;
  for (std::size_t k : index) {
    const AlignmentReport& r = reports[k];
    tp += r.tp;
    fp += r.fp;
    fn += r.fn;
    exact += r.edit_distance == 0 ? 1 : 0;
    ned += r.ned;
  }
  const double n = static_cast<double>(index.size());
  double p = PooledPrecision(tp, fp, fn), rc = PooledRecall(tp, fp, fn);
  return {p, rc, F1(p, rc), exact / n, ned / n};
}

}  // namespace

MetricsReport SequenceMetrics(std::span<const AlignmentReport> reports, int resamples,
                              std::uint64_t seed) {
  if (reports.empty()) throw Error(ErrorKind::kPrecondition, "sequence_metrics: no reports");
  MetricsReport m;
  m.missions = static_cast<int>(reports.size());
  for (const AlignmentReport& r : reports) {
    m.tp += r.tp;
    m.fp += r.fp;
    m.fn += r.fn;
  }
  std::vector<std::size_t> all(reports.size());
  std::iota(all.begin(), all.end(), 0);
  PointMetrics point = Pool(reports, all);
  m.precision = point.precision;
  m.recall = point.recall;
  m.f1 = point.f1;
  m.exact_match_rate = point.exact;
  m.mean_ned = point.ned;
  if (resamples <= 0) return m;

  std::array<std::vector<double>, 5> samples;
  std::vector<std::size_t> index(reports.size());
  for (int r = 0; r < resamples; ++r) {
    Rng rng(seed + static_cast<std::uint64_t>(r));
    for (std::size_t& k : index) k = static_cast<std::size_t>(rng.Below(reports.size()));
    PointMetrics b = Pool(reports, index);
    samples[0].push_back(b.precision);
    samples[1].push_back(b.recall);
    samples[2].push_back(b.f1);
    samples[3].push_back(b.exact);
    samples[4].push_back(b.ned);
  }
  m.precision_ci = PercentileInterval(samples[0]);
  m.recall_ci = PercentileInterval(samples[1]);
  m.f1_ci = PercentileInterval(samples[2]);
  m.exact_match_ci = PercentileInterval(samples[3]);
  m.ned_ci = PercentileInterval(samples[4]);
  return m;
}

std::vector<MissionAlignment> AlignSets(const SequenceSet& gold, const SequenceSet& pred,
                                        const Corpus* corpus) {
  std::vector<MissionAlignment> out;
  static const ActionSequence kEmpty;
  for (const GoldEntry& g : gold.entries) {
    const GoldEntry* p = pred.Find(g.mission_id);
    MissionAlignment a;
    a.mission_id = g.mission_id;
    if (corpus) {
      if (const MissionRecord* m = corpus->FindMission(g.mission_id)) a.game_id = m->game_id;
    }
    if (a.game_id.empty()) {
      a.game_id = g.mission_id.substr(0, g.mission_id.find('/'));
    }
    a.report = NwAlign(g.sequence, p ? p->sequence : kEmpty);
    out.push_back(std::move(a));
  }
  return out;
}

double MissionF1(const AlignmentReport& r) {
  return F1(PooledPrecision(r.tp, r.fp, r.fn), PooledRecall(r.tp, r.fp, r.fn));
}

// --- hypothesis tests ---------------------------------------------------

std::vector<double> MidRanks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
    i = j + 1;
  }
  return ranks;
}

namespace {

// Sum over tie groups of t^3 - t.
double TieTerm(std::span<const double> values) {
  std::map<double, int> counts;
  for (double v : values) ++counts[v];
  double sum = 0;
  for (const auto& [v, t] : counts) sum += static_cast<double>(t) * t * t - t;
  return sum;
}

}  // namespace

KruskalWallisResult KruskalWallis(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw Error(ErrorKind::kPrecondition, "kruskal_wallis: need >= 2 groups");
  std::vector<double> pooled;
  for (const auto& g : groups) {
    if (g.empty()) throw Error(ErrorKind::kPrecondition, "kruskal_wallis: empty group");
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  const double n = static_cast<double>(pooled.size());
  if (pooled.size() < 3) throw Error(ErrorKind::kPrecondition, "kruskal_wallis: need >= 3 values");
  KruskalWallisResult res;
  res.df = static_cast<int>(groups.size()) - 1;
  const double correction = 1.0 - TieTerm(pooled) / (n * n * n - n);
  if (correction <= 0) return res;  // all values identical

  std::vector<double> ranks = MidRanks(pooled);
  double sum = 0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double r = 0;
    for (std::size_t k = 0; k < g.size(); ++k) r += ranks[offset + k];
    offset += g.size();
    sum += r * r / static_cast<double>(g.size());
  }
  double h = (12.0 / (n * (n + 1)) * sum - 3.0 * (n + 1)) / correction;
  res.h = std::max(0.0, h);
  res.p = res.h > 0 ? boost::math::gamma_q(res.df / 2.0, res.h / 2.0) : 1.0;
  return res;
}

std::vector<double> HolmAdjust(std::span<const double> pvalues) {
  const std::size_t m = pvalues.size();
  for (double p : pvalues) {
    if (!(p >= 0 && p <= 1)) throw Error(ErrorKind::kOutOfRange, "p value outside [0,1]");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return pvalues[x] < pvalues[y]; });
  std::vector<double> out(m);
  double running = 0;
  for (std::size_t k = 0; k < m; ++k) {
    double adj = std::min(1.0, static_cast<double>(m - k) * pvalues[order[k]]);
    running = std::max(running, adj);
    out[order[k]] = running;
  }
  return out;
}

double RankBiserial(double u, int n1, int n2) {
  if (n1 <= 0 || n2 <= 0) throw Error(ErrorKind::kPrecondition, "rank_biserial: empty sample");
  return 1.0 - 2.0 * u / (static_cast<double>(n1) * n2);
}

namespace {

// Two-sided exact p for the rank sum of sample a under all C(N, n1)
// equally likely assignments, using doubled midranks as integer weights.
double ExactMannWhitneyP(const std::vector<double>& ranks, std::size_t n1, double observed_r1) {
  const std::size_t n = ranks.size();
  std::vector<int> w(n);
  int total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = static_cast<int>(std::lround(2 * ranks[i]));
    total += w[i];
  }
  // ways[k][s]: subsets of size k with doubled rank sum s.
  std::vector<std::vector<double>> ways(n1 + 1, std::vector<double>(total + 1, 0.0));
  ways[0][0] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = std::min(n1, i + 1); k >= 1; --k) {
      for (int s = total; s >= w[i]; --s) ways[k][s] += ways[k - 1][s - w[i]];
    }
  }
  double count = 0, extreme = 0;
  const double mean2 = static_cast<double>(n1) * (n + 1);  // 2 * E[R1]
  const double dev = std::abs(2 * observed_r1 - mean2);
  for (int s = 0; s <= total; ++s) {
    double c = ways[n1][s];
    if (c == 0) continue;
    count += c;
    if (std::abs(s - mean2) >= dev - 1e-9) extreme += c;
  }
  return std::min(1.0, extreme / count);
}

}  // namespace

MannWhitneyResult MannWhitney(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::kPrecondition, "mann_whitney: empty sample");
  const std::size_t n1 = a.size(), n2 = b.size();
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<double> ranks = MidRanks(pooled);
  double r1 = 0;
  for (std::size_t i = 0; i < n1; ++i) r1 += ranks[i];

  MannWhitneyResult res;
  res.u = r1 - static_cast<double>(n1) * (n1 + 1) / 2.0;
  res.r_rank_biserial = RankBiserial(res.u, static_cast<int>(n1), static_cast<int>(n2));
  const double prod = static_cast<double>(n1) * n2;
  if (prod <= 400) {
    res.exact = true;
    res.p_two_sided = ExactMannWhitneyP(ranks, n1, r1);
    return res;
  }
  const double n = static_cast<double>(n1 + n2);
  const double var = prod / 12.0 * ((n + 1) - TieTerm(pooled) / (n * (n - 1)));
  if (var <= 0) {
    res.p_two_sided = 1.0;
    return res;
  }
  const double z = (res.u - prod / 2.0) / std::sqrt(var);
  res.p_two_sided = std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
  return res;
}

std::optional<double> Spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw Error(ErrorKind::kPrecondition, "spearman: need two equal-length samples");
  }
  std::vector<double> ra = MidRanks(a), rb = MidRanks(b);
  const double n = static_cast<double>(a.size());
  double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0 || sbb == 0) return std::nullopt;
  return sab / std::sqrt(saa * sbb);
}

// --- inter-rater reliability --------------------------------------------

int GridLevel(double score) {
  double scaled = score / kGridStep;
  long level = std::lround(scaled);
  if (level < 0 || level >= kGridLevels || std::abs(scaled - level) > 1e-6) {
    throw Error(ErrorKind::kOutOfRange,
                "score " + FormatSignificant(score) + " is not on the 0.25 grid");
  }
  return static_cast<int>(level);
}

namespace {

Vec6Ratings RatingsFromJson(const Json& j, std::string_view context) {
  if (!j.is_object()) {
    throw Error(ErrorKind::kMalformed, std::string(context) + ": expected score object");
  }
  MaqvVector v = MaqvFromJson(j);
  Vec6Ratings out = v.values();
  for (double x : out) GridLevel(x);
  return out;
}

Json RatingsToJson(const Vec6Ratings& r) { return ToJson(MaqvVector(r)); }

}  // namespace

RatingGrid LoadRatingGrid(const Json& doc) {
  const Json* list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("items")) throw Error(ErrorKind::kMalformed, "rating grid: missing 'items'");
    list = &doc.at("items");
  }
  if (!list->is_array()) throw Error(ErrorKind::kMalformed, "rating grid: items must be an array");
  RatingGrid grid;
  for (const Json& item : *list) {
    if (!item.is_object() || !item.contains("action") || !item.contains("a") ||
        !item.contains("b")) {
      throw Error(ErrorKind::kMalformed, "rating grid: item needs action, a and b");
    }
    RatingItem r;
    r.game = item.value("game", "");
    r.category = item.value("category", "");
    r.action = item.at("action").get<std::string>();
    r.rater_a = RatingsFromJson(item.at("a"), r.action);
    r.rater_b = RatingsFromJson(item.at("b"), r.action);
    if (item.contains("max_delta_printed") && item.at("max_delta_printed").is_number()) {
      r.max_delta_printed = item.at("max_delta_printed").get<int>();
    }
    grid.items.push_back(std::move(r));
  }
  return grid;
}

Json ToJson(const RatingGrid& grid) {
  Json items = Json::array();
  for (const RatingItem& r : grid.items) {
    Json j{{"game", r.game},
           {"category", r.category},
           {"action", r.action},
           {"a", RatingsToJson(r.rater_a)},
           {"b", RatingsToJson(r.rater_b)}};
    if (r.max_delta_printed) j["max_delta_printed"] = *r.max_delta_printed;
    items.push_back(std::move(j));
  }
  return Json{{"items", items}};
}

std::optional<double> WeightedKappa(std::span<const int> a, std::span<const int> b,
                                    int levels) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorKind::kPrecondition, "weighted_kappa: raters need equal, non-empty lists");
  }
  const std::size_t L = static_cast<std::size_t>(levels);
  std::vector<double> observed(L * L, 0.0), row(L, 0.0), col(L, 0.0);
  const double n = static_cast<double>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || a[i] >= levels || b[i] < 0 || b[i] >= levels) {
      throw Error(ErrorKind::kOutOfRange, "weighted_kappa: level outside range");
    }
    observed[a[i] * L + b[i]] += 1.0 / n;
    row[a[i]] += 1.0 / n;
    col[b[i]] += 1.0 / n;
  }
  auto single_level = [](const std::vector<double>& m) {
    return std::count_if(m.begin(), m.end(), [](double x) { return x > 0; }) < 2;
  };
  if (single_level(row) || single_level(col)) return std::nullopt;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      double w = (static_cast<double>(i) - j) * (static_cast<double>(i) - j);
      num += w * observed[i * L + j];
      den += w * row[i] * col[j];
    }
  }
  if (den == 0) return std::nullopt;
  return 1.0 - num / den;
}

namespace {

void CollectLevels(const RatingGrid& grid, std::span<const std::size_t> items,
                   std::optional<Dimension> dimension, std::vector<int>& a,
                   std::vector<int>& b) {
  a.clear();
  b.clear();
  for (std::size_t k : items) {
    const RatingItem& it = grid.items[k];
    for (std::size_t d = 0; d < kDimensionCount; ++d) {
      if (dimension && static_cast<std::size_t>(*dimension) != d) continue;
      a.push_back(GridLevel(it.rater_a[d]));
      b.push_back(GridLevel(it.rater_b[d]));
    }
  }
}

}  // namespace

KappaEstimate GridKappa(const RatingGrid& grid, std::optional<Dimension> dimension,
                        int resamples, std::uint64_t seed) {
  if (grid.items.size() < 2) throw Error(ErrorKind::kPrecondition, "kappa needs >= 2 items");
  KappaEstimate est;
  std::vector<std::size_t> index(grid.items.size());
  std::iota(index.begin(), index.end(), 0);
  std::vector<int> a, b;
  CollectLevels(grid, index, dimension, a, b);
  est.kappa = WeightedKappa(a, b);
  if (!est.kappa || resamples <= 0) return est;

  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(resamples));
  for (int r = 0; r < resamples; ++r) {
    Rng rng(seed + static_cast<std::uint64_t>(r));
    for (std::size_t& k : index) k = static_cast<std::size_t>(rng.Below(grid.items.size()));
    CollectLevels(grid, index, dimension, a, b);
    // Resamples with a degenerate marginal have no kappa and are dropped.
    if (auto k = WeightedKappa(a, b)) samples.push_back(*k);
  }
  if (!samples.empty()) est.ci = PercentileInterval(samples);
  return est;
}

AgreementStats ComputeAgreement(const RatingGrid& grid, std::optional<Dimension> dimension) {
  AgreementStats s;
  int exact = 0, off1 = 0;
  double abs_sum = 0;
  for (const RatingItem& it : grid.items) {
    for (std::size_t d = 0; d < kDimensionCount; ++d) {
      if (dimension && static_cast<std::size_t>(*dimension) != d) continue;
      int diff = std::abs(GridLevel(it.rater_a[d]) - GridLevel(it.rater_b[d]));
      exact += diff == 0;
      off1 += diff == 1;
      abs_sum += std::abs(it.rater_a[d] - it.rater_b[d]);
      ++s.cells;
    }
  }
  if (s.cells == 0) return s;
  s.exact_rate = static_cast<double>(exact) / s.cells;
  s.off_by_one_rate = static_cast<double>(off1) / s.cells;
  s.mad = abs_sum / s.cells;
  return s;
}

std::vector<int> MaxStepDelta(const RatingGrid& grid) {
  std::vector<int> out;
  for (const RatingItem& it : grid.items) {
    int mx = 0;
    for (std::size_t d = 0; d < kDimensionCount; ++d) {
      mx = std::max(mx, std::abs(GridLevel(it.rater_a[d]) - GridLevel(it.rater_b[d])));
    }
    out.push_back(mx);
  }
  return out;
}

IrrReport ComputeIrr(const RatingGrid& grid, int resamples, std::uint64_t seed) {
  IrrReport r;
  r.items = static_cast<int>(grid.items.size());
  for (Dimension d : kAllDimensions) {
    DimensionIrr& di = r.per_dimension[static_cast<std::size_t>(d)];
    di.dimension = d;
    di.kappa = GridKappa(grid, d, resamples, seed);
    di.agreement = ComputeAgreement(grid, d);
    std::vector<double> a, b;
    for (const RatingItem& it : grid.items) {
      a.push_back(it.rater_a[static_cast<std::size_t>(d)]);
      b.push_back(it.rater_b[static_cast<std::size_t>(d)]);
    }
    di.spearman = Spearman(a, b);
  }
  r.pooled = GridKappa(grid, std::nullopt, resamples, seed);
  r.agreement = ComputeAgreement(grid);
  r.max_step_delta = MaxStepDelta(grid);
  for (std::size_t i = 0; i < grid.items.size(); ++i) {
    if (r.max_step_delta[i] == 2) r.items_with_max_delta_2.push_back(grid.items[i].action);
  }
  return r;
}

// --- questionnaires -----------------------------------------------------

double SusScore(std::span<const int> responses) {
  if (responses.size() != 10) throw Error(ErrorKind::kOutOfRange, "SUS needs 10 responses");
  int sum = 0;
  for (std::size_t i = 0; i < responses.size(); ++i) {
    int x = responses[i];
    if (x < 1 || x > 5) throw Error(ErrorKind::kOutOfRange, "SUS response outside 1..5");
    sum += (i % 2 == 0) ? x - 1 : 5 - x;  // item i+1 odd when i even
  }
  return 2.5 * sum;
}

UeqsScores UeqsScore(std::span<const double> items) {
  if (items.size() != 8) throw Error(ErrorKind::kOutOfRange, "UEQ-S needs 8 items");
  for (double x : items) {
    if (!(x >= -3 && x <= 3)) throw Error(ErrorKind::kOutOfRange, "UEQ-S item outside -3..3");
  }
  UeqsScores s;
  s.pragmatic = (items[0] + items[1] + items[2] + items[3]) / 4.0;
  s.hedonic = (items[4] + items[5] + items[6] + items[7]) / 4.0;
  return s;
}

int SeqScore(int response) {
  if (response < 1 || response > 7) throw Error(ErrorKind::kOutOfRange, "SEQ outside 1..7");
  return response;
}

// --- documents ----------------------------------------------------------

Json ToJson(const AlignmentReport& report) {
  std::vector<std::string> ops;
  for (AlignOp op : report.ops) ops.emplace_back(AlignOpName(op));
  return Json{{"ops", ops},
              {"tp", report.tp},
              {"fp", report.fp},
              {"fn", report.fn},
              {"edit_distance", report.edit_distance},
              {"ned", report.ned},
              {"score", report.score}};
}

namespace {

Json MetricRow(std::string_view name, double value, const std::optional<Interval>& ci) {
  Json row{{"metric", name}, {"value", value}};
  row["ci_lo"] = ci ? Json(ci->lo) : Json(nullptr);
  row["ci_hi"] = ci ? Json(ci->hi) : Json(nullptr);
  return row;
}

Json KappaJson(const KappaEstimate& k) {
  Json j{{"kappa", k.kappa ? Json(*k.kappa) : Json(nullptr)}, {"undefined", !k.kappa}};
  j["ci_lo"] = k.ci ? Json(k.ci->lo) : Json(nullptr);
  j["ci_hi"] = k.ci ? Json(k.ci->hi) : Json(nullptr);
  return j;
}

Json AgreementJson(const AgreementStats& a) {
  return Json{{"cells", a.cells},
              {"exact", a.exact_rate},
              {"off_by_one", a.off_by_one_rate},
              {"mad", a.mad}};
}

std::string OptionalField(const std::optional<double>& v) {
  return v ? FormatSignificant(*v) : std::string();
}

}  // namespace

Json ToJson(const MetricsReport& r) {
  Json rows = Json::array({MetricRow("precision", r.precision, r.precision_ci),
                           MetricRow("recall", r.recall, r.recall_ci),
                           MetricRow("f1", r.f1, r.f1_ci),
                           MetricRow("exact_match", r.exact_match_rate, r.exact_match_ci),
                           MetricRow("mean_ned", r.mean_ned, r.ned_ci)});
  return Json{{"missions", r.missions},
              {"tp", r.tp},
              {"fp", r.fp},
              {"fn", r.fn},
              {"rows", rows}};
}

Json ToJson(const IrrReport& r, const RatingGrid& grid) {
  Json dims = Json::array();
  for (const DimensionIrr& d : r.per_dimension) {
    Json j = KappaJson(d.kappa);
    j["dimension"] = DimensionLabel(d.dimension);
    j["agreement"] = AgreementJson(d.agreement);
    j["spearman"] = d.spearman ? Json(*d.spearman) : Json(nullptr);
    dims.push_back(std::move(j));
  }
  Json deltas = Json::array();
  for (std::size_t i = 0; i < r.max_step_delta.size() && i < grid.items.size(); ++i) {
    deltas.push_back({{"action", grid.items[i].action}, {"max_delta", r.max_step_delta[i]}});
  }
  return Json{{"items", r.items},
              {"per_dimension", dims},
              {"pooled", KappaJson(r.pooled)},
              {"agreement", AgreementJson(r.agreement)},
              {"max_step_delta", deltas},
              {"items_with_max_delta_2", r.items_with_max_delta_2}};
}

std::string MetricsCsv(const MetricsReport& r) {
  std::ostringstream out;
  out << "metric,value,ci_lo,ci_hi\n";
  auto row = [&](std::string_view name, double v, const std::optional<Interval>& ci) {
    out << name << ',' << FormatSignificant(v) << ','
        << (ci ? FormatSignificant(ci->lo) : "") << ','
        << (ci ? FormatSignificant(ci->hi) : "") << '\n';
  };
  row("precision", r.precision, r.precision_ci);
  row("recall", r.recall, r.recall_ci);
  row("f1", r.f1, r.f1_ci);
  row("exact_match", r.exact_match_rate, r.exact_match_ci);
  row("mean_ned", r.mean_ned, r.ned_ci);
  return out.str();
}

std::string IrrCsv(const IrrReport& r) {
  std::ostringstream out;
  out << "dimension,kappa,ci_lo,ci_hi,exact,off_by_one,mad,spearman\n";
  auto row = [&](std::string_view name, const KappaEstimate& k, const AgreementStats& a,
                 const std::optional<double>& rho) {
    out << name << ',' << OptionalField(k.kappa) << ','
        << (k.ci ? FormatSignificant(k.ci->lo) : "") << ','
        << (k.ci ? FormatSignificant(k.ci->hi) : "") << ',' << FormatSignificant(a.exact_rate)
        << ',' << FormatSignificant(a.off_by_one_rate) << ',' << FormatSignificant(a.mad) << ','
        << OptionalField(rho) << '\n';
  };
  for (const DimensionIrr& d : r.per_dimension) {
    row(DimensionLabel(d.dimension), d.kappa, d.agreement, d.spearman);
  }
  row("Overall", r.pooled, r.agreement, std::nullopt);
  return out.str();
}

}  // namespace maqv
