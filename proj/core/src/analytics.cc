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

#include "maqv/analytics.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "maqv/error.h"
#include "maqv/text.h"

namespace maqv {

namespace {

const ActionDef& Resolve(const ActionLibrary& library, const std::string& step) {
  const ActionDef* def = library.Find(step);
  if (!def) {
    throw Error(ErrorKind::kUnresolvedAction,
                "action '" + step + "' not in library of " + library.game_id());
  }
  return *def;
}

void RequireNonEmpty(const ActionSequence& sequence, std::string_view op) {
  if (sequence.empty()) {
    throw Error(ErrorKind::kPrecondition, std::string(op) + ": empty sequence");
  }
}

}  // namespace

std::vector<double> GaussianSmooth(std::span<const double> values, double sigma) {
  if (sigma < 0) throw Error(ErrorKind::kPrecondition, "sigma must be >= 0");
  std::vector<double> out(values.begin(), values.end());
  if (sigma == 0 || values.empty()) return out;
  const int n = static_cast<int>(values.size());
  const int radius = static_cast<int>(std::floor(4.0 * sigma + 0.5));
  std::vector<double> kernel(static_cast<std::size_t>(radius) + 1);
  for (int k = 0; k <= radius; ++k) {
    kernel[k] = std::exp(-0.5 * (k / sigma) * (k / sigma));
  }
  for (int i = 0; i < n; ++i) {
    double acc = 0, weight = 0;
    for (int j = std::max(0, i - radius); j <= std::min(n - 1, i + radius); ++j) {
      double w = kernel[std::abs(j - i)];
      acc += w * values[j];
      weight += w;
    }
    out[i] = acc / weight;
  }
  return out;
}

std::vector<double> InterpolateToGrid(std::span<const double> step_values,
                                      int points) {
  if (step_values.empty()) {
    throw Error(ErrorKind::kPrecondition, "interpolate: no samples");
  }
  if (points < 2) throw Error(ErrorKind::kPrecondition, "grid needs >= 2 points");
  const std::size_t n = step_values.size();
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int g = 0; g < points; ++g) {
    // Position in step-center units: center of step i is at i.
    double x = static_cast<double>(g) / (points - 1) * n - 0.5;
    if (x <= 0) {
      out[g] = step_values.front();
    } else if (x >= static_cast<double>(n - 1)) {
      out[g] = step_values.back();
    } else {
      std::size_t i = static_cast<std::size_t>(std::floor(x));
      double t = x - static_cast<double>(i);
      out[g] = step_values[i] + t * (step_values[i + 1] - step_values[i]);
    }
  }
  return out;
}

QualityFlow ComputeQualityFlow(const ActionSequence& sequence,
                               const ActionLibrary& library, double sigma,
                               std::string mission_id) {
  RequireNonEmpty(sequence, "quality_flow");
  QualityFlow flow;
  flow.mission_id = std::move(mission_id);
  flow.sigma = sigma;
  for (const std::string& step : sequence.steps) {
    const ActionDef& def = Resolve(library, step);
    for (std::size_t d = 0; d < kDimensionCount; ++d) {
      flow.raw[d].push_back(def.scores[d]);
    }
  }
  for (std::size_t d = 0; d < kDimensionCount; ++d) {
    flow.smoothed_steps[d] = GaussianSmooth(flow.raw[d], sigma);
    flow.smoothed[d] = InterpolateToGrid(flow.smoothed_steps[d]);
  }
  return flow;
}

std::vector<TimelineSegment> ComputeTimeline(const ActionSequence& sequence,
                                             const ActionLibrary& library) {
  RequireNonEmpty(sequence, "timeline");
  std::vector<TimelineSegment> out;
  const double n = static_cast<double>(sequence.size());
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const ActionDef& def = Resolve(library, sequence.steps[i]);
    out.push_back({i, def.name, def.category, 100.0 * i / n, 100.0 * (i + 1) / n});
  }
  return out;
}

MissionSummary ComputeMissionSummary(const ActionSequence& sequence,
                                     const ActionLibrary& library) {
  RequireNonEmpty(sequence, "mission_summary");
  MissionSummary s;
  s.steps = sequence.size();
  std::vector<const ActionDef*> defs;
  for (const std::string& step : sequence.steps) defs.push_back(&Resolve(library, step));
  const double n = static_cast<double>(defs.size());
  for (std::size_t d = 0; d < kDimensionCount; ++d) {
    double sum = 0;
    for (const ActionDef* def : defs) sum += def->scores[d];
    s.mean[d] = sum / n;
    double ss = 0;
    for (const ActionDef* def : defs) {
      double dev = def->scores[d] - s.mean[d];
      ss += dev * dev;
    }
    s.sd[d] = std::sqrt(ss / n);
  }
  return s;
}

std::vector<StoryboardBox> ComputeStoryboard(const ActionSequence& sequence,
                                             const ActionLibrary& library) {
  RequireNonEmpty(sequence, "storyboard");
  std::vector<StoryboardBox> boxes;
  for (const std::string& step : sequence.steps) {
    const ActionDef& def = Resolve(library, step);
    if (boxes.empty() || boxes.back().category != def.category) {
      boxes.push_back({def.category, {}});
    }
    boxes.back().actions.push_back(def.name);
  }
  return boxes;
}

// --- centroids ----------------------------------------------------------

std::string_view CentroidKindName(CentroidKind k) {
  return k == CentroidKind::kAction ? "action" : "mission";
}

std::optional<CentroidKind> ParseCentroidKind(std::string_view text) {
  if (text == "action") return CentroidKind::kAction;
  if (text == "mission") return CentroidKind::kMission;
  return std::nullopt;
}

namespace {

Vec6 RowPercent(const Vec6& v, bool& degenerate) {
  double mx = *std::max_element(v.begin(), v.end());
  Vec6 out{};
  degenerate = !(mx > 0);
  if (degenerate) return out;
  for (std::size_t d = 0; d < kDimensionCount; ++d) out[d] = 100.0 * v[d] / mx;
  return out;
}

}  // namespace

std::vector<CentroidRow> ComputeCentroids(const Corpus& corpus, CentroidKind kind,
                                          std::vector<std::string>* warnings) {
  std::vector<CentroidRow> rows;
  for (const GameData& game : corpus.games()) {
    CentroidRow row;
    row.game_id = game.game_id;
    row.kind = kind;
    if (kind == CentroidKind::kAction) {
      for (const ActionDef& a : game.library.actions()) {
        for (std::size_t d = 0; d < kDimensionCount; ++d) row.centroid[d] += a.scores[d];
      }
      row.support = static_cast<int>(game.library.size());
    } else {
      for (const MissionRecord& m : game.missions) {
        if (!m.extracted()) continue;
        MissionSummary s = ComputeMissionSummary(*m.sequence, game.library);
        for (std::size_t d = 0; d < kDimensionCount; ++d) row.centroid[d] += s.mean[d];
        ++row.support;
      }
    }
    if (row.support == 0) {
      if (warnings) {
        warnings->push_back(game.game_id + ": no extracted missions; excluded");
      }
      continue;
    }
    for (double& x : row.centroid) x /= row.support;
    row.row_percent = RowPercent(row.centroid, row.degenerate);
    rows.push_back(std::move(row));
  }
  return rows;
}

RadarVector NormalizeRadar(const Vec6& v) {
  RadarVector out;
  double mx = *std::max_element(v.begin(), v.end());
  if (!(mx > 0)) {
    out.values = v;
    out.degenerate = true;
    return out;
  }
  for (std::size_t d = 0; d < kDimensionCount; ++d) out.values[d] = v[d] / mx;
  return out;
}

// --- PCA ----------------------------------------------------------------

void SymmetricEigen(const std::array<Vec6, kDimensionCount>& matrix,
                    Vec6& eigenvalues,
                    std::array<Vec6, kDimensionCount>& eigenvectors) {
  constexpr std::size_t n = kDimensionCount;
  std::array<Vec6, n> a = matrix;
  std::array<Vec6, n> v{};
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    }
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0) continue;
        double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<std::size_t, n> order;
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
  for (std::size_t r = 0; r < n; ++r) {
    eigenvalues[r] = a[order[r]][order[r]];
    for (std::size_t k = 0; k < n; ++k) eigenvectors[r][k] = v[k][order[r]];
  }
}

PcaResult PcaMap(std::span<const Vec6> points) {
  if (points.size() < 2) {
    throw Error(ErrorKind::kPrecondition, "pca_map needs at least two games");
  }
  constexpr std::size_t n = kDimensionCount;
  PcaResult res;
  const double m = static_cast<double>(points.size());
  for (const Vec6& p : points) {
    for (std::size_t d = 0; d < n; ++d) res.mean[d] += p[d] / m;
  }
  std::array<Vec6, n> cov{};
  for (const Vec6& p : points) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        cov[i][j] += (p[i] - res.mean[i]) * (p[j] - res.mean[j]) / (m - 1);
      }
    }
  }
  std::array<Vec6, n> vecs{};
  SymmetricEigen(cov, res.eigenvalues, vecs);
  double total = 0;
  for (double& ev : res.eigenvalues) {
    if (ev < 0) ev = 0;
    total += ev;
  }
  for (std::size_t c = 0; c < 2; ++c) {
    Vec6 comp = vecs[c];
    std::size_t arg = 0;
    for (std::size_t k = 1; k < n; ++k) {
      if (std::abs(comp[k]) > std::abs(comp[arg]) + 1e-12) arg = k;
    }
    if (comp[arg] < 0) {
      for (double& x : comp) x = -x;
    }
    res.components[c] = comp;
    res.explained_ratio[c] = total > 0 ? res.eigenvalues[c] / total : 0.0;
  }
  for (const Vec6& p : points) {
    std::array<double, 2> xy{};
    for (std::size_t c = 0; c < 2; ++c) {
      for (std::size_t k = 0; k < n; ++k) {
        xy[c] += (p[k] - res.mean[k]) * res.components[c][k];
      }
    }
    res.coords.push_back(xy);
  }
  return res;
}

double Euclidean(const Vec6& a, const Vec6& b) {
  double s = 0;
  for (std::size_t d = 0; d < kDimensionCount; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return std::sqrt(s);
}

std::vector<std::vector<double>> DistanceMatrix(std::span<const Vec6> points) {
  const std::size_t n = points.size();
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out[i][j] = out[j][i] = Euclidean(points[i], points[j]);
    }
  }
  return out;
}

// --- Ward ---------------------------------------------------------------

std::vector<LinkageRow> WardLinkage(std::span<const Vec6> points) {
  const int n = static_cast<int>(points.size());
  if (n < 2) throw Error(ErrorKind::kPrecondition, "ward needs at least two games");
  const int total = 2 * n - 1;
  // Squared Ward distances between cluster ids.
  std::vector<std::vector<double>> d2(total, std::vector<double>(total, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double e = Euclidean(points[i], points[j]);
      d2[i][j] = d2[j][i] = e * e;
    }
  }
  std::vector<int> size(total, 1);
  std::vector<int> active(n);
  std::iota(active.begin(), active.end(), 0);
  std::vector<LinkageRow> rows;
  for (int step = 0; step < n - 1; ++step) {
    int bi = -1, bj = -1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < active.size(); ++x) {
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        int i = std::min(active[x], active[y]);
        int j = std::max(active[x], active[y]);
        double v = d2[i][j];
        if (v < best || (v == best && std::make_pair(i, j) < std::make_pair(bi, bj))) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    const int k = n + step;
    size[k] = size[bi] + size[bj];
    for (int o : active) {
      if (o == bi || o == bj) continue;
      double ni = size[bi], nj = size[bj], no = size[o];
      double v = ((ni + no) * d2[o][bi] + (nj + no) * d2[o][bj] - no * d2[bi][bj]) /
                 (ni + nj + no);
      d2[o][k] = d2[k][o] = std::max(0.0, v);
    }
    rows.push_back({bi, bj, std::sqrt(std::max(0.0, best)), size[k]});
    active.erase(std::remove_if(active.begin(), active.end(),
                                [&](int c) { return c == bi || c == bj; }),
                 active.end());
    active.push_back(k);
  }
  return rows;
}

Dendrogram WardDendrogram(std::span<const Vec6> points,
                          std::span<const std::string> labels) {
  if (labels.size() != points.size()) {
    throw Error(ErrorKind::kPrecondition, "ward: label count mismatch");
  }
  Dendrogram tree;
  tree.linkage = WardLinkage(points);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    DendrogramNode leaf;
    leaf.id = static_cast<int>(i);
    leaf.leaf = labels[i];
    tree.nodes.push_back(leaf);
  }
  for (const LinkageRow& row : tree.linkage) {
    DendrogramNode node;
    node.id = static_cast<int>(tree.nodes.size());
    node.left = row.left;
    node.right = row.right;
    node.height = row.height;
    node.size = row.size;
    tree.nodes.push_back(node);
  }
  return tree;
}

// --- motifs and counts --------------------------------------------------

std::string_view StepLevelName(StepLevel l) {
  return l == StepLevel::kCategory ? "category" : "action";
}

std::optional<StepLevel> ParseStepLevel(std::string_view text) {
  if (text == "category") return StepLevel::kCategory;
  if (text == "action") return StepLevel::kAction;
  return std::nullopt;
}

std::vector<std::string> StepLabels(const ActionSequence& sequence,
                                    const ActionLibrary& library,
                                    StepLevel level) {
  std::vector<std::string> out;
  out.reserve(sequence.size());
  for (const std::string& step : sequence.steps) {
    const ActionDef& def = Resolve(library, step);
    out.push_back(level == StepLevel::kCategory ? std::string(CategoryName(def.category))
                                                : def.name);
  }
  return out;
}

std::vector<MotifCount> MotifCounts(const Corpus& corpus, StepLevel level) {
  std::vector<MotifCount> out;
  for (const GameData& game : corpus.games()) {
    std::map<std::array<std::string, kMotifWindow>, int> tally;
    for (const MissionRecord& m : game.missions) {
      if (!m.extracted()) continue;
      std::vector<std::string> labels = StepLabels(*m.sequence, game.library, level);
      for (std::size_t i = 0; i + kMotifWindow <= labels.size(); ++i) {
        ++tally[{labels[i], labels[i + 1], labels[i + 2]}];
      }
    }
    std::vector<MotifCount> game_counts;
    for (const auto& [motif, support] : tally) {
      game_counts.push_back({motif, game.game_id, support});
    }
    std::stable_sort(game_counts.begin(), game_counts.end(),
                     [](const MotifCount& x, const MotifCount& y) {
                       return x.support > y.support;
                     });
    out.insert(out.end(), game_counts.begin(), game_counts.end());
  }
  return out;
}

std::vector<MotifCount> TopMotifs(std::span<const MotifCount> counts,
                                  std::string_view game_id, std::size_t k) {
  std::vector<MotifCount> out;
  for (const MotifCount& mc : counts) {
    if (mc.game_id == game_id) out.push_back(mc);
  }
  std::sort(out.begin(), out.end(), [](const MotifCount& x, const MotifCount& y) {
    if (x.support != y.support) return x.support > y.support;
    return x.motif < y.motif;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

std::map<std::string, std::vector<CountBar>> TopCounts(const Corpus& corpus,
                                                       StepLevel level,
                                                       std::size_t k) {
  std::map<std::string, std::vector<CountBar>> out;
  for (const GameData& game : corpus.games()) {
    std::map<std::string, int> tally;
    for (const MissionRecord& m : game.missions) {
      if (!m.extracted()) continue;
      for (std::string& label : StepLabels(*m.sequence, game.library, level)) {
        ++tally[label];
      }
    }
    std::vector<CountBar> bars;
    for (const auto& [label, count] : tally) bars.push_back({label, count});
    std::stable_sort(bars.begin(), bars.end(), [](const CountBar& x, const CountBar& y) {
      return x.count > y.count;
    });
    if (bars.size() > k) bars.resize(k);
    out[game.game_id] = std::move(bars);
  }
  return out;
}

// --- documents ----------------------------------------------------------

Json VecToJson(const Vec6& v) {
  Json j = Json::object();
  for (Dimension d : kAllDimensions) {
    j[std::string(DimensionKey(d))] = v[static_cast<std::size_t>(d)];
  }
  return j;
}

namespace {

Json SeriesToJson(const Series6& s) {
  Json j = Json::object();
  for (Dimension d : kAllDimensions) {
    j[std::string(DimensionKey(d))] = s[static_cast<std::size_t>(d)];
  }
  return j;
}

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Json ToJson(const QualityFlow& flow) {
  Json grid = Json::array();
  for (int g = 0; g < kProgressGridPoints; ++g) {
    grid.push_back(100.0 * g / (kProgressGridPoints - 1));
  }
  return Json{{"mission_id", flow.mission_id},
              {"sigma", flow.sigma},
              {"steps", flow.raw[0].size()},
              {"raw", SeriesToJson(flow.raw)},
              {"smoothed_steps", SeriesToJson(flow.smoothed_steps)},
              {"progress_percent", grid},
              {"smoothed", SeriesToJson(flow.smoothed)}};
}

Json ToJson(std::span<const TimelineSegment> timeline) {
  Json arr = Json::array();
  for (const TimelineSegment& s : timeline) {
    arr.push_back({{"index", s.index},
                   {"action", s.action},
                   {"category", CategoryName(s.category)},
                   {"start_percent", s.start_percent},
                   {"end_percent", s.end_percent}});
  }
  return arr;
}

Json ToJson(const MissionSummary& summary) {
  return Json{{"steps", summary.steps},
              {"mean", VecToJson(summary.mean)},
              {"sd", VecToJson(summary.sd)}};
}

Json ToJson(std::span<const StoryboardBox> boxes) {
  Json arr = Json::array();
  for (const StoryboardBox& b : boxes) {
    arr.push_back({{"category", CategoryName(b.category)},
                   {"run_length", b.run_length()},
                   {"actions", b.actions}});
  }
  return arr;
}

Json ToJson(std::span<const CentroidRow> rows) {
  Json arr = Json::array();
  for (const CentroidRow& r : rows) {
    arr.push_back({{"game_id", r.game_id},
                   {"kind", CentroidKindName(r.kind)},
                   {"centroid", VecToJson(r.centroid)},
                   {"row_percent", VecToJson(r.row_percent)},
                   {"degenerate", r.degenerate},
                   {"support", r.support}});
  }
  return arr;
}

Json ToJson(const PcaResult& pca, std::span<const std::string> labels) {
  Json points = Json::array();
  for (std::size_t i = 0; i < pca.coords.size(); ++i) {
    points.push_back({{"game_id", i < labels.size() ? labels[i] : std::to_string(i)},
                      {"pc1", pca.coords[i][0]},
                      {"pc2", pca.coords[i][1]}});
  }
  return Json{{"points", points},
              {"explained_variance_ratio", pca.explained_ratio},
              {"components", Json::array({VecToJson(pca.components[0]),
                                          VecToJson(pca.components[1])})},
              {"mean", VecToJson(pca.mean)}};
}

Json ToJson(const Dendrogram& dendrogram) {
  std::function<Json(int)> node_json = [&](int id) -> Json {
    const DendrogramNode& node = dendrogram.nodes[id];
    if (node.leaf) return Json{{"id", id}, {"leaf", *node.leaf}, {"height", 0.0}};
    return Json{{"id", id},
                {"height", node.height},
                {"size", node.size},
                {"children", Json::array({node_json(node.left), node_json(node.right)})}};
  };
  Json linkage = Json::array();
  for (const LinkageRow& r : dendrogram.linkage) {
    linkage.push_back(Json::array({r.left, r.right, r.height, r.size}));
  }
  return Json{{"root", node_json(dendrogram.root().id)}, {"linkage", linkage}};
}

Json ToJson(std::span<const MotifCount> motifs) {
  Json arr = Json::array();
  for (const MotifCount& m : motifs) {
    arr.push_back({{"game_id", m.game_id}, {"motif", m.motif}, {"support", m.support}});
  }
  return arr;
}

Json ToJson(const std::map<std::string, std::vector<CountBar>>& counts) {
  Json obj = Json::object();
  for (const auto& [game, bars] : counts) {
    Json arr = Json::array();
    for (const CountBar& b : bars) arr.push_back({{"label", b.label}, {"count", b.count}});
    obj[game] = arr;
  }
  return obj;
}

std::string CentroidsCsv(std::span<const CentroidRow> rows) {
  std::ostringstream out;
  out << "game_id,kind,support";
  for (Dimension d : kAllDimensions) out << ',' << DimensionLabel(d);
  for (Dimension d : kAllDimensions) out << ',' << DimensionLabel(d) << "_pct";
  out << '\n';
  for (const CentroidRow& r : rows) {
    out << CsvField(r.game_id) << ',' << CentroidKindName(r.kind) << ',' << r.support;
    for (double x : r.centroid) out << ',' << FormatSignificant(x);
    for (double x : r.row_percent) out << ',' << FormatSignificant(x);
    out << '\n';
  }
  return out.str();
}

std::string MotifsCsv(std::span<const MotifCount> motifs) {
  std::ostringstream out;
  out << "game_id,step1,step2,step3,support\n";
  for (const MotifCount& m : motifs) {
    out << CsvField(m.game_id);
    for (const std::string& s : m.motif) out << ',' << CsvField(s);
    out << ',' << m.support << '\n';
  }
  return out.str();
}

std::string TopCountsCsv(const std::map<std::string, std::vector<CountBar>>& counts) {
  std::ostringstream out;
  out << "game_id,rank,label,count\n";
  for (const auto& [game, bars] : counts) {
    for (std::size_t i = 0; i < bars.size(); ++i) {
      out << CsvField(game) << ',' << i + 1 << ',' << CsvField(bars[i].label) << ','
          << bars[i].count << '\n';
    }
  }
  return out.str();
}

}  // namespace maqv
