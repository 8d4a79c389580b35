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

#include "maqv/service.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <vector>

#include <httplib.h>

#include "maqv/analytics.h"
#include "maqv/error.h"
#include "maqv/text.h"

namespace maqv {

Json RoundFloats(const Json& value, int digits) {
  switch (value.type()) {
    case Json::value_t::number_float: {
      double v = value.get<double>();
      if (!std::isfinite(v)) return nullptr;
      double r = std::strtod(FormatSignificant(v, digits).c_str(), nullptr);
      return r == 0 ? 0.0 : r;  // no "-0.0"
    }
    case Json::value_t::array: {
      Json out = Json::array();
      for (const Json& item : value) out.push_back(RoundFloats(item, digits));
      return out;
    }
    case Json::value_t::object: {
      Json out = Json::object();
      for (auto it = value.begin(); it != value.end(); ++it) {
        out[it.key()] = RoundFloats(it.value(), digits);
      }
      return out;
    }
    default:
      return value;
  }
}

std::string StableDump(const Json& value) { return RoundFloats(value).dump(); }

namespace {

class ApiError : public std::runtime_error {
 public:
  ApiError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }

 private:
  int status_;
  std::string code_;
};

[[noreturn]] void BadParam(const std::string& message) {
  throw ApiError(400, "bad-param", message);
}

[[noreturn]] void NotFound(const std::string& message) {
  throw ApiError(404, "not-found", message);
}

std::string PercentDecode(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '%' && i + 2 < text.size()) {
      int v = 0;
      auto [p, ec] = std::from_chars(text.data() + i + 1, text.data() + i + 3, v, 16);
      if (ec == std::errc() && p == text.data() + i + 3) {
        out += static_cast<char>(v);
        i += 2;
        continue;
      }
    }
    out += text[i];
  }
  return out;
}

// Resolved query parameters; what ends up echoed back.
class Params {
 public:
  explicit Params(const QueryParams& raw) : raw_(raw) {}

  double Real(const std::string& key, double fallback, double lo, double hi) {
    double v = fallback;
    if (auto it = raw_.find(key); it != raw_.end()) {
      const std::string& s = it->second;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
        BadParam(key + " must be a number");
      }
    }
    if (v < lo || v > hi) {
      BadParam(key + " must be in [" + FormatSignificant(lo) + ", " + FormatSignificant(hi) + "]");
    }
    echo_[key] = v;
    return v;
  }

  int Int(const std::string& key, int fallback, int lo, int hi) {
    int v = fallback;
    if (auto it = raw_.find(key); it != raw_.end()) {
      const std::string& s = it->second;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) BadParam(key + " must be an integer");
    }
    if (v < lo || v > hi) {
      BadParam(key + " must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    echo_[key] = v;
    return v;
  }

  bool Flag(const std::string& key, bool fallback) {
    bool v = fallback;
    if (auto it = raw_.find(key); it != raw_.end()) {
      if (it->second == "1" || it->second == "true") {
        v = true;
      } else if (it->second == "0" || it->second == "false") {
        v = false;
      } else {
        BadParam(key + " must be 0 or 1");
      }
    }
    echo_[key] = v;
    return v;
  }

  CentroidKind Kind() {
    std::string s = Text("kind", "action");
    auto k = ParseCentroidKind(s);
    if (!k) BadParam("kind must be action or mission");
    return *k;
  }

  StepLevel Level() {
    std::string s = Text("level", "category");
    auto l = ParseStepLevel(s);
    if (!l) BadParam("level must be category or action");
    return *l;
  }

  // Comma-separated game subset; empty means every game.
  std::vector<std::string> Games(const Corpus& corpus) {
    std::vector<std::string> ids;
    if (auto it = raw_.find("games"); it != raw_.end() && !Trim(it->second).empty()) {
      for (const std::string& part : Split(it->second, ',')) {
        std::string id(Trim(part));
        if (id.empty()) BadParam("games contains an empty id");
        if (!corpus.FindGame(id)) NotFound("unknown game '" + id + "'");
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
      }
    } else {
      for (const GameData& g : corpus.games()) ids.push_back(g.game_id);
    }
    echo_["games"] = ids;
    return ids;
  }

  const Json& echo() const { return echo_; }

 private:
  std::string Text(const std::string& key, const std::string& fallback) {
    std::string v = fallback;
    if (auto it = raw_.find(key); it != raw_.end()) v = it->second;
    echo_[key] = v;
    return v;
  }

  const QueryParams& raw_;
  Json echo_ = Json::object();
};

Json Envelope(const Json& data, const Json& params, const std::string& digest) {
  return Json{{"status", "ok"}, {"data", data}, {"params", params}, {"corpus_digest", digest}};
}

std::vector<Vec6> CentroidPoints(const std::vector<CentroidRow>& rows) {
  std::vector<Vec6> pts;
  for (const CentroidRow& r : rows) pts.push_back(r.centroid);
  return pts;
}

std::vector<std::string> CentroidLabels(const std::vector<CentroidRow>& rows) {
  std::vector<std::string> labels;
  for (const CentroidRow& r : rows) labels.push_back(r.game_id);
  return labels;
}

Json GameListing(const Corpus& corpus) {
  Json arr = Json::array();
  for (const GameData& g : corpus.games()) {
    int extracted = 0;
    for (const MissionRecord& m : g.missions) extracted += m.extracted() ? 1 : 0;
    arr.push_back({{"game_id", g.game_id},
                   {"title", g.title},
                   {"actions", g.library.size()},
                   {"missions", g.missions.size()},
                   {"extracted_missions", extracted}});
  }
  return arr;
}

Json MissionListing(const GameData& g) {
  Json arr = Json::array();
  for (const MissionRecord& m : g.missions) {
    arr.push_back({{"mission_id", m.mission_id},
                   {"title", m.title},
                   {"quest_type", QuestTypeName(m.quest_type)},
                   {"word_count", m.word_count},
                   {"valid", m.valid},
                   {"extracted", m.extracted()},
                   {"steps", m.sequence ? m.sequence->size() : 0}});
  }
  return arr;
}

Json ActionListing(const ActionLibrary& lib) {
  Json arr = Json::array();
  for (const ActionDef& a : lib.actions()) arr.push_back(ToJson(a));
  return arr;
}

}  // namespace

ApiService::ApiService(Corpus corpus) : corpus_(std::move(corpus)) {}

std::size_t ApiService::cache_size() const {
  std::lock_guard<std::mutex> lock(cache_mu_);
  return cache_.size();
}

ApiResponse ApiService::Handle(std::string_view method, std::string_view path,
                               const QueryParams& query) const {
  if (method != "GET") {
    Json body{{"status", "error"},
              {"error", {{"code", "method-not-allowed"}, {"message", "read-only API"}}},
              {"params", Json::object()},
              {"corpus_digest", corpus_.digest()}};
    return {405, StableDump(body)};
  }
  std::string decoded = PercentDecode(path);
  std::string key = corpus_.digest() + " " + decoded;
  for (const auto& [k, v] : query) key += "\x1f" + k + "=" + v;
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  ApiResponse response = Route(decoded, query);
  if (response.status == 200) {
    std::lock_guard<std::mutex> lock(cache_mu_);
    cache_.emplace(key, response);
  }
  return response;
}

ApiResponse ApiService::Route(std::string_view path, const QueryParams& query) const {
  Params params(query);
  try {
    while (path.size() > 1 && path.back() == '/') path.remove_suffix(1);
    std::vector<std::string> parts;
    for (const std::string& p : Split(path, '/')) {
      if (!p.empty()) parts.push_back(p);
    }
    Json data;

    if (parts.size() == 1 && parts[0] == "games") {
      data = GameListing(corpus_);
    } else if (parts.size() == 3 && parts[0] == "games") {
      const GameData* g = corpus_.FindGame(parts[1]);
      if (!g) NotFound("unknown game '" + parts[1] + "'");
      if (parts[2] == "actions") {
        data = ActionListing(g->library);
      } else if (parts[2] == "missions") {
        data = MissionListing(*g);
      } else {
        NotFound("unknown endpoint");
      }
    } else if (parts.size() >= 3 && parts[0] == "missions") {
      // Mission ids may contain '/', so the id is everything between the
      // prefix and the view name.
      std::string id = parts[1];
      for (std::size_t i = 2; i + 1 < parts.size(); ++i) id += "/" + parts[i];
      const std::string& view = parts.back();
      const MissionRecord* m = corpus_.FindMission(id);
      if (!m) NotFound("unknown mission '" + id + "'");
      if (!m->extracted()) throw ApiError(404, "unextracted", "mission '" + id + "' has no sequence");
      const ActionLibrary& lib = *corpus_.LibraryFor(m->game_id);
      if (view == "flow") {
        double sigma = params.Real("sigma", kDefaultSigma, 0.0, 100.0);
        data = ToJson(ComputeQualityFlow(*m->sequence, lib, sigma, m->mission_id));
      } else if (view == "timeline") {
        data = ToJson(std::span<const TimelineSegment>(ComputeTimeline(*m->sequence, lib)));
      } else if (view == "storyboard") {
        data = ToJson(std::span<const StoryboardBox>(ComputeStoryboard(*m->sequence, lib)));
      } else if (view == "summary") {
        data = ToJson(ComputeMissionSummary(*m->sequence, lib));
      } else {
        NotFound("unknown endpoint");
      }
    } else if (parts.size() == 2 && parts[0] == "compare") {
      const std::string& view = parts[1];
      std::vector<std::string> games = params.Games(corpus_);
      Corpus sub = corpus_.Subset(games);
      if (view == "radar") {
        CentroidKind kind = params.Kind();
        bool normalize = params.Flag("normalize", false);
        std::vector<std::string> warnings;
        Json arr = Json::array();
        for (const CentroidRow& r : ComputeCentroids(sub, kind, &warnings)) {
          RadarVector rv = normalize ? NormalizeRadar(r.centroid) : RadarVector{r.centroid, false};
          arr.push_back({{"game_id", r.game_id},
                         {"values", VecToJson(rv.values)},
                         {"degenerate", rv.degenerate}});
        }
        data = Json{{"polygons", arr}, {"warnings", warnings}};
      } else if (view == "centroids") {
        std::vector<std::string> warnings;
        std::vector<CentroidRow> rows = ComputeCentroids(sub, params.Kind(), &warnings);
        data = Json{{"rows", ToJson(std::span<const CentroidRow>(rows))}, {"warnings", warnings}};
      } else if (view == "pca" || view == "distance" || view == "dendrogram") {
        std::vector<CentroidRow> rows = ComputeCentroids(sub, params.Kind());
        std::vector<Vec6> pts = CentroidPoints(rows);
        std::vector<std::string> labels = CentroidLabels(rows);
        if (view == "distance") {
          data = Json{{"labels", labels}, {"matrix", DistanceMatrix(pts)}};
        } else if (pts.size() < 2) {
          BadParam(view + " needs at least two games with centroids");
        } else if (view == "pca") {
          data = ToJson(PcaMap(pts), labels);
        } else {
          data = ToJson(WardDendrogram(pts, labels));
        }
      } else if (view == "motifs") {
        StepLevel level = params.Level();
        int k = params.Int("k", 3, 1, 1000);
        std::vector<MotifCount> counts = MotifCounts(sub, level);
        Json obj = Json::object();
        for (const std::string& g : games) {
          std::vector<MotifCount> top = TopMotifs(counts, g, static_cast<std::size_t>(k));
          obj[g] = ToJson(std::span<const MotifCount>(top));
        }
        data = obj;
      } else if (view == "topk") {
        StepLevel level = params.Level();
        int k = params.Int("k", 5, 1, 1000);
        data = ToJson(TopCounts(sub, level, static_cast<std::size_t>(k)));
      } else {
        NotFound("unknown endpoint");
      }
    } else {
      NotFound("unknown endpoint");
    }
    return {200, StableDump(Envelope(data, params.echo(), corpus_.digest()))};
  } catch (const ApiError& e) {
    Json body{{"status", "error"},
              {"error", {{"code", e.code()}, {"message", e.what()}}},
              {"params", params.echo()},
              {"corpus_digest", corpus_.digest()}};
    return {e.status(), StableDump(body)};
  } catch (const Error& e) {
    int status = e.kind() == ErrorKind::kPrecondition ? 400 : 404;
    Json body{{"status", "error"},
              {"error", {{"code", std::string(ErrorKindName(e.kind()))}, {"message", e.what()}}},
              {"params", params.echo()},
              {"corpus_digest", corpus_.digest()}};
    return {status, StableDump(body)};
  }
}

// --- HTTP ---------------------------------------------------------------

struct HttpServer::Impl {
  Impl(const ApiService& a, ServerOptions o) : api(a), options(std::move(o)) {}
  const ApiService& api;
  ServerOptions options;
  httplib::Server server;
  int bound_port = -1;
};

HttpServer::HttpServer(const ApiService& api, ServerOptions options)
    : impl_(std::make_unique<Impl>(api, std::move(options))) {
  httplib::Server& s = impl_->server;
  s.set_default_headers({{"Access-Control-Allow-Origin", impl_->options.cors_origin},
                         {"Access-Control-Allow-Methods", "GET, OPTIONS"},
                         {"Access-Control-Allow-Headers", "Content-Type"}});
  if (!impl_->options.static_dir.empty()) {
    s.set_mount_point("/app", impl_->options.static_dir);
  }
  s.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  s.Get(".*", [this](const httplib::Request& req, httplib::Response& res) {
    QueryParams query;
    for (const auto& [k, v] : req.params) query[k] = v;  // last value wins
    ApiResponse r = impl_->api.Handle("GET", req.path, query);
    res.status = r.status;
    res.set_content(r.body, "application/json; charset=utf-8");
  });
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind() {
  const std::string& host = impl_->options.host;
  if (impl_->options.port == 0) {
    impl_->bound_port = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, impl_->options.port)) {
    impl_->bound_port = impl_->options.port;
  }
  return impl_->bound_port;
}

bool HttpServer::Run() {
  if (impl_->bound_port < 0) return false;
  return impl_->server.listen_after_bind();
}

void HttpServer::Stop() { impl_->server.stop(); }

}  // namespace maqv
