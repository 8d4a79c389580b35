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

#include "cli.h"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "maqv/analytics.h"
#include "maqv/corpus.h"
#include "maqv/error.h"
#include "maqv/extract.h"
#include "maqv/html.h"
#include "maqv/ingest.h"
#include "maqv/service.h"
#include "maqv/stats.h"
#include "maqv/text.h"

namespace maqv::cli {

namespace fs = std::filesystem;

namespace {

// Usage-level failure (bad flags, bad config): exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::vector<fs::path> corpus;
  std::string wiki_endpoint;
  FetchPolicy fetch;
  BackendConfig backend;
  ChatBackendOptions chat;
  std::string api_key_env = "OPENAI_API_KEY";
  std::optional<fs::path> rules;
};

template <typename T>
T ConfigValue(const Json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception&) {
    throw UsageError(std::string("config: bad value for '") + key + "'");
  }
}

void RejectUnknown(const Json& obj, std::string_view where,
                   const std::set<std::string>& known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) {
      throw UsageError("config: unknown key '" + it.key() + "' in " + std::string(where));
    }
  }
}

Config LoadConfig(const std::string& flag_path) {
  Config cfg;
  std::string path = flag_path;
  if (path.empty()) {
    if (const char* env = std::getenv("MAQV_CONFIG")) path = env;
  }
  if (path.empty()) return cfg;
  Json doc;
  try {
    doc = ReadJsonFile(path);
  } catch (const std::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("config: expected an object");
  RejectUnknown(doc, "config", {"corpus", "wiki", "backend", "rules"});
  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
  if (doc.contains("corpus")) {
    const Json& c = doc.at("corpus");
    if (c.is_string()) {
      cfg.corpus.push_back(resolve(c.get<std::string>()));
    } else if (c.is_array()) {
      for (const Json& p : c) {
        if (!p.is_string()) throw UsageError("config: corpus entries must be paths");
        cfg.corpus.push_back(resolve(p.get<std::string>()));
      }
    } else {
      throw UsageError("config: corpus must be a path or a list of paths");
    }
  }
  if (doc.contains("rules")) cfg.rules = resolve(ConfigValue<std::string>(doc, "rules", ""));
  if (doc.contains("wiki")) {
    const Json& w = doc.at("wiki");
    if (!w.is_object()) throw UsageError("config: wiki must be an object");
    RejectUnknown(w, "wiki", {"endpoint", "rate_limit_seconds", "max_retries", "timeout_seconds", "license"});
    cfg.wiki_endpoint = ConfigValue<std::string>(w, "endpoint", "");
    cfg.fetch.rate_limit_seconds = ConfigValue(w, "rate_limit_seconds", cfg.fetch.rate_limit_seconds);
    cfg.fetch.max_retries = ConfigValue(w, "max_retries", cfg.fetch.max_retries);
    cfg.fetch.timeout_seconds = ConfigValue(w, "timeout_seconds", cfg.fetch.timeout_seconds);
    cfg.fetch.license = ConfigValue(w, "license", cfg.fetch.license);
    if (cfg.fetch.max_retries < 1 || cfg.fetch.rate_limit_seconds < 0 ||
        cfg.fetch.timeout_seconds <= 0) {
      throw UsageError("config: invalid wiki policy");
    }
  }
  if (doc.contains("backend")) {
    const Json& b = doc.at("backend");
    if (!b.is_object()) throw UsageError("config: backend must be an object");
    RejectUnknown(b, "backend", {"model_id", "temperature", "top_p", "timeout_seconds", "max_retries",
                                 "rate_limit_seconds", "base_url", "path", "api_key_env"});
    BackendConfig& bc = cfg.backend;
    bc.model_id = ConfigValue(b, "model_id", bc.model_id);
    bc.temperature = ConfigValue(b, "temperature", bc.temperature);
    bc.top_p = ConfigValue(b, "top_p", bc.top_p);
    bc.timeout_seconds = ConfigValue(b, "timeout_seconds", bc.timeout_seconds);
    bc.max_retries = ConfigValue(b, "max_retries", bc.max_retries);
    bc.rate_limit_seconds = ConfigValue(b, "rate_limit_seconds", bc.rate_limit_seconds);
    cfg.chat.base_url = ConfigValue(b, "base_url", cfg.chat.base_url);
    cfg.chat.path = ConfigValue(b, "path", cfg.chat.path);
    cfg.api_key_env = ConfigValue(b, "api_key_env", cfg.api_key_env);
    try {
      bc.Validate();
    } catch (const Error& e) {
      throw UsageError(std::string("config: ") + e.what());
    }
  }
  return cfg;
}

std::vector<fs::path> CorpusPaths(const std::vector<std::string>& flags, const Config& cfg) {
  std::vector<fs::path> paths(flags.begin(), flags.end());
  if (paths.empty()) paths = cfg.corpus;
  if (paths.empty()) throw UsageError("no corpus given (use --corpus or the config file)");
  return paths;
}

Corpus LoadCorpusOrThrow(const std::vector<std::string>& flags, const Config& cfg) {
  return LoadCorpusFromPaths(CorpusPaths(flags, cfg));
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
}

std::string PrettyJson(const Json& j) { return RoundFloats(j).dump(2) + "\n"; }

// Emits `doc` as JSON or `csv` (when the command has a table form).
void Emit(std::ostream& out, const std::string& format, const Json& doc,
          const std::optional<std::string>& csv) {
  if (format == "csv") {
    if (!csv) throw UsageError("this output has no CSV form; use --format json");
    out << *csv;
  } else {
    out << PrettyJson(doc);
  }
}

const GameData& RequireGame(const Corpus& corpus, const std::string& id) {
  const GameData* g = corpus.FindGame(id);
  if (!g) throw Error(ErrorKind::kUnknownGame, "unknown game '" + id + "'");
  return *g;
}

// --- ingest ---------------------------------------------------------------

struct IngestArgs {
  std::string endpoint;
  std::string titles;
  std::string library;
  std::string out;
  std::string snapshots;
};

int RunIngest(const IngestArgs& args, const Config& cfg, const std::string& format,
              std::ostream& out) {
  std::string endpoint = args.endpoint.empty() ? cfg.wiki_endpoint : args.endpoint;
  if (endpoint.empty()) throw UsageError("ingest: no wiki endpoint (use --endpoint)");
  WalkthroughRules rules;
  if (cfg.rules) rules = WalkthroughRules::FromJson(ReadJsonFile(*cfg.rules));

  Json titles = ReadJsonFile(args.titles);
  if (!titles.is_array()) throw UsageError("ingest: --titles must hold a JSON array");
  Json lib_doc = ReadJsonFile(args.library);
  ActionLibrary library = LoadLibrary(lib_doc);

  auto transport = MakeHttpTransport();
  SystemClock clock;
  WikiFetcher fetcher(endpoint, cfg.fetch, *transport, clock);
  std::optional<SnapshotStore> store;
  if (!args.snapshots.empty()) store.emplace(args.snapshots);

  Json missions = Json::array();
  Json rejected = Json::array();
  for (const Json& t : titles) {
    std::string title = t.value("title", "");
    auto type = ParseQuestType(t.value("quest_type", "Main"));
    if (title.empty() || !type) throw UsageError("ingest: each title needs title and quest_type");
    auto candidates = GenerateSlugCandidates(title);
    FetchOutcome fetched = fetcher.FetchFirstAvailable(candidates);
    if (fetched.status != FetchStatus::kOk) {
      rejected.push_back({{"title", title},
                          {"reason", fetched.status == FetchStatus::kMissing ? "missing" : "fetch-failed"},
                          {"detail", fetched.error}});
      continue;
    }
    const FetchResult& page = *fetched.result;
    if (store) store->Save(page);
    auto parsed = ParseWalkthrough(page.raw_html, rules);
    AdmissionInput input{MakeMissionId(library.game_id(), title), library.game_id(), title, *type,
                         page.snapshot};
    Admission admitted = AdmitMission(parsed ? parsed->text : std::string(), input);
    if (const auto* rej = std::get_if<Rejection>(&admitted)) {
      rejected.push_back({{"title", title},
                          {"reason", RejectionReasonName(rej->reason)},
                          {"word_count", rej->word_count}});
      continue;
    }
    missions.push_back(ToJson(std::get<MissionRecord>(admitted)));
  }
  Json game = lib_doc;
  game["missions"] = missions;
  if (!game.contains("game_id")) game["game_id"] = library.game_id();
  LoadCorpus(game);  // full validation before writing
  WriteText(args.out, game.dump(2) + "\n");
  Json report{{"game_id", library.game_id()},
              {"requested", titles.size()},
              {"admitted", missions.size()},
              {"rejected", rejected},
              {"output", args.out}};
  Emit(out, format, report, std::nullopt);
  return kExitOk;
}

// --- extract --------------------------------------------------------------

struct ExtractArgs {
  std::vector<std::string> corpus;
  std::string game;
  std::string backend = "stub";
  bool resume = false;
  std::string out;
  std::string log;
};

int RunExtract(const ExtractArgs& args, const Config& cfg, const std::string& format,
               std::ostream& out) {
  Corpus corpus = LoadCorpusOrThrow(args.corpus, cfg);
  const GameData& source = RequireGame(corpus, args.game);
  if (args.backend != "stub" && args.backend != "chat") {
    throw UsageError("extract: backend must be stub or chat");
  }

  // Resume: missions already sequenced in the output document are kept.
  std::map<std::string, ActionSequence> done;
  if (args.resume && !args.out.empty() && fs::exists(args.out)) {
    Corpus previous = LoadCorpus(ReadJsonFile(args.out));
    if (const GameData* g = previous.FindGame(args.game)) {
      for (const MissionRecord& m : g->missions) {
        if (m.extracted()) done[m.mission_id] = *m.sequence;
      }
    }
  }

  std::unique_ptr<CompletionBackend> backend;
  if (args.backend == "stub") {
    backend = std::make_unique<StubBackend>(source.library);
  } else {
    ChatBackendOptions opts = cfg.chat;
    if (const char* key = std::getenv(cfg.api_key_env.c_str())) opts.api_key = key;
    backend = MakeChatBackend(opts);
  }
  SystemClock clock;
  RateLimiter limiter(clock, args.backend == "stub" ? 0.0 : cfg.backend.rate_limit_seconds);
  RateLimitedBackend limited(*backend, limiter);

  std::ofstream log;
  if (!args.log.empty()) {
    log.open(args.log, std::ios::app);
    if (!log) throw Error(ErrorKind::kIo, "cannot open log " + args.log);
  }
  AttemptSink sink = [&](const AttemptRecord& r) {
    if (!log) return;
    log << Json{{"mission_id", r.mission_id}, {"attempt", r.attempt}, {"status", r.status},
                {"reason", r.reason}}.dump()
        << '\n';
    log.flush();
  };

  GameData game = source;
  Json results = Json::array();
  int ok = 0, failed = 0, skipped = 0, empty = 0;
  for (MissionRecord& m : game.missions) {
    if (!m.valid) continue;
    if (auto it = done.find(m.mission_id); it != done.end()) {
      m.sequence = it->second;
      ++skipped;
      continue;
    }
    ExtractionOutcome outcome = ExtractSequence(m, game.library, limited, cfg.backend, clock, sink);
    Json row{{"mission_id", m.mission_id}, {"attempts", outcome.attempts}};
    if (outcome.status == ExtractionStatus::kOk) {
      if (outcome.sequence.empty()) {
        m.sequence.reset();
        row["status"] = "unextracted";
        ++empty;
      } else {
        m.sequence = outcome.sequence;
        row["status"] = "ok";
        row["steps"] = outcome.sequence.size();
        ++ok;
      }
    } else {
      m.sequence.reset();
      row["status"] = "failed";
      row["reason"] = FailureReasonName(outcome.failure_reason);
      ++failed;
    }
    results.push_back(std::move(row));
  }
  if (!args.out.empty()) WriteText(args.out, ToJson(game).dump(2) + "\n");
  Json report{{"game_id", game.game_id}, {"backend", backend->name()},
              {"ok", ok},             {"failed", failed},
              {"unextracted", empty}, {"resumed", skipped},
              {"missions", results}};
  Emit(out, format, report, std::nullopt);
  return failed > 0 ? kExitRuntime : kExitOk;
}

// --- validate -------------------------------------------------------------

struct ValidateArgs {
  std::string gold;
  std::string pred;
  std::vector<std::string> corpus;
  int resamples = kDefaultResamples;
  std::uint64_t seed = kDefaultSeed;
};

int RunValidate(const ValidateArgs& args, const Config& cfg, const std::string& format,
                std::ostream& out) {
  SequenceSet gold = LoadSequenceSet(ReadJsonFile(args.gold));
  SequenceSet pred = LoadSequenceSet(ReadJsonFile(args.pred));
  std::optional<Corpus> corpus;
  if (!args.corpus.empty() || !cfg.corpus.empty()) {
    corpus = LoadCorpusOrThrow(args.corpus, cfg);
    ValidateSequenceSet(gold, *corpus);
  }
  std::vector<MissionAlignment> aligned = AlignSets(gold, pred, corpus ? &*corpus : nullptr);
  std::vector<AlignmentReport> reports;
  std::map<std::string, std::vector<double>> f1_by_game;
  Json per_mission = Json::array();
  for (const MissionAlignment& a : aligned) {
    reports.push_back(a.report);
    f1_by_game[a.game_id].push_back(MissionF1(a.report));
    Json row = ToJson(a.report);
    row["mission_id"] = a.mission_id;
    row["game_id"] = a.game_id;
    per_mission.push_back(std::move(row));
  }
  MetricsReport metrics = SequenceMetrics(reports, args.resamples, args.seed);
  Json doc = ToJson(metrics);
  doc["per_mission"] = per_mission;
  doc["resamples"] = args.resamples;
  doc["seed"] = args.seed;
  if (f1_by_game.size() >= 2 && reports.size() >= 3) {
    std::vector<std::vector<double>> groups;
    Json names = Json::array();
    for (const auto& [g, v] : f1_by_game) {
      groups.push_back(v);
      names.push_back(g);
    }
    KruskalWallisResult kw = KruskalWallis(groups);
    doc["kruskal_wallis"] = {{"groups", names}, {"h", kw.h}, {"p", kw.p}, {"df", kw.df}};
  }
  Emit(out, format, doc, MetricsCsv(metrics));
  return kExitOk;
}

// --- irr ------------------------------------------------------------------

int RunIrr(const std::string& grid_path, int resamples, std::uint64_t seed,
           const std::string& format, std::ostream& out) {
  RatingGrid grid = LoadRatingGrid(ReadJsonFile(grid_path));
  IrrReport report = ComputeIrr(grid, resamples, seed);
  Emit(out, format, ToJson(report, grid), IrrCsv(report));
  return kExitOk;
}

// --- analyze --------------------------------------------------------------

struct AnalyzeArgs {
  std::string view;
  std::vector<std::string> corpus;
  std::string mission;
  std::string kind = "action";
  std::string level = "category";
  std::size_t k = 0;
  double sigma = kDefaultSigma;
  std::string games;
  std::string out_dir;
};

std::string FlowCsv(const QualityFlow& flow) {
  std::ostringstream s;
  s << "step,u,c,n,e,p,a,su,sc,sn,se,sp,sa\n";
  for (std::size_t i = 0; i < flow.raw[0].size(); ++i) {
    s << i;
    for (const auto& series : flow.raw) s << ',' << FormatSignificant(series[i]);
    for (const auto& series : flow.smoothed_steps) s << ',' << FormatSignificant(series[i]);
    s << '\n';
  }
  return s.str();
}

std::string DistanceCsv(const std::vector<std::string>& labels,
                        const std::vector<std::vector<double>>& m) {
  std::ostringstream s;
  s << "game_id";
  for (const std::string& l : labels) s << ',' << l;
  s << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) {
    s << labels[i];
    for (double d : m[i]) s << ',' << FormatSignificant(d);
    s << '\n';
  }
  return s.str();
}

struct ViewOutput {
  Json doc;
  std::optional<std::string> csv;
};

ViewOutput ComputeView(const std::string& view, const Corpus& corpus, const AnalyzeArgs& args) {
  auto kind = ParseCentroidKind(args.kind);
  if (!kind) throw UsageError("--kind must be action or mission");
  auto level = ParseStepLevel(args.level);
  if (!level) throw UsageError("--level must be category or action");
  if (args.sigma < 0) throw UsageError("--sigma must be >= 0");

  if (view == "flow" || view == "timeline" || view == "storyboard" || view == "summary") {
    if (args.mission.empty()) throw UsageError(view + " needs --mission");
    const MissionRecord* m = corpus.FindMission(args.mission);
    if (!m) throw Error(ErrorKind::kNotFound, "unknown mission '" + args.mission + "'");
    if (!m->extracted()) throw Error(ErrorKind::kPrecondition, "mission has no sequence");
    const ActionLibrary& lib = *corpus.LibraryFor(m->game_id);
    if (view == "flow") {
      QualityFlow flow = ComputeQualityFlow(*m->sequence, lib, args.sigma, m->mission_id);
      return {ToJson(flow), FlowCsv(flow)};
    }
    if (view == "timeline") {
      auto t = ComputeTimeline(*m->sequence, lib);
      return {ToJson(std::span<const TimelineSegment>(t)), std::nullopt};
    }
    if (view == "storyboard") {
      auto b = ComputeStoryboard(*m->sequence, lib);
      return {ToJson(std::span<const StoryboardBox>(b)), std::nullopt};
    }
    return {ToJson(ComputeMissionSummary(*m->sequence, lib)), std::nullopt};
  }

  std::vector<CentroidRow> rows = ComputeCentroids(corpus, *kind);
  std::vector<Vec6> pts;
  std::vector<std::string> labels;
  for (const CentroidRow& r : rows) {
    pts.push_back(r.centroid);
    labels.push_back(r.game_id);
  }
  if (view == "centroids") {
    return {ToJson(std::span<const CentroidRow>(rows)), CentroidsCsv(rows)};
  }
  if (view == "radar") {
    Json arr = Json::array();
    for (const CentroidRow& r : rows) {
      RadarVector rv = NormalizeRadar(r.centroid);
      arr.push_back({{"game_id", r.game_id}, {"raw", VecToJson(r.centroid)},
                     {"normalized", VecToJson(rv.values)}, {"degenerate", rv.degenerate}});
    }
    return {arr, std::nullopt};
  }
  if (view == "pca") return {ToJson(PcaMap(pts), labels), std::nullopt};
  if (view == "distance") {
    auto m = DistanceMatrix(pts);
    return {Json{{"labels", labels}, {"matrix", m}}, DistanceCsv(labels, m)};
  }
  if (view == "dendrogram") return {ToJson(WardDendrogram(pts, labels)), std::nullopt};
  if (view == "motifs") {
    std::size_t k = args.k ? args.k : 3;
    std::vector<MotifCount> counts = MotifCounts(corpus, *level);
    std::vector<MotifCount> top;
    for (const GameData& g : corpus.games()) {
      auto t = TopMotifs(counts, g.game_id, k);
      top.insert(top.end(), t.begin(), t.end());
    }
    return {ToJson(std::span<const MotifCount>(top)), MotifsCsv(top)};
  }
  if (view == "topk") {
    auto counts = TopCounts(corpus, *level, args.k ? args.k : 5);
    return {ToJson(counts), TopCountsCsv(counts)};
  }
  throw UsageError("unknown analyze view '" + view + "'");
}

int RunAnalyze(const AnalyzeArgs& args, const Config& cfg, const std::string& format,
               std::ostream& out) {
  Corpus corpus = LoadCorpusOrThrow(args.corpus, cfg);
  if (!args.games.empty()) {
    std::vector<std::string> ids;
    for (const std::string& g : Split(args.games, ',')) {
      std::string id(Trim(g));
      RequireGame(corpus, id);
      ids.push_back(id);
    }
    corpus = corpus.Subset(ids);
  }
  if (args.view == "all") {
    if (args.out_dir.empty()) throw UsageError("analyze all needs --out-dir");
    Json written = Json::array();
    for (const char* v : {"centroids", "radar", "pca", "distance", "dendrogram", "motifs", "topk"}) {
      if ((std::string(v) == "pca" || std::string(v) == "dendrogram") && corpus.games().size() < 2) {
        continue;
      }
      ViewOutput o = ComputeView(v, corpus, args);
      fs::path p = fs::path(args.out_dir) / (std::string(v) + ".json");
      WriteText(p, PrettyJson(o.doc));
      written.push_back(p.string());
      if (o.csv) {
        fs::path c = fs::path(args.out_dir) / (std::string(v) + ".csv");
        WriteText(c, *o.csv);
        written.push_back(c.string());
      }
    }
    for (const GameData& g : corpus.games()) {
      for (const MissionRecord& m : g.missions) {
        if (!m.extracted()) continue;
        QualityFlow flow = ComputeQualityFlow(*m.sequence, g.library, args.sigma, m.mission_id);
        std::string stem = m.mission_id;
        std::replace(stem.begin(), stem.end(), '/', '_');
        fs::path p = fs::path(args.out_dir) / "flows" / (stem + ".json");
        WriteText(p, PrettyJson(ToJson(flow)));
        written.push_back(p.string());
      }
    }
    Emit(out, format == "csv" ? "json" : format, Json{{"written", written}}, std::nullopt);
    return kExitOk;
  }
  ViewOutput o = ComputeView(args.view, corpus, args);
  if (!args.out_dir.empty()) {
    bool csv = format == "csv";
    if (csv && !o.csv) throw UsageError("this output has no CSV form; use --format json");
    fs::path p = fs::path(args.out_dir) / (args.view + (csv ? ".csv" : ".json"));
    WriteText(p, csv ? *o.csv : PrettyJson(o.doc));
    out << p.string() << '\n';
    return kExitOk;
  }
  Emit(out, format, o.doc, o.csv);
  return kExitOk;
}

// --- sample ---------------------------------------------------------------

int RunSample(const std::vector<std::string>& corpus_flags, int n, std::uint64_t seed,
              const Config& cfg, const std::string& format, std::ostream& out) {
  Corpus corpus = LoadCorpusOrThrow(corpus_flags, cfg);
  StratifiedSample s = SampleStratified(corpus, n, seed);
  Json strata = Json::array();
  for (const SampleStratum& st : s.strata) {
    strata.push_back({{"game_id", st.game_id}, {"quest_type", QuestTypeName(st.quest_type)},
                      {"available", st.available}, {"quota", st.quota}});
  }
  std::map<std::string, int> by_type;
  std::ostringstream csv;
  csv << "mission_id,game_id,quest_type\n";
  for (const std::string& id : s.mission_ids) {
    const MissionRecord* m = corpus.FindMission(id);
    ++by_type[std::string(QuestTypeName(m->quest_type))];
    csv << id << ',' << m->game_id << ',' << QuestTypeName(m->quest_type) << '\n';
  }
  Json doc{{"n", n}, {"seed", seed}, {"rng", s.rng_name}, {"strata", strata},
           {"counts_by_type", by_type}, {"mission_ids", s.mission_ids}};
  Emit(out, format, doc, csv.str());
  return kExitOk;
}

// --- serve ----------------------------------------------------------------

int RunServe(const std::vector<std::string>& corpus_flags, const ServerOptions& options,
             const Config& cfg, std::ostream& out) {
  ApiService api(LoadCorpusOrThrow(corpus_flags, cfg));
  HttpServer server(api, options);
  int port = server.Bind();
  if (port < 0) throw Error(ErrorKind::kNetwork, "cannot bind " + options.host);
  out << "serving on http://" << options.host << ':' << port << " (corpus "
      << api.corpus().digest().substr(0, 12) << ")" << std::endl;
  return server.Run() ? kExitOk : kExitRuntime;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mission action-quality toolkit", "maqv"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::string format = "json";
  app.add_option("--config", config_path, "config file (default: $MAQV_CONFIG)");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "fetch and admit mission pages");
  ingest_cmd->add_option("--endpoint", ingest.endpoint, "MediaWiki api.php URL");
  ingest_cmd->add_option("--titles", ingest.titles, "JSON array of {title, quest_type}")->required();
  ingest_cmd->add_option("--library", ingest.library, "game document holding the action library")->required();
  ingest_cmd->add_option("--out", ingest.out, "output game document")->required();
  ingest_cmd->add_option("--snapshots", ingest.snapshots, "snapshot store directory");

  ExtractArgs extract;
  auto* extract_cmd = app.add_subcommand("extract", "extract action sequences");
  extract_cmd->add_option("--corpus", extract.corpus, "corpus files or directories");
  extract_cmd->add_option("--game", extract.game, "game id")->required();
  extract_cmd->add_option("--backend", extract.backend, "stub | chat");
  extract_cmd->add_flag("--resume", extract.resume, "keep sequences already in --out");
  extract_cmd->add_option("--out", extract.out, "output game document");
  extract_cmd->add_option("--log", extract.log, "JSONL attempt log");

  ValidateArgs validate;
  auto* validate_cmd = app.add_subcommand("validate", "gold-set alignment metrics");
  validate_cmd->add_option("--gold", validate.gold)->required();
  validate_cmd->add_option("--pred", validate.pred)->required();
  validate_cmd->add_option("--corpus", validate.corpus);
  validate_cmd->add_option("--resamples", validate.resamples)->check(CLI::NonNegativeNumber);
  validate_cmd->add_option("--seed", validate.seed);

  std::string grid_path;
  int irr_resamples = kDefaultResamples;
  std::uint64_t irr_seed = kDefaultSeed;
  auto* irr_cmd = app.add_subcommand("irr", "inter-rater reliability of a rating grid");
  irr_cmd->add_option("--grid", grid_path)->required();
  irr_cmd->add_option("--resamples", irr_resamples)->check(CLI::NonNegativeNumber);
  irr_cmd->add_option("--seed", irr_seed);

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "chart-data documents");
  analyze_cmd->add_option("view", analyze.view,
                          "flow|timeline|storyboard|summary|centroids|radar|pca|distance|"
                          "dendrogram|motifs|topk|all")
      ->required();
  analyze_cmd->add_option("--corpus", analyze.corpus);
  analyze_cmd->add_option("--mission", analyze.mission);
  analyze_cmd->add_option("--kind", analyze.kind);
  analyze_cmd->add_option("--level", analyze.level);
  analyze_cmd->add_option("--k", analyze.k)->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--sigma", analyze.sigma);
  analyze_cmd->add_option("--games", analyze.games, "comma-separated subset");
  analyze_cmd->add_option("--out-dir", analyze.out_dir);

  std::vector<std::string> sample_corpus;
  int sample_n = 80;
  std::uint64_t sample_seed = kDefaultSeed;
  auto* sample_cmd = app.add_subcommand("sample", "stratified validation sample");
  sample_cmd->add_option("--corpus", sample_corpus);
  sample_cmd->add_option("--n", sample_n)->check(CLI::NonNegativeNumber);
  sample_cmd->add_option("--seed", sample_seed);

  std::vector<std::string> serve_corpus;
  ServerOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "read-only HTTP API");
  serve_cmd->add_option("--corpus", serve_corpus);
  serve_cmd->add_option("--host", serve.host);
  serve_cmd->add_option("--port", serve.port);
  serve_cmd->add_option("--cors-origin", serve.cors_origin);
  serve_cmd->add_option("--static", serve.static_dir, "dashboard bundle directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "maqv: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    Config cfg = LoadConfig(config_path);
    if (*ingest_cmd) return RunIngest(ingest, cfg, format, out);
    if (*extract_cmd) return RunExtract(extract, cfg, format, out);
    if (*validate_cmd) return RunValidate(validate, cfg, format, out);
    if (*irr_cmd) return RunIrr(grid_path, irr_resamples, irr_seed, format, out);
    if (*analyze_cmd) return RunAnalyze(analyze, cfg, format, out);
    if (*sample_cmd) return RunSample(sample_corpus, sample_n, sample_seed, cfg, format, out);
    if (*serve_cmd) return RunServe(serve_corpus, serve, cfg, out);
  } catch (const UsageError& e) {
    err << "maqv: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "maqv: " << ErrorKindName(e.kind()) << ": " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "maqv: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace maqv::cli
