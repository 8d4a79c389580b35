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

// One PASS/FAIL line per primary acceptance criterion. Sub-check failures are
// reported on stderr.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.h"
#include "maqv/analytics.h"
#include "maqv/clock.h"
#include "maqv/extract.h"
#include "maqv/ingest.h"
#include "maqv/rng.h"
#include "maqv/service.h"
#include "maqv/stats.h"
#include "oracles.h"

namespace maqv {
namespace {

class Criterion {
 public:
  explicit Criterion(std::string name) : name_(std::move(name)) {}

  void Check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) {
      ++failures_;
      std::cerr << "  [" << name_ << "] failed: " << what << "\n";
    }
  }

  void Near(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s << what << " = " << got << ", expected " << want << " +/- " << tol;
    Check(std::fabs(got - want) <= tol, s.str());
  }

  void Note(const std::string& text) { notes_ += (notes_.empty() ? "" : "; ") + text; }

  bool Report() const {
    std::cout << (failures_ == 0 ? "PASS " : "FAIL ") << name_ << " (" << checks_ - failures_
              << "/" << checks_ << " checks)";
    if (!notes_.empty()) std::cout << ": " << notes_;
    std::cout << std::endl;
    return failures_ == 0;
  }

  template <typename Fn>
  void Guard(Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      Check(false, std::string("exception: ") + e.what());
    }
  }

 private:
  std::string name_;
  std::string notes_;
  int checks_ = 0;
  int failures_ = 0;
};

std::string Fmt(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

bool IrrReproduction() {
  Criterion c("irr-reproduction");
  c.Guard([&] {
    RatingGrid grid = LoadRatingGrid(testing::ReadFixture("irr/rating_grid.json"));
    auto start = std::chrono::steady_clock::now();
    IrrReport r = ComputeIrr(grid, kDefaultResamples, kDefaultSeed);
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.Check(r.pooled.kappa.has_value(), "pooled kappa defined");
    c.Near(r.pooled.kappa.value_or(0), 0.9131, 0.001, "pooled kappa_w");
    const double want[] = {0.7366, 0.9658, 0.8682, 0.9530, 0.8904, 0.8434};
    for (const DimensionIrr& d : r.per_dimension) {
      c.Near(d.kappa.kappa.value_or(0), want[static_cast<int>(d.dimension)], 0.001,
             "kappa_w " + std::string(DimensionLabel(d.dimension)));
    }
    c.Near(r.agreement.exact_rate, 0.7675, 0.0005, "exact agreement");
    c.Near(r.agreement.off_by_one_rate, 0.2281, 0.0005, "off-by-one");
    c.Near(r.agreement.mad, 0.0592, 0.0005, "MAD");
    c.Check(r.items_with_max_delta_2 ==
                std::vector<std::string>{"Stock Market Trade", "Parachute Free-fall"},
            "items with max step delta 2");
    c.Check(secs < 1.0, "runtime " + Fmt(secs, 3) + " s < 1 s");
    c.Note("pooled " + Fmt(*r.pooled.kappa) + ", exact " + Fmt(r.agreement.exact_rate) +
           ", MAD " + Fmt(r.agreement.mad) + ", " + Fmt(secs, 3) + " s");
  });
  return c.Report();
}

bool RankBiserialIdentity() {
  Criterion c("rank-biserial-identity");
  const std::pair<double, double> cases[] = {
      {431.0, 0.074}, {516.0, -0.108}, {536.5, -0.153}, {486.5, -0.045}, {483.0, -0.038}};
  for (auto [u, r] : cases) c.Near(RankBiserial(u, 49, 19), r, 0.001, "r_U at U=" + Fmt(u, 1));
  return c.Report();
}

bool AlignmentOracle() {
  Criterion c("alignment-oracle-equivalence");
  Rng rng(20240501);
  const std::vector<std::string> alphabet = {"A", "B", "C", "D"};
  int agree = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    std::size_t k = 1 + rng.Below(4);
    std::vector<std::string> g(rng.Below(7)), p(rng.Below(7));
    for (auto& x : g) x = alphabet[rng.Below(k)];
    for (auto& x : p) x = alphabet[rng.Below(k)];
    AlignmentReport r = NwAlign(g, p);
    oracle::AlignCounts o = oracle::ExhaustiveAlign(g, p);
    bool ok = r.tp == o.tp && r.fp == o.fp && r.fn == o.fn &&
              r.edit_distance == oracle::Levenshtein(g, p) && r.ned >= 0 && r.ned <= 1;
    agree += ok;
  }
  c.Check(agree == trials, std::to_string(agree) + "/" + std::to_string(trials) + " pairs agree");
  c.Note(std::to_string(agree) + "/" + std::to_string(trials) + " fuzzed pairs agree");
  return c.Report();
}

std::vector<std::vector<int>> MergeMembers(const std::vector<LinkageRow>& rows, int n) {
  std::vector<std::vector<int>> members;
  for (int i = 0; i < n; ++i) members.push_back({i});
  std::vector<std::vector<int>> out;
  for (const LinkageRow& r : rows) {
    std::vector<int> u = members[r.left];
    u.insert(u.end(), members[r.right].begin(), members[r.right].end());
    std::sort(u.begin(), u.end());
    members.push_back(u);
    out.push_back(u);
  }
  return out;
}

bool AnalyticsOracles() {
  Criterion c("analytics-oracles");
  c.Guard([&] {
    int motif_ok = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      Corpus corpus = testing::RandomCorpus(seed, 3, 4, 9);
      bool ok = true;
      for (StepLevel level : {StepLevel::kCategory, StepLevel::kAction}) {
        std::map<std::pair<std::string, std::array<std::string, 3>>, int> got;
        for (const MotifCount& m : MotifCounts(corpus, level)) got[{m.game_id, m.motif}] = m.support;
        ok = ok && got == oracle::WindowCounts(corpus, level == StepLevel::kCategory);
      }
      motif_ok += ok;
    }
    c.Check(motif_ok == 50, "motif counts on " + std::to_string(motif_ok) + "/50 corpora");

    std::uint64_t state = 606;
    int ward_ok = 0;
    for (int t = 0; t < 100; ++t) {
      std::vector<Vec6> pts;
      for (int i = 0; i < 6; ++i) pts.push_back(testing::RandomVec(state));
      auto rows = WardLinkage(pts);
      auto brute = oracle::BruteWard(pts);
      auto members = MergeMembers(rows, 6);
      bool ok = members.size() == brute.size();
      for (std::size_t k = 0; ok && k < brute.size(); ++k) {
        ok = members[k] == brute[k].members && std::fabs(rows[k].height - brute[k].height) < 1e-9;
      }
      ward_ok += ok;
    }
    c.Check(ward_ok == 100, "Ward merge order on " + std::to_string(ward_ok) + "/100 sets");

    double worst = 0;
    for (int t = 0; t < 50; ++t) {
      std::vector<Vec6> pts;
      for (int i = 0; i < 4 + t % 5; ++i) pts.push_back(testing::RandomVec(state));
      PcaResult p = PcaMap(pts);
      oracle::EigenPcaResult o = oracle::EigenPca(pts);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        for (int k = 0; k < 2; ++k) worst = std::max(worst, std::fabs(p.coords[i][k] - o.coords[i][k]));
      }
    }
    c.Check(worst <= 1e-9, "PCA max deviation " + std::to_string(worst));

    // Summaries come from raw steps; sigma may change only the smoothed series.
    Corpus corpus = testing::FixtureCorpus();
    ApiService api(corpus);
    bool invariant = true;
    for (const GameData& g : corpus.games()) {
      for (const MissionRecord& m : g.missions) {
        if (!m.extracted()) continue;
        QualityFlow base = ComputeQualityFlow(*m.sequence, g.library, 0.0);
        std::string summary;
        for (double sigma : {0.0, 2.0, 10.0}) {
          QualityFlow f = ComputeQualityFlow(*m.sequence, g.library, sigma);
          invariant = invariant && f.raw == base.raw;
          QueryParams q = {{"sigma", Fmt(sigma, 1)}};
          Json s = Json::parse(api.Handle("GET", "/missions/" + m.mission_id + "/summary", q).body);
          std::string data = s["data"].dump();
          if (summary.empty()) summary = data;
          invariant = invariant && data == summary;
        }
      }
    }
    std::string compare;
    for (const char* view : {"centroids", "pca", "distance", "dendrogram", "motifs", "topk"}) {
      for (const char* sigma : {"0", "2", "10"}) {
        Json s = Json::parse(api.Handle("GET", std::string("/compare/") + view, {{"sigma", sigma}}).body);
        if (std::string(sigma) == "0") compare = s["data"].dump();
        invariant = invariant && s["data"].dump() == compare;
      }
    }
    c.Check(invariant, "statistics invariant under sigma in {0, 2, 10}");
    c.Note("motifs 50/50, Ward 100/100, PCA max dev " + Fmt(worst * 1e12, 3) + "e-12");
  });
  return c.Report();
}

bool InstrumentScoring() {
  Criterion c("instrument-scoring");
  c.Guard([&] {
    c.Near(SusScore(std::vector<int>(10, 3)), 50.0, 1e-12, "SUS all-3");
    c.Near(SusScore(std::vector<int>{5, 1, 5, 1, 5, 1, 5, 1, 5, 1}), 100.0, 1e-12, "SUS odd-5/even-1");
    UeqsScores u = UeqsScore(std::vector<double>{2, 1, 2, 1, 1, 1, 2, 1});
    c.Near(u.pragmatic, 1.5, 1e-12, "UEQ-S pragmatic");
    c.Near(u.hedonic, 1.25, 1e-12, "UEQ-S hedonic");
    std::vector<double> h = HolmAdjust(std::vector<double>{0.01, 0.04});
    c.Near(h[0], 0.02, 1e-12, "Holm p1");
    c.Near(h[1], 0.04, 1e-12, "Holm p2");
  });
  return c.Report();
}

class Scripted : public CompletionBackend {
 public:
  Scripted(Clock& clock, std::deque<std::string> script) : clock_(clock), script_(std::move(script)) {}
  std::string name() const override { return "scripted"; }
  std::string Complete(const CompletionRequest&) override {
    times.push_back(clock_.Now());
    if (script_.empty()) throw BackendError("unavailable");
    std::string s = script_.front();
    script_.pop_front();
    return s;
  }
  std::vector<double> times;

 private:
  Clock& clock_;
  std::deque<std::string> script_;
};

class FailingTransport : public HttpTransport {
 public:
  explicit FailingTransport(Clock& clock) : clock_(clock) {}
  HttpResponse Get(const std::string&, const std::multimap<std::string, std::string>&,
                   double) override {
    times.push_back(clock_.Now());
    return {503, "", ""};
  }
  std::vector<double> times;

 private:
  Clock& clock_;
};

bool MinGapAtLeast(const std::vector<double>& t, double gap) {
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] - t[i - 1] < gap - 1e-9) return false;
  }
  return true;
}

bool PipelineContract() {
  Criterion c("pipeline-contract");
  c.Guard([&] {
    Json golden = testing::ReadFixture("prompts/fallout4_mama_murphy.json");
    ActionLibrary lib = LoadLibrary(testing::ReadFixture("corpus/fallout4.json"));
    PromptBundle p = BuildPrompt(lib, golden["mission_description"].get<std::string>());
    c.Check(p.system_message == golden["system"].get<std::string>(), "golden system message bytes");
    c.Check(p.user_message == golden["user"].get<std::string>(), "golden user message bytes");

    ManualClock clock;
    Scripted backend(clock, {"{\"a\":1}", "not json", "[3]"});
    MissionRecord m;
    m.mission_id = "fallout4/probe";
    m.walkthrough_text = "Talk to the settlers.";
    ExtractionOutcome out = ExtractSequence(m, lib, backend, {}, clock);
    c.Check(out.status == ExtractionStatus::kFailed && out.attempts == 5 &&
                backend.times.size() == 5,
            "extraction stops after 5 attempts");
    c.Check(MinGapAtLeast(backend.times, 5.0), "extraction inter-call gap >= 5 s");

    ManualClock fetch_clock;
    FailingTransport transport(fetch_clock);
    WikiFetcher fetcher("https://fallout.fandom.com/api.php", {}, transport, fetch_clock);
    std::vector<SlugCandidate> candidates = GenerateSlugCandidates("Mama Murphy");
    FetchOutcome f = fetcher.FetchFirstAvailable(candidates);
    c.Check(f.status == FetchStatus::kFailed && transport.times.size() == 5,
            "fetch stops after 5 attempts");
    c.Check(MinGapAtLeast(transport.times, 5.0), "fetch inter-request gap >= 5 s");

    AdmissionInput in{"", "fallout4", "Probe", QuestType::kMain, std::nullopt};
    c.Check(std::holds_alternative<Rejection>(AdmitMission(testing::Words(34), in)),
            "34-word mission rejected");
    Admission ok = AdmitMission(testing::Words(35), in);
    c.Check(std::holds_alternative<MissionRecord>(ok) &&
                std::get<MissionRecord>(ok).word_count == 35,
            "35-word mission admitted");

    Corpus corpus = testing::FixtureCorpus();
    bool constraints = true;
    const int total = corpus.ValidMissionCount();
    for (int n : {4, 12, 20, total}) {
      StratifiedSample s = SampleStratified(corpus, n, kDefaultSeed);
      StratifiedSample again = SampleStratified(corpus, n, kDefaultSeed);
      std::set<std::string> ids(s.mission_ids.begin(), s.mission_ids.end());
      int quota = 0;
      std::map<std::pair<std::string, QuestType>, int> drawn;
      for (const std::string& id : s.mission_ids) {
        const MissionRecord* rec = corpus.FindMission(id);
        if (!rec) constraints = false;
        else ++drawn[{rec->game_id, rec->quest_type}];
      }
      for (const SampleStratum& st : s.strata) {
        quota += st.quota;
        constraints = constraints && st.quota <= st.available &&
                      drawn[{st.game_id, st.quest_type}] == st.quota &&
                      (n < static_cast<int>(s.strata.size()) || st.quota >= 1);
      }
      constraints = constraints && static_cast<int>(ids.size()) == n && quota == n &&
                    s.mission_ids == again.mission_ids;
    }
    c.Check(constraints, "stratified sample constraints and seed determinism");
    c.Note("prompts byte-equal, 5 attempts at >= 5 s gaps, 34/35-word boundary, sampling ok");
  });
  return c.Report();
}

bool ServiceCoherence() {
  Criterion c("service-coherence");
  c.Guard([&] {
    Corpus corpus = testing::FixtureCorpus();
    ApiService api(corpus);
    std::vector<std::string> ids;
    for (const GameData& g : corpus.games()) ids.push_back(g.game_id);
    int compared = 0, equal = 0;
    for (unsigned mask = 1; mask < (1u << ids.size()); ++mask) {
      std::vector<std::string> subset;
      std::string games;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!(mask & (1u << i))) continue;
        subset.push_back(ids[i]);
        games += (games.empty() ? "" : ",") + ids[i];
      }
      ApiService direct(corpus.Subset(subset));
      for (const char* view : {"radar", "centroids", "pca", "distance", "dendrogram", "motifs", "topk"}) {
        for (const char* kind : {"action", "mission"}) {
          ApiResponse a = api.Handle("GET", std::string("/compare/") + view, {{"games", games}, {"kind", kind}});
          ApiResponse b = direct.Handle("GET", std::string("/compare/") + view, {{"kind", kind}});
          ++compared;
          bool same = a.status == b.status &&
                      (a.status != 200 || Json::parse(a.body)["data"] == Json::parse(b.body)["data"]);
          equal += same;
        }
      }
    }
    c.Check(equal == compared, std::to_string(equal) + "/" + std::to_string(compared) +
                                   " subset responses equal direct recomputation");
    c.Note(std::to_string(equal) + "/" + std::to_string(compared) +
           " subset responses match; no dashboard required");
  });
  return c.Report();
}

}  // namespace
}  // namespace maqv

int main() {
  bool ok = true;
  ok &= maqv::IrrReproduction();
  ok &= maqv::RankBiserialIdentity();
  ok &= maqv::AlignmentOracle();
  ok &= maqv::AnalyticsOracles();
  ok &= maqv::InstrumentScoring();
  ok &= maqv::PipelineContract();
  ok &= maqv::ServiceCoherence();
  return ok ? 0 : 1;
}
