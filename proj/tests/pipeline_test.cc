// Copyright 2026 The Contingency Authors.
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

#include <fstream>
#include <sstream>

#include <doctest.h>

#include "contingency/pipeline.h"
#include "support/raters.h"
#include "support/temp_dir.h"

namespace contingency::testing {
namespace {

namespace fs = std::filesystem;

const fs::path kData = CONTINGENCY_DATA_DIR;

PipelineConfig MiniConfig(const fs::path &out) {
  PipelineConfig c = LoadConfig(kData / "mini" / "config.json");
  c.paths.out = out;
  return c;
}

TEST_CASE("the shipped default config matches the built-in defaults") {
  PipelineConfig loaded = LoadConfig(kData / "default_config.json");
  PipelineConfig builtin;
  CHECK(ConfigEcho(loaded) == ConfigEcho(builtin));
  CHECK(loaded.live.endpoint.min_interval == builtin.live.endpoint.min_interval);
  CHECK(loaded.live.endpoint.path == builtin.live.endpoint.path);
  CHECK(loaded.top_k == 100);
  CHECK(loaded.min_pcep_hits == 100);
  CHECK(loaded.max_rep_hits == 100);
  CHECK(loaded.bigram_min_joint == 20);
  CHECK(loaded.protag_min_pair_freq == 5);
  CHECK(loaded.drop_raters == 5);
}

TEST_CASE("config parsing") {
  auto doc = nlohmann::json::parse(
      R"({"measure": "pmi", "top_k": 7, "paths": {"corpus": "c.jsonl",
          "cache": "/abs/h.tsv"}})");
  PipelineConfig c = ParseConfig(doc, "/base");
  CHECK(c.measure == Measure::kPmi);
  CHECK(c.top_k == 7);
  CHECK(c.paths.corpus == fs::path("/base/c.jsonl"));
  CHECK(c.paths.cache == fs::path("/abs/h.tsv"));
  CHECK_FALSE(c.EffectiveOrderMatters());
  c.measure = Measure::kBigram;
  CHECK(c.EffectiveOrderMatters());
  c.order_matters = false;
  CHECK_FALSE(c.EffectiveOrderMatters());

  CHECK_THROWS_AS(ParseConfig(nlohmann::json::parse(R"({"topk": 3})"), ""),
                  Error);
  CHECK_THROWS_AS(
      ParseConfig(nlohmann::json::parse(R"({"paths": {"corp": "x"}})"), ""),
      Error);
  CHECK_THROWS_AS(ParseConfig(nlohmann::json::parse(R"({"top_k": -1})"), ""),
                  Error);
  CHECK_THROWS_AS(ParseConfig(nlohmann::json::parse(R"({"top_k": 1.5})"), ""),
                  Error);
  CHECK_THROWS_AS(
      ParseConfig(nlohmann::json::parse(R"({"measure": "cosine"})"), ""),
      Error);
}

TEST_CASE("a full run is reproducible and internally consistent") {
  TempDir a;
  TempDir b;
  PipelineReport ra = RunPipeline(MiniConfig(a.path()));
  PipelineReport rb = RunPipeline(MiniConfig(b.path()));
  CHECK(ra.ToJson() == rb.ToJson());
  CHECK(SnapshotTree(a.path()) == SnapshotTree(b.path()));

  REQUIRE(ra.genres.size() == 2);
  for (const auto &g : ra.genres) {
    INFO(g.genre);
    CHECK(g.documents == 6);
    CHECK(g.kept <= g.ranked);
    CHECK(g.ranked <= g.scored);
    CHECK(g.ranked <= 100);
    CHECK(g.kept > 0);
    CHECK(g.tasks == g.kept);
    CHECK_FALSE(g.accuracy.has_value());
  }

  // Running again into the same directory rewrites identical files.
  auto before = SnapshotTree(a.path());
  RunPipeline(MiniConfig(a.path()));
  CHECK(SnapshotTree(a.path()) == before);
}

TEST_CASE("stage artifacts chain by lineage") {
  TempDir out;
  RunPipeline(MiniConfig(out.path()));
  const fs::path dir = out / "action";
  StatsArtifact stats = ParseStats(ReadFile(dir / kStatsFile), "stats");
  std::ifstream scored_in(dir / kScoredFile);
  ScoredArtifact scored = ReadScored(scored_in, "scored");
  CHECK(scored.header.Get("parent") == stats.header.Get("config"));
  std::ifstream refined_in(dir / kRefinedFile);
  RefinedArtifact refined = ReadRefined(refined_in, "refined");
  CHECK(refined.header.Get("parent") == scored.header.Get("config"));
  CHECK(refined.records.size() == scored.rows.size());
  TaskArtifact tasks = ReadTaskDirectory(dir / kTasksDir);
  CHECK(tasks.header.Get("parent") == refined.header.Get("config"));

  // Stats from another genre cannot serve as this genre's REP pool.
  StatsArtifact romance =
      ParseStats(ReadFile(out / "romance" / kStatsFile), "romance stats");
  HitCountCache cache = HitCountCache::Load(kData / "mini" / "hits.tsv");
  CachedHitCountProvider provider(cache);
  CHECK_THROWS_AS(RefineScored(scored, romance, provider, 1, {}),
                  ArtifactMismatchError);
  CHECK_THROWS_AS(RefineScored(scored, StatsArtifact{}, provider, 1, {}),
                  ArtifactMismatchError);
}

TEST_CASE("a zero top-k scores nothing downstream") {
  TempDir out;
  PipelineConfig c = MiniConfig(out.path());
  c.top_k = 0;
  c.genre = "romance";
  PipelineReport r = RunPipeline(c);
  REQUIRE(r.genres.size() == 1);
  CHECK(r.genres[0].ranked == 0);
  CHECK(r.genres[0].kept == 0);
  CHECK(r.genres[0].tasks == 0);
  CHECK(r.genres[0].scored > 0);
  CHECK_FALSE(fs::exists(out / "romance" / kTasksDir / kTasksFile));
}

TEST_CASE("failures name the stage they happen in") {
  TempDir out;
  PipelineConfig c = MiniConfig(out.path());
  c.paths.cache = out / "absent.tsv";
  try {
    RunPipeline(c);
    FAIL("expected a refine failure");
  } catch (const StageError &e) {
    CHECK(e.stage() == "refine");
  }

  c = MiniConfig(out.path());
  c.genre = "western";
  try {
    RunPipeline(c);
    FAIL("expected an ingest failure");
  } catch (const StageError &e) {
    CHECK(e.stage() == "ingest");
  }

  c = MiniConfig(out.path());
  c.paths.corpus = out / "absent.jsonl";
  try {
    RunPipeline(c);
    FAIL("expected an ingest failure");
  } catch (const StageError &e) {
    CHECK(e.stage() == "ingest");
  }
}

TEST_CASE("configured responses are scored") {
  TempDir out;
  PipelineConfig c = MiniConfig(out.path());
  c.genre = "action";
  RunPipeline(c);
  TaskArtifact tasks = ReadTaskDirectory(out / "action" / kTasksDir);
  RaterPanel panel = MakeRaterPanel(AnswerKeyOf(tasks.batches), 3);
  std::ostringstream tsv;
  tsv << "raterId\ttaskId\tchoice\n";
  for (const auto &r : panel.responses) {
    for (const auto &[task, side] : r.answers) {
      tsv << r.rater_id << '\t' << task << '\t' << SideLetter(side) << '\n';
    }
  }
  WriteFile(out / "responses.tsv", tsv.str());
  c.paths.responses = out / "responses.tsv";
  PipelineReport r = RunPipeline(c);
  REQUIRE(r.genres[0].accuracy.has_value());
  CHECK(*r.genres[0].accuracy > 0.0);
  CHECK(fs::exists(out / "action" / kEvalFile));
  auto eval = nlohmann::json::parse(ReadFile(out / "action" / kEvalFile));
  CHECK(eval.dump().find("noisy") != std::string::npos);
}

}  // namespace
}  // namespace contingency::testing
