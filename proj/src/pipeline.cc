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

#include "contingency/pipeline.h"

#include <algorithm>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "contingency/error.h"

namespace contingency {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using Settings = std::vector<std::pair<std::string, std::string>>;

std::string Bool(bool b) { return b ? "true" : "false"; }

int64_t GetCount(const json &doc, const char *key, int64_t fallback) {
  if (!doc.contains(key)) return fallback;
  const json &v = doc.at(key);
  if (!v.is_number_integer()) {
    throw Error(fmt::format("config: '{}' must be an integer", key));
  }
  return v.get<int64_t>();
}

std::filesystem::path ResolvePath(const json &paths, const char *key,
                                  const std::filesystem::path &base) {
  if (!paths.contains(key)) return {};
  const json &v = paths.at(key);
  if (!v.is_string()) {
    throw Error(fmt::format("config: 'paths.{}' must be a string", key));
  }
  std::filesystem::path p = v.get<std::string>();
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

void CheckKeys(const json &obj, std::initializer_list<const char *> allowed,
               const std::string &where) {
  if (!obj.is_object()) throw Error("config: " + where + " must be an object");
  for (const auto &[key, value] : obj.items()) {
    bool known = false;
    for (const char *a : allowed) known = known || key == a;
    if (!known) throw Error("config: unknown setting '" + where + key + "'");
  }
}

std::vector<std::string> PoolOf(const StatsArtifact &stats) {
  std::vector<std::string> pool;
  pool.reserve(stats.types.size());
  for (const auto &[verb, type] : stats.types) pool.push_back(verb);
  return pool;
}

std::string PathName(const std::filesystem::path &p) {
  return p.filename().string();
}

template <typename Fn>
auto Stage(const char *name, Fn &&fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError &) {
    throw;
  } catch (const std::exception &e) {
    throw StageError(name, e.what());
  }
}

void RemoveStaleArtifacts(const std::filesystem::path &dir) {
  namespace fs = std::filesystem;
  for (auto name : {kStatsFile, kProtagStatsFile, kScoredFile, kRefinedFile,
                    kKeptFile, kEvalFile}) {
    fs::remove(dir / name);
  }
  fs::remove(dir / kTasksDir / kTasksFile);
  fs::remove(dir / kTasksDir / kAnswerKeyFile);
}

}  // namespace

bool PipelineConfig::EffectiveOrderMatters() const {
  return order_matters.value_or(measure != Measure::kPmi);
}

void PipelineConfig::Validate() const {
  const std::pair<const char *, int64_t> counts[] = {
      {"top_k", top_k},
      {"min_pcep_hits", min_pcep_hits},
      {"max_rep_hits", max_rep_hits},
      {"bigram_min_joint", bigram_min_joint},
      {"protag_min_pair_freq", protag_min_pair_freq},
      {"drop_raters", drop_raters},
  };
  for (const auto &[name, value] : counts) {
    if (value < 0) {
      throw Error(fmt::format("config: '{}' must be >= 0, got {}", name, value));
    }
  }
}

PipelineConfig ParseConfig(const json &doc,
                           const std::filesystem::path &base_dir) {
  CheckKeys(doc,
            {"genre", "measure", "top_k", "min_pcep_hits", "max_rep_hits",
             "bigram_min_joint", "protag_min_pair_freq", "seed",
             "show_arguments", "order_matters", "drop_raters", "paths", "live"},
            "");
  PipelineConfig c;
  if (doc.contains("genre")) c.genre = doc.at("genre").get<std::string>();
  if (doc.contains("measure")) {
    c.measure = ParseMeasure(doc.at("measure").get<std::string>());
  }
  c.top_k = GetCount(doc, "top_k", c.top_k);
  c.min_pcep_hits = GetCount(doc, "min_pcep_hits", c.min_pcep_hits);
  c.max_rep_hits = GetCount(doc, "max_rep_hits", c.max_rep_hits);
  c.bigram_min_joint = GetCount(doc, "bigram_min_joint", c.bigram_min_joint);
  c.protag_min_pair_freq =
      GetCount(doc, "protag_min_pair_freq", c.protag_min_pair_freq);
  c.drop_raters = GetCount(doc, "drop_raters", c.drop_raters);
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) {
      throw Error("config: 'seed' must be a non-negative integer");
    }
    c.seed = doc.at("seed").get<uint64_t>();
  }
  if (doc.contains("show_arguments")) {
    c.show_arguments = doc.at("show_arguments").get<bool>();
  }
  if (doc.contains("order_matters") && !doc.at("order_matters").is_null()) {
    c.order_matters = doc.at("order_matters").get<bool>();
  }
  if (doc.contains("paths")) {
    const json &p = doc.at("paths");
    CheckKeys(p, {"corpus", "cache", "out", "responses"}, "paths.");
    c.paths.corpus = ResolvePath(p, "corpus", base_dir);
    c.paths.cache = ResolvePath(p, "cache", base_dir);
    c.paths.out = ResolvePath(p, "out", base_dir);
    c.paths.responses = ResolvePath(p, "responses", base_dir);
  }
  if (doc.contains("live")) {
    const json &l = doc.at("live");
    CheckKeys(l, {"enabled", "host", "port", "path", "min_interval_ms"},
              "live.");
    if (l.contains("enabled")) c.live.enabled = l.at("enabled").get<bool>();
    if (l.contains("host")) c.live.endpoint.host = l.at("host").get<std::string>();
    if (l.contains("port")) c.live.endpoint.port = l.at("port").get<int>();
    if (l.contains("path")) c.live.endpoint.path = l.at("path").get<std::string>();
    if (l.contains("min_interval_ms")) {
      c.live.endpoint.min_interval =
          std::chrono::milliseconds(l.at("min_interval_ms").get<int64_t>());
    }
  }
  c.Validate();
  return c;
}

PipelineConfig LoadConfig(const std::filesystem::path &path) {
  json doc;
  try {
    doc = json::parse(ReadFile(path));
  } catch (const json::exception &e) {
    throw Error(fmt::format("config {}: {}", path.string(), e.what()));
  }
  try {
    return ParseConfig(doc, path.parent_path());
  } catch (const json::exception &e) {
    throw Error(fmt::format("config {}: {}", path.string(), e.what()));
  }
}

ordered_json ConfigEcho(const PipelineConfig &c) {
  ordered_json out;
  out["genre"] = c.genre;
  out["measure"] = MeasureName(c.measure);
  out["top_k"] = c.top_k;
  out["min_pcep_hits"] = c.min_pcep_hits;
  out["max_rep_hits"] = c.max_rep_hits;
  out["bigram_min_joint"] = c.bigram_min_joint;
  out["protag_min_pair_freq"] = c.protag_min_pair_freq;
  out["seed"] = c.seed;
  out["show_arguments"] = c.show_arguments;
  out["order_matters"] = c.EffectiveOrderMatters();
  out["drop_raters"] = c.drop_raters;
  out["live"] = c.live.enabled;
  out["corpus"] = PathName(c.paths.corpus);
  out["cache"] = PathName(c.paths.cache);
  out["responses"] = PathName(c.paths.responses);
  return out;
}

std::string LineageHash(
    std::string_view stage, std::string_view parent,
    std::span<const std::pair<std::string, std::string>> settings) {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0x1f;  // field separator
    h *= 0x100000001b3ULL;
  };
  mix(stage);
  mix(parent);
  for (const auto &[k, v] : settings) {
    mix(k);
    mix(v);
  }
  return fmt::format("{:016x}", h);
}

StatsArtifact BuildStats(const GenreEvents &events, PairingMode mode,
                         int64_t min_pair_freq) {
  StatsArtifact s;
  s.mode = mode;
  s.documents = events.document_count;
  s.total_events = events.total_events;
  s.types = events.types;
  Settings settings{{"genre", events.genre},
                    {"mode", std::string(PairingModeName(mode))}};
  if (mode == PairingMode::kProtagonist) {
    s.min_pair_freq = min_pair_freq;
    s.pairs = CollectProtagonistPairs(events.genre, events.per_document,
                                      min_pair_freq);
    settings.emplace_back("min_pair_freq", std::to_string(min_pair_freq));
  } else {
    s.pairs = CollectAdjacentPairs(events.genre, events.per_document);
  }
  s.header.Set("stage", "extract");
  s.header.Set("genre", events.genre);
  s.header.Set("mode", std::string(PairingModeName(mode)));
  s.header.Set("config", LineageHash("extract", "", settings));
  return s;
}

ScoredArtifact ScoreStats(const StatsArtifact &stats, Measure measure,
                          int64_t top_k, int64_t bigram_min_joint) {
  RequireStage(stats.header, "extract", "pair statistics");
  const PairingMode needed = measure == Measure::kProtagCp
                                 ? PairingMode::kProtagonist
                                 : PairingMode::kAdjacent;
  if (stats.mode != needed) {
    throw ArtifactMismatchError(fmt::format(
        "measure {} needs {} statistics, got {}", MeasureName(measure),
        PairingModeName(needed), PairingModeName(stats.mode)));
  }
  CorpusCounts counts = CorpusCounts::FromEventTypes(stats.types, stats.pairs);
  ScoreOptions options;
  options.bigram_min_joint = bigram_min_joint;
  std::vector<ScoredPair> all = ScoreAll(measure, counts, options);
  const size_t candidates = all.size();
  std::vector<ScoredPair> ranked =
      RankTopK(std::move(all), static_cast<size_t>(top_k));

  ScoredArtifact out;
  out.rows = AttachRepresentatives(ranked, stats.types);
  Settings settings{{"measure", std::string(MeasureName(measure))},
                    {"top_k", std::to_string(top_k)}};
  if (measure == Measure::kBigram) {
    settings.emplace_back("min_joint", std::to_string(bigram_min_joint));
  }
  out.header.Set("stage", "score");
  out.header.Set("genre", stats.header.Get("genre"));
  out.header.Set("measure", std::string(MeasureName(measure)));
  out.header.Set("candidates", std::to_string(candidates));
  out.header.Set("parent", stats.header.Get("config"));
  out.header.Set("config",
                 LineageHash("score", stats.header.Get("config"), settings));
  return out;
}

RefinedArtifact RefineScored(const ScoredArtifact &scored,
                             const StatsArtifact &pool,
                             HitCountProvider &provider, uint64_t seed,
                             const RefineThresholds &thresholds) {
  RequireStage(scored.header, "score", "ranked pairs");
  RequireStage(pool.header, "extract", "genre pool");
  RequireSame(scored.header, pool.header, "genre",
              "ranked pairs and genre pool");
  std::vector<std::string> verbs = PoolOf(pool);
  std::vector<RefinementRecord> records =
      BuildRefinementRecords(scored.rows, verbs, pool.types, seed);

  std::vector<SearchPattern> patterns;
  patterns.reserve(2 * records.size());
  for (const auto &r : records) {
    patterns.push_back(r.pcep_pattern);
    patterns.push_back(r.rep_pattern);
  }
  auto hits = FetchHitCounts(patterns, provider);
  AttachHitCounts(records, hits);

  RefinedArtifact out;
  out.records = Refine(std::move(records), thresholds);
  Settings settings{{"pool", pool.header.Get("config")},
                    {"seed", std::to_string(seed)},
                    {"min_pcep_hits", std::to_string(thresholds.min_pcep_hits)},
                    {"max_rep_hits", std::to_string(thresholds.max_rep_hits)}};
  out.header.Set("stage", "refine");
  out.header.Set("genre", scored.header.Get("genre"));
  out.header.Set("measure", scored.header.Get("measure"));
  out.header.Set("parent", scored.header.Get("config"));
  out.header.Set("config",
                 LineageHash("refine", scored.header.Get("config"), settings));
  return out;
}

RefinedArtifact KeptOnly(const RefinedArtifact &refined) {
  RefinedArtifact out;
  out.header = refined.header;
  for (const auto &r : refined.records) {
    if (r.decision == Decision::kKeep) out.records.push_back(r);
  }
  return out;
}

TaskArtifact GenerateTasks(const RefinedArtifact &refined, uint64_t seed,
                           bool order_matters, bool show_arguments) {
  RequireStage(refined.header, "refine", "kept pairs");
  RefinedArtifact kept = KeptOnly(refined);
  TaskArtifact out;
  out.batches = GenerateChoiceTasks(kept.records, seed, order_matters,
                                    show_arguments);
  Settings settings{{"seed", std::to_string(seed)},
                    {"order_matters", Bool(order_matters)},
                    {"show_args", Bool(show_arguments)}};
  out.header.Set("stage", "eval-gen");
  out.header.Set("genre", refined.header.Get("genre"));
  out.header.Set("measure", refined.header.Get("measure"));
  out.header.Set("order_matters", Bool(order_matters));
  out.header.Set("show_args", Bool(show_arguments));
  out.header.Set("parent", refined.header.Get("config"));
  out.header.Set("config", LineageHash("eval-gen",
                                       refined.header.Get("config"), settings));
  return out;
}

EvalResult ScoreResponses(const TaskArtifact &tasks,
                          std::span<const RaterResponse> responses,
                          int64_t drop_raters) {
  AnswerKey key = AnswerKeyOf(tasks.batches);
  EvalResult scaffold =
      FilterRaters(responses, key, static_cast<size_t>(drop_raters));
  return ComputeAccuracy(std::move(scaffold), responses, key);
}

ordered_json EvalReport(const EvalResult &result, const TaskArtifact &tasks) {
  ordered_json out;
  out["genre"] = tasks.header.Get("genre");
  out["measure"] = tasks.header.Get("measure");
  out["tasks_config"] = tasks.header.Get("config");
  out["retained_raters"] = result.retained_raters;
  out["dropped_raters"] = result.dropped_raters;
  ordered_json corr = ordered_json::object();
  for (const auto &[rater, r] : result.mean_correlation) corr[rater] = r;
  out["mean_correlation"] = std::move(corr);
  out["correct_answers"] = result.correct_answers;
  out["total_answers"] = result.total_answers;
  out["accuracy"] = result.accuracy;
  out["precision"] = result.precision;
  out["recall"] = result.recall;
  out["accuracy_percent"] = FormatPercent(result.accuracy);
  return out;
}

ordered_json PipelineReport::ToJson() const {
  ordered_json out;
  out["config"] = config;
  ordered_json genres_json = ordered_json::array();
  for (const auto &g : genres) {
    ordered_json j;
    j["genre"] = g.genre;
    j["documents"] = g.documents;
    j["mentions"] = g.mentions;
    j["event_types"] = g.event_types;
    j["pairs"] = g.pairs;
    j["protagonist_pairs"] = g.protagonist_pairs;
    j["scored"] = g.scored;
    j["ranked"] = g.ranked;
    j["kept"] = g.kept;
    j["tasks"] = g.tasks;
    j["batches"] = g.batches;
    if (g.accuracy) j["accuracy"] = *g.accuracy;
    genres_json.push_back(std::move(j));
  }
  out["genres"] = std::move(genres_json);
  return out;
}

PipelineReport RunPipeline(const PipelineConfig &config) {
  namespace fs = std::filesystem;
  config.Validate();
  if (config.paths.out.empty()) throw StageError("run", "no output directory");

  PipelineReport report;
  report.config = ConfigEcho(config);

  Corpus corpus = Stage("ingest", [&] {
    Corpus c = LoadCorpusFile(config.paths.corpus);
    spdlog::info("stage=ingest documents={} source={}", c.documents.size(),
                 config.paths.corpus.string());
    return c;
  });
  std::vector<std::string> genres = corpus.Genres();
  if (!config.genre.empty()) {
    if (std::find(genres.begin(), genres.end(), config.genre) ==
        genres.end()) {
      throw StageError("ingest", "corpus has no documents of genre '" +
                                     config.genre + "'");
    }
    genres = {config.genre};
  }
  if (!config.paths.responses.empty() && genres.size() != 1) {
    throw StageError("eval", "rater responses need a single configured genre");
  }

  HitCountCache cache = HitCountCache::Load(config.paths.cache);
  std::unique_ptr<HitCountProvider> provider;
  if (config.live.enabled) {
    provider = std::make_unique<LiveHitCountProvider>(config.live.endpoint,
                                                      cache);
  } else {
    provider = std::make_unique<CachedHitCountProvider>(cache);
  }

  for (const auto &genre : genres) {
    const fs::path dir = config.paths.out / genre;
    fs::create_directories(dir);
    RemoveStaleArtifacts(dir);
    GenreReport g;
    g.genre = genre;

    auto [stats, protag] = Stage("extract", [&] {
      auto docs = corpus.ByGenre(genre);
      GenreEvents events = ExtractGenre(genre, docs);
      StatsArtifact adjacent = BuildStats(events, PairingMode::kAdjacent, 0);
      StatsArtifact protagonist = BuildStats(events, PairingMode::kProtagonist,
                                             config.protag_min_pair_freq);
      WriteFile(dir / kStatsFile, SerializeStats(adjacent));
      WriteFile(dir / kProtagStatsFile, SerializeStats(protagonist));
      g.documents = events.document_count;
      g.mentions = events.total_events;
      g.event_types = static_cast<int64_t>(events.types.size());
      g.pairs = static_cast<int64_t>(adjacent.pairs.counts.size());
      g.protagonist_pairs =
          static_cast<int64_t>(protagonist.pairs.counts.size());
      spdlog::info("stage=extract genre={} mentions={} types={} pairs={} "
                   "protagonist_pairs={}",
                   genre, g.mentions, g.event_types, g.pairs,
                   g.protagonist_pairs);
      return std::make_pair(std::move(adjacent), std::move(protagonist));
    });

    ScoredArtifact scored = Stage("score", [&] {
      const StatsArtifact &input =
          config.measure == Measure::kProtagCp ? protag : stats;
      ScoredArtifact s = ScoreStats(input, config.measure, config.top_k,
                                    config.bigram_min_joint);
      std::ostringstream out;
      WriteScored(out, s);
      WriteFile(dir / kScoredFile, out.str());
      g.scored = std::stoll(s.header.Get("candidates"));
      g.ranked = static_cast<int64_t>(s.rows.size());
      spdlog::info("stage=score genre={} measure={} scored={} ranked={}",
                   genre, MeasureName(config.measure), g.scored, g.ranked);
      return s;
    });

    RefinedArtifact refined = Stage("refine", [&] {
      RefineThresholds thresholds{config.min_pcep_hits, config.max_rep_hits};
      RefinedArtifact r =
          RefineScored(scored, stats, *provider, config.seed, thresholds);
      std::ostringstream all;
      WriteRefined(all, r);
      WriteFile(dir / kRefinedFile, all.str());
      RefinedArtifact kept = KeptOnly(r);
      std::ostringstream kept_out;
      WriteRefined(kept_out, kept);
      WriteFile(dir / kKeptFile, kept_out.str());
      g.kept = static_cast<int64_t>(kept.records.size());
      spdlog::info("stage=refine genre={} records={} kept={}", genre,
                   r.records.size(), g.kept);
      return r;
    });

    Stage("eval", [&] {
      if (g.kept == 0) {
        spdlog::info("stage=eval genre={} tasks=0", genre);
        return 0;
      }
      TaskArtifact tasks =
          GenerateTasks(refined, config.seed, config.EffectiveOrderMatters(),
                        config.show_arguments);
      WriteTaskDirectory(dir / kTasksDir, tasks);
      g.batches = static_cast<int64_t>(tasks.batches.size());
      for (const auto &b : tasks.batches) {
        g.tasks += static_cast<int64_t>(b.tasks.size());
      }
      if (!config.paths.responses.empty()) {
        std::ifstream in(config.paths.responses);
        if (!in) throw Error("cannot open " + config.paths.responses.string());
        auto responses =
            ReadResponses(in, config.paths.responses.string(), tasks);
        EvalResult result =
            ScoreResponses(tasks, responses, config.drop_raters);
        WriteFile(dir / kEvalFile, EvalReport(result, tasks).dump(1) + "\n");
        g.accuracy = result.accuracy;
      }
      spdlog::info("stage=eval genre={} tasks={} batches={}", genre, g.tasks,
                   g.batches);
      return 0;
    });

    report.genres.push_back(std::move(g));
  }

  WriteFile(config.paths.out / kReportFile, report.ToJson().dump(1) + "\n");
  return report;
}

}  // namespace contingency
