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

// Stage wiring shared by the command-line subcommands and `run`.
//
// Each stage function is pure apart from the hit-count provider. The header
// it stamps on its artifact hashes the settings of that stage together with
// the hash of its input, so a downstream consumer can tell whether two
// artifacts share a lineage.

#ifndef CONTINGENCY_PIPELINE_H_
#define CONTINGENCY_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "contingency/artifacts.h"
#include "contingency/eval.h"
#include "contingency/extract.h"
#include "contingency/ingest.h"
#include "contingency/measures.h"
#include "contingency/refine.h"

namespace contingency {

struct PipelinePaths {
  std::filesystem::path corpus;     // annotated corpus, one document per line
  std::filesystem::path cache;      // hit-count cache
  std::filesystem::path out;        // artifact directory
  std::filesystem::path responses;  // optional rater responses
};

struct LiveSettings {
  bool enabled = false;
  LiveEndpoint endpoint;
};

struct PipelineConfig {
  std::string genre;  // empty: every genre of the corpus
  Measure measure = Measure::kCp;
  int64_t top_k = 100;
  int64_t min_pcep_hits = 100;
  int64_t max_rep_hits = 100;
  int64_t bigram_min_joint = 20;
  int64_t protag_min_pair_freq = 5;
  uint64_t seed = 0;
  bool show_arguments = false;
  std::optional<bool> order_matters;  // unset: false for PMI, true otherwise
  int64_t drop_raters = 5;
  PipelinePaths paths;
  LiveSettings live;

  bool EffectiveOrderMatters() const;
  // Throws Error if any count is negative.
  void Validate() const;
};

// Reads a JSON configuration. Relative paths resolve against the directory
// of the file. Unknown keys are rejected.
PipelineConfig LoadConfig(const std::filesystem::path &path);
PipelineConfig ParseConfig(const nlohmann::json &doc,
                           const std::filesystem::path &base_dir);
// Settings echo. Input paths are reported by file name only and the output
// directory is omitted, so reports do not depend on where a run happened.
nlohmann::ordered_json ConfigEcho(const PipelineConfig &config);

// 64-bit FNV-1a over the stage name, parent hash and settings; 16 hex digits.
std::string LineageHash(
    std::string_view stage, std::string_view parent,
    std::span<const std::pair<std::string, std::string>> settings);

StatsArtifact BuildStats(const GenreEvents &events, PairingMode mode,
                         int64_t min_pair_freq);

// Candidates of one measure, ranked and cut to `top_k`. Rejects statistics
// of the wrong pairing mode for the measure.
ScoredArtifact ScoreStats(const StatsArtifact &stats, Measure measure,
                          int64_t top_k, int64_t bigram_min_joint);

// Draws random pairs from the pool's event types, fetches hit counts for
// both patterns of every record and applies the thresholds.
RefinedArtifact RefineScored(const ScoredArtifact &scored,
                             const StatsArtifact &pool,
                             HitCountProvider &provider, uint64_t seed,
                             const RefineThresholds &thresholds);

// Only KEEP records, same header.
RefinedArtifact KeptOnly(const RefinedArtifact &refined);

// Choice tasks from the KEEP records. Throws Error when none are kept.
TaskArtifact GenerateTasks(const RefinedArtifact &refined, uint64_t seed,
                           bool order_matters, bool show_arguments);

EvalResult ScoreResponses(const TaskArtifact &tasks,
                          std::span<const RaterResponse> responses,
                          int64_t drop_raters);

nlohmann::ordered_json EvalReport(const EvalResult &result,
                                  const TaskArtifact &tasks);

struct GenreReport {
  std::string genre;
  int64_t documents = 0;
  int64_t mentions = 0;
  int64_t event_types = 0;
  int64_t pairs = 0;             // distinct adjacent pairs
  int64_t protagonist_pairs = 0; // distinct protagonist pairs after filtering
  int64_t scored = 0;            // candidates scored by the measure
  int64_t ranked = 0;            // min(top_k, scored)
  int64_t kept = 0;
  int64_t tasks = 0;
  int64_t batches = 0;
  std::optional<double> accuracy;  // only when responses are configured
};

struct PipelineReport {
  nlohmann::ordered_json config;
  std::vector<GenreReport> genres;

  nlohmann::ordered_json ToJson() const;
};

// File names inside <out>/<genre>/.
inline constexpr std::string_view kStatsFile = "stats.json";
inline constexpr std::string_view kProtagStatsFile = "protag_stats.json";
inline constexpr std::string_view kScoredFile = "scored.tsv";
inline constexpr std::string_view kRefinedFile = "refined.tsv";
inline constexpr std::string_view kKeptFile = "kept.tsv";
inline constexpr std::string_view kTasksDir = "tasks";
inline constexpr std::string_view kEvalFile = "eval.json";
inline constexpr std::string_view kReportFile = "report.json";

// Runs ingest, extract, score, refine and eval for every configured genre.
// Each stage writes its artifact before the next starts. Any failure is
// rethrown as StageError naming the stage.
PipelineReport RunPipeline(const PipelineConfig &config);

}  // namespace contingency

#endif  // CONTINGENCY_PIPELINE_H_
