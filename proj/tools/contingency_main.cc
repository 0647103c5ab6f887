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

// Command-line entry point: one subcommand per pipeline stage plus `run`.
// Settings come from --config (JSON) and are overridden by explicit flags.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "contingency/artifacts.h"
#include "contingency/error.h"
#include "contingency/pipeline.h"

namespace {

using namespace contingency;

struct GlobalFlags {
  std::string config_path;
  std::optional<uint64_t> seed;
  bool quiet = false;
};

PipelineConfig EffectiveConfig(const GlobalFlags &g) {
  PipelineConfig c = g.config_path.empty() ? PipelineConfig{}
                                           : LoadConfig(g.config_path);
  if (g.seed) c.seed = *g.seed;
  return c;
}

template <typename T>
void Override(T &target, const std::optional<T> &flag) {
  if (flag) target = *flag;
}

int CmdIngest(const std::string &raw, const std::string &out) {
  auto screenplays = ExciseDirectory(raw);
  std::ostringstream lines;
  for (const auto &s : screenplays) {
    nlohmann::ordered_json j;
    j["docId"] = s.doc_id;
    j["genre"] = s.genre;
    j["text"] = s.text;
    lines << j.dump() << '\n';
  }
  WriteFile(out, lines.str());
  std::cout << fmt::format("{} screenplay(s) excised to {}\n",
                           screenplays.size(), out);
  return 0;
}

int CmdValidate(const std::string &annotated) {
  Corpus corpus = LoadCorpusFile(annotated);
  size_t sentences = 0;
  for (const auto &d : corpus.documents) sentences += d.sentences.size();
  std::cout << fmt::format("{}: {} document(s), {} sentence(s)\n", annotated,
                           corpus.documents.size(), sentences);
  for (const auto &g : corpus.Genres()) {
    std::cout << fmt::format("  {}\t{}\n", g, corpus.ByGenre(g).size());
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  spdlog::set_default_logger(spdlog::stderr_color_st("contingency"));
  spdlog::set_pattern("%l %v");

  CLI::App app{"Learn contingent event pairs from narrative corpora"};
  app.fallthrough();
  app.require_subcommand(1);

  GlobalFlags global;
  app.add_option("--config", global.config_path, "JSON configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", global.seed, "Random seed");
  app.add_flag("--quiet", global.quiet, "Suppress stage logs");

  // ingest
  std::string ingest_raw, ingest_out;
  auto *ingest = app.add_subcommand("ingest", "Excise dialog from screenplays");
  ingest->add_option("--raw", ingest_raw, "Directory of *.txt screenplays")
      ->required()
      ->check(CLI::ExistingDirectory);
  ingest->add_option("--out", ingest_out, "Output file (JSON lines)")
      ->required();

  // validate
  std::string validate_file;
  auto *validate =
      app.add_subcommand("validate", "Check an annotated corpus file");
  validate->add_option("--annotated", validate_file, "Annotated corpus")
      ->required()
      ->check(CLI::ExistingFile);

  // extract
  std::string extract_file, extract_out;
  std::optional<std::string> extract_genre;
  bool extract_protag = false;
  std::optional<int64_t> extract_min_freq;
  auto *extract = app.add_subcommand("extract", "Compute pair statistics");
  extract->add_option("--annotated", extract_file, "Annotated corpus")
      ->required()
      ->check(CLI::ExistingFile);
  extract->add_option("--genre", extract_genre, "Genre tag");
  extract->add_option("--out", extract_out, "Stats file")->required();
  extract->add_flag("--protagonist", extract_protag,
                    "Pair events that share a protagonist");
  extract->add_option("--min-pair-freq", extract_min_freq,
                      "Protagonist pair frequency filter")
      ->check(CLI::NonNegativeNumber);

  // score
  std::string score_stats, score_out;
  std::optional<std::string> score_measure;
  std::optional<int64_t> score_top, score_min_joint;
  auto *score = app.add_subcommand("score", "Rank pairs by one measure");
  score->add_option("--stats", score_stats, "Stats file")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("--measure", score_measure, "pmi|cp|bigram|protag-cp")
      ->check(CLI::IsMember({"pmi", "cp", "bigram", "protag-cp"}));
  score->add_option("--top", score_top, "Number of pairs kept")
      ->check(CLI::NonNegativeNumber);
  score->add_option("--min-joint", score_min_joint, "Bigram joint threshold")
      ->check(CLI::NonNegativeNumber);
  score->add_option("--out", score_out, "Ranked pairs (TSV)")->required();

  // refine
  std::string refine_pairs, refine_pool, refine_out;
  std::optional<std::string> refine_cache, refine_kept_out;
  bool refine_live = false;
  std::optional<std::string> live_host, live_path;
  std::optional<int> live_port;
  std::optional<int64_t> live_interval;
  std::optional<int64_t> refine_min_pcep, refine_max_rep;
  auto *refine = app.add_subcommand("refine", "Web-count refinement");
  refine->add_option("--pairs", refine_pairs, "Ranked pairs from score")
      ->required()
      ->check(CLI::ExistingFile);
  refine->add_option("--genre-pool", refine_pool, "Stats file of the genre")
      ->required()
      ->check(CLI::ExistingFile);
  refine->add_option("--cache", refine_cache, "Hit-count cache file");
  refine->add_flag("--live", refine_live, "Query the hit-count service");
  refine->add_option("--live-host", live_host, "Hit-count service host");
  refine->add_option("--live-port", live_port, "Hit-count service port");
  refine->add_option("--live-path", live_path, "Hit-count service path");
  refine->add_option("--live-interval-ms", live_interval,
                     "Minimum delay between live queries");
  refine->add_option("--min-pcep-hits", refine_min_pcep,
                     "Drop pairs with fewer hits")
      ->check(CLI::NonNegativeNumber);
  refine->add_option("--max-rep-hits", refine_max_rep,
                     "Drop pairs whose random pair has more hits")
      ->check(CLI::NonNegativeNumber);
  refine->add_option("--out", refine_out, "Refinement records (TSV)")
      ->required();
  refine->add_option("--kept-out", refine_kept_out, "KEEP records only");

  // eval-gen
  std::string gen_kept, gen_out;
  bool gen_show_args = false, gen_order = false;
  auto *eval_gen = app.add_subcommand("eval-gen", "Build choice tasks");
  eval_gen->add_option("--kept", gen_kept, "Refinement records")
      ->required()
      ->check(CLI::ExistingFile);
  eval_gen->add_flag("--show-args", gen_show_args, "Show event arguments");
  eval_gen->add_flag("--order-matters", gen_order,
                     "Tell raters that event order matters");
  eval_gen->add_option("--out", gen_out, "Task directory")->required();

  // eval-score
  std::string score_tasks, score_responses, score_report;
  std::optional<int64_t> score_drop;
  auto *eval_score = app.add_subcommand("eval-score", "Score rater responses");
  eval_score->add_option("--tasks", score_tasks, "Task directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval_score->add_option("--responses", score_responses, "Responses (TSV)")
      ->required()
      ->check(CLI::ExistingFile);
  eval_score->add_option("--drop", score_drop, "Raters to drop")
      ->check(CLI::NonNegativeNumber);
  eval_score->add_option("--out", score_report, "Report (JSON)")->required();

  // run
  std::optional<std::string> run_out, run_genre, run_measure, run_corpus,
      run_cache, run_responses;
  std::optional<int64_t> run_top;
  bool run_live = false;
  auto *run = app.add_subcommand("run", "Run the whole pipeline");
  run->add_option("--out", run_out, "Artifact directory");
  run->add_option("--genre", run_genre, "Single genre (default: all)");
  run->add_option("--measure", run_measure, "pmi|cp|bigram|protag-cp")
      ->check(CLI::IsMember({"pmi", "cp", "bigram", "protag-cp"}));
  run->add_option("--top", run_top, "Number of pairs kept")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--corpus", run_corpus, "Annotated corpus");
  run->add_option("--cache", run_cache, "Hit-count cache");
  run->add_option("--responses", run_responses, "Rater responses");
  run->add_flag("--live", run_live, "Query the hit-count service");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 2;
  }
  if (global.quiet) spdlog::set_level(spdlog::level::warn);

  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (*ingest) return CmdIngest(ingest_raw, ingest_out);
    if (*validate) return CmdValidate(validate_file);

    PipelineConfig config = EffectiveConfig(global);

    if (*extract) {
      Override(config.protag_min_pair_freq, extract_min_freq);
      Corpus corpus = LoadCorpusFile(extract_file);
      std::string genre = extract_genre.value_or(config.genre);
      if (genre.empty()) {
        auto genres = corpus.Genres();
        if (genres.size() != 1) {
          throw Error("--genre is required for a corpus with several genres");
        }
        genre = genres.front();
      }
      auto docs = corpus.ByGenre(genre);
      if (docs.empty()) throw Error("no documents of genre '" + genre + "'");
      GenreEvents events = ExtractGenre(genre, docs);
      PairingMode mode =
          extract_protag ? PairingMode::kProtagonist : PairingMode::kAdjacent;
      StatsArtifact stats =
          BuildStats(events, mode, config.protag_min_pair_freq);
      WriteFile(extract_out, SerializeStats(stats));
      spdlog::info("stage=extract genre={} mode={} mentions={} pairs={}",
                   genre, PairingModeName(mode), events.total_events,
                   stats.pairs.counts.size());
      return 0;
    }

    if (*score) {
      if (score_measure) config.measure = ParseMeasure(*score_measure);
      Override(config.top_k, score_top);
      Override(config.bigram_min_joint, score_min_joint);
      StatsArtifact stats = ParseStats(ReadFile(score_stats), score_stats);
      ScoredArtifact scored = ScoreStats(stats, config.measure, config.top_k,
                                         config.bigram_min_joint);
      std::ostringstream out;
      WriteScored(out, scored);
      WriteFile(score_out, out.str());
      spdlog::info("stage=score measure={} ranked={}",
                   MeasureName(config.measure), scored.rows.size());
      return 0;
    }

    if (*refine) {
      if (refine_cache) config.paths.cache = *refine_cache;
      config.live.enabled = config.live.enabled || refine_live;
      Override(config.live.endpoint.host, live_host);
      Override(config.live.endpoint.port, live_port);
      Override(config.live.endpoint.path, live_path);
      if (live_interval) {
        config.live.endpoint.min_interval =
            std::chrono::milliseconds(*live_interval);
      }
      Override(config.min_pcep_hits, refine_min_pcep);
      Override(config.max_rep_hits, refine_max_rep);
      if (config.paths.cache.empty()) throw Error("--cache is required");

      std::ifstream pairs_in(refine_pairs);
      ScoredArtifact scored = ReadScored(pairs_in, refine_pairs);
      StatsArtifact pool = ParseStats(ReadFile(refine_pool), refine_pool);
      HitCountCache cache = HitCountCache::Load(config.paths.cache);
      std::unique_ptr<HitCountProvider> provider;
      if (config.live.enabled) {
        provider =
            std::make_unique<LiveHitCountProvider>(config.live.endpoint, cache);
      } else {
        provider = std::make_unique<CachedHitCountProvider>(cache);
      }
      RefinedArtifact refined =
          RefineScored(scored, pool, *provider, config.seed,
                       {config.min_pcep_hits, config.max_rep_hits});
      std::ostringstream out;
      WriteRefined(out, refined);
      WriteFile(refine_out, out.str());
      RefinedArtifact kept = KeptOnly(refined);
      if (refine_kept_out) {
        std::ostringstream kept_out;
        WriteRefined(kept_out, kept);
        WriteFile(*refine_kept_out, kept_out.str());
      }
      spdlog::info("stage=refine records={} kept={}", refined.records.size(),
                   kept.records.size());
      return 0;
    }

    if (*eval_gen) {
      std::ifstream in(gen_kept);
      RefinedArtifact refined = ReadRefined(in, gen_kept);
      bool order_matters = gen_order;
      if (!gen_order) {
        order_matters = config.order_matters.value_or(
            refined.header.Get("measure") != MeasureName(Measure::kPmi));
      }
      bool show_args = gen_show_args || config.show_arguments;
      TaskArtifact tasks =
          GenerateTasks(refined, config.seed, order_matters, show_args);
      WriteTaskDirectory(gen_out, tasks);
      size_t n = 0;
      for (const auto &b : tasks.batches) n += b.tasks.size();
      spdlog::info("stage=eval-gen tasks={} batches={}", n,
                   tasks.batches.size());
      return 0;
    }

    if (*eval_score) {
      Override(config.drop_raters, score_drop);
      TaskArtifact tasks = ReadTaskDirectory(score_tasks);
      std::ifstream in(score_responses);
      auto responses = ReadResponses(in, score_responses, tasks);
      EvalResult result = ScoreResponses(tasks, responses, config.drop_raters);
      WriteFile(score_report, EvalReport(result, tasks).dump(1) + "\n");
      std::cout << fmt::format(
          "accuracy {} ({} / {}), retained {} of {} raters\n",
          FormatPercent(result.accuracy), result.correct_answers,
          result.total_answers, result.retained_raters.size(),
          result.retained_raters.size() + result.dropped_raters.size());
      return 0;
    }

    if (*run) {
      if (run_out) config.paths.out = *run_out;
      Override(config.genre, run_genre);
      if (run_measure) config.measure = ParseMeasure(*run_measure);
      Override(config.top_k, run_top);
      if (run_corpus) config.paths.corpus = *run_corpus;
      if (run_cache) config.paths.cache = *run_cache;
      if (run_responses) config.paths.responses = *run_responses;
      config.live.enabled = config.live.enabled || run_live;
      PipelineReport report = RunPipeline(config);
      for (const auto &g : report.genres) {
        std::cout << fmt::format(
            "{}: documents={} mentions={} types={} pairs={} scored={} "
            "ranked={} kept={} tasks={}\n",
            g.genre, g.documents, g.mentions, g.event_types, g.pairs, g.scored,
            g.ranked, g.kept, g.tasks);
      }
      return 0;
    }
  } catch (const StageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << command << ": " << e.what() << '\n';
    return 1;
  }
  return 1;
}
