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

#include "contingency/measures.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "contingency/error.h"

namespace contingency {
namespace {

int64_t UnorderedJoint(const EventPairStats &stats, const std::string &e1,
                       const std::string &e2) {
  int64_t joint = stats.Count(e1, e2);
  if (e1 != e2) joint += stats.Count(e2, e1);
  return joint;
}

std::optional<double> PmiOver(const std::string &e1, const std::string &e2,
                              const EventPairStats &stats,
                              const CorpusCounts &counts) {
  const int64_t joint = UnorderedJoint(stats, e1, e2);
  const int64_t f1 = counts.EventFrequency(e1);
  const int64_t f2 = counts.EventFrequency(e2);
  if (joint <= 0 || f1 <= 0 || f2 <= 0 || stats.total_pair_tokens <= 0) {
    return std::nullopt;
  }
  const double n = static_cast<double>(counts.total_events());
  const double p_joint =
      static_cast<double>(joint) / static_cast<double>(stats.total_pair_tokens);
  const double p1 = static_cast<double>(f1) / n;
  const double p2 = static_cast<double>(f2) / n;
  return std::log(p_joint / (p1 * p2));
}

double OrderingTerm(const std::string &e1, const std::string &e2,
                    const EventPairStats &stats) {
  const int64_t forward = std::max<int64_t>(stats.Count(e1, e2), 1);
  const int64_t backward = std::max<int64_t>(stats.Count(e2, e1), 1);
  return std::log(static_cast<double>(forward) /
                  static_cast<double>(backward));
}

std::optional<double> CpOver(const std::string &e1, const std::string &e2,
                             const EventPairStats &stats,
                             const CorpusCounts &counts) {
  auto pmi = PmiOver(e1, e2, stats, counts);
  if (!pmi) return std::nullopt;
  return *pmi + OrderingTerm(e1, e2, stats);
}

std::vector<VerbPair> Candidates(Measure measure, const CorpusCounts &counts,
                                 const ScoreOptions &options) {
  const EventPairStats &stats = counts.pair_stats();
  std::vector<VerbPair> out;
  out.reserve(stats.counts.size());
  for (const auto &[pair, n] : stats.counts) {
    switch (measure) {
      case Measure::kPmi:
        if (pair.first <= pair.second) {
          out.push_back(pair);
        } else if (stats.Count(pair.second, pair.first) == 0) {
          out.push_back({pair.second, pair.first});
        }
        break;
      case Measure::kBigram:
        if (n >= options.bigram_min_joint) out.push_back(pair);
        break;
      case Measure::kCp:
      case Measure::kProtagCp:
        out.push_back(pair);
        break;
    }
  }
  if (measure == Measure::kPmi) std::sort(out.begin(), out.end());
  return out;
}

std::optional<double> ScoreOne(Measure measure, const VerbPair &pair,
                               const CorpusCounts &counts,
                               const ScoreOptions &options) {
  switch (measure) {
    case Measure::kPmi:
      return Pmi(pair.first, pair.second, counts);
    case Measure::kCp:
      return CausalPotential(pair.first, pair.second, counts);
    case Measure::kBigram:
      return BigramProbability(pair.first, pair.second, counts,
                               options.bigram_min_joint);
    case Measure::kProtagCp:
      return ProtagonistCp(pair.first, pair.second, counts.pair_stats(),
                           counts);
  }
  return std::nullopt;
}

}  // namespace

std::string_view MeasureName(Measure m) {
  switch (m) {
    case Measure::kPmi:
      return "pmi";
    case Measure::kCp:
      return "cp";
    case Measure::kBigram:
      return "bigram";
    case Measure::kProtagCp:
      return "protag-cp";
  }
  return "unknown";
}

Measure ParseMeasure(std::string_view name) {
  for (Measure m :
       {Measure::kPmi, Measure::kCp, Measure::kBigram, Measure::kProtagCp}) {
    if (MeasureName(m) == name) return m;
  }
  throw Error("unknown measure '" + std::string(name) +
              "' (expected pmi, cp, bigram or protag-cp)");
}

CorpusCounts::CorpusCounts(std::map<std::string, int64_t> event_freq,
                           EventPairStats pair_stats)
    : event_freq_(std::move(event_freq)), pair_stats_(std::move(pair_stats)) {
  for (const auto &[event, n] : event_freq_) total_events_ += n;
  for (const auto &[pair, n] : pair_stats_.counts) history_[pair.first] += n;
}

CorpusCounts CorpusCounts::FromEventTypes(const EventTypeTable &types,
                                          EventPairStats pair_stats) {
  std::map<std::string, int64_t> freq;
  for (const auto &[verb, type] : types) freq[verb] = type.frequency;
  return CorpusCounts(std::move(freq), std::move(pair_stats));
}

int64_t CorpusCounts::EventFrequency(const std::string &event) const {
  auto it = event_freq_.find(event);
  return it == event_freq_.end() ? 0 : it->second;
}

int64_t CorpusCounts::HistoryCount(const std::string &event) const {
  auto it = history_.find(event);
  return it == history_.end() ? 0 : it->second;
}

std::optional<double> Pmi(const std::string &e1, const std::string &e2,
                          const CorpusCounts &counts) {
  return PmiOver(e1, e2, counts.pair_stats(), counts);
}

std::optional<double> CausalPotential(const std::string &e1,
                                      const std::string &e2,
                                      const CorpusCounts &counts) {
  return CpOver(e1, e2, counts.pair_stats(), counts);
}

std::optional<double> BigramProbability(const std::string &w1,
                                        const std::string &w2,
                                        const CorpusCounts &counts,
                                        int64_t min_joint) {
  const int64_t joint = counts.pair_stats().Count(w1, w2);
  const int64_t history = counts.HistoryCount(w1);
  if (history <= 0 || joint <= 0 || joint < min_joint) return std::nullopt;
  return static_cast<double>(joint) / static_cast<double>(history);
}

std::optional<double> ProtagonistCp(const std::string &e1,
                                    const std::string &e2,
                                    const EventPairStats &protag_stats,
                                    const CorpusCounts &counts) {
  return CpOver(e1, e2, protag_stats, counts);
}

std::vector<ScoredPair> ScoreAll(Measure measure, const CorpusCounts &counts,
                                 const ScoreOptions &options,
                                 Execution policy) {
  const std::vector<VerbPair> candidates = Candidates(measure, counts, options);
  const auto n = static_cast<int64_t>(candidates.size());
  std::vector<std::optional<double>> scores(candidates.size());
  if (policy == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) {
      scores[i] = ScoreOne(measure, candidates[i], counts, options);
    }
  } else {
    for (int64_t i = 0; i < n; ++i) {
      scores[i] = ScoreOne(measure, candidates[i], counts, options);
    }
  }

  std::vector<ScoredPair> out;
  out.reserve(candidates.size());
  for (int64_t i = 0; i < n; ++i) {
    if (!scores[i] || !std::isfinite(*scores[i])) continue;
    out.push_back({candidates[i].first, candidates[i].second, measure,
                   *scores[i], measure != Measure::kPmi});
  }
  return out;
}

std::vector<ScoredPair> RankTopK(std::vector<ScoredPair> scored, size_t k) {
  std::sort(scored.begin(), scored.end(),
            [](const ScoredPair &a, const ScoredPair &b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.first != b.first) return a.first < b.first;
              return a.second < b.second;
            });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

}  // namespace contingency
