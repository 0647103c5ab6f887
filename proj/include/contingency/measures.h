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

// Distributional contingency measures over per-genre pair statistics.
//
// All logarithms are natural. Probabilities:
//   P(e)       = count(e) / total events
//   P(e1, e2)  = (count(e1->e2) + count(e2->e1)) / total pair tokens
//                (a self pair contributes its single directional count)
//   CP(e1, e2) = pmi(e1, e2) + log(count'(e1->e2) / count'(e2->e1))
// where count' replaces an unseen direction by 1. The directional
// probabilities share a denominator, so only the count ratio matters.
//
// A pair with no joint observation is never scored.

#ifndef CONTINGENCY_MEASURES_H_
#define CONTINGENCY_MEASURES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "contingency/execution.h"
#include "contingency/extract.h"

namespace contingency {

enum class Measure { kPmi, kCp, kBigram, kProtagCp };

// "pmi", "cp", "bigram", "protag-cp".
std::string_view MeasureName(Measure m);
Measure ParseMeasure(std::string_view name);

struct ScoredPair {
  std::string first;
  std::string second;
  Measure measure = Measure::kPmi;
  double score = 0.0;
  bool ordered = true;  // false only for PMI

  bool operator==(const ScoredPair &) const = default;
};

// Event frequencies plus one table of pair statistics. Immutable once built.
class CorpusCounts {
 public:
  CorpusCounts(std::map<std::string, int64_t> event_freq,
               EventPairStats pair_stats);

  static CorpusCounts FromEventTypes(const EventTypeTable &types,
                                     EventPairStats pair_stats);

  int64_t EventFrequency(const std::string &event) const;
  int64_t total_events() const { return total_events_; }
  const std::map<std::string, int64_t> &event_freq() const {
    return event_freq_;
  }
  const EventPairStats &pair_stats() const { return pair_stats_; }
  // Number of observed pairs whose first element is `event`.
  int64_t HistoryCount(const std::string &event) const;

 private:
  std::map<std::string, int64_t> event_freq_;
  int64_t total_events_ = 0;
  EventPairStats pair_stats_;
  std::map<std::string, int64_t> history_;
};

std::optional<double> Pmi(const std::string &e1, const std::string &e2,
                          const CorpusCounts &counts);

std::optional<double> CausalPotential(const std::string &e1,
                                      const std::string &e2,
                                      const CorpusCounts &counts);

// P(w2 | w1) = count(w1->w2) / count(w1 as a bigram history). Scored only
// when count(w1->w2) >= min_joint.
std::optional<double> BigramProbability(const std::string &w1,
                                        const std::string &w2,
                                        const CorpusCounts &counts,
                                        int64_t min_joint = 20);

// Causal potential over protagonist pair statistics. Event frequencies come
// from `counts`; joint and directional counts from `protag_stats`.
std::optional<double> ProtagonistCp(const std::string &e1,
                                    const std::string &e2,
                                    const EventPairStats &protag_stats,
                                    const CorpusCounts &counts);

struct ScoreOptions {
  int64_t bigram_min_joint = 20;
};

// Scores every candidate pair of `counts.pair_stats()`:
//   PMI            each unordered pair once, first <= second
//   CP, PROTAG_CP  each observed ordered pair
//   BIGRAM         each observed ordered pair meeting the joint threshold
// For PROTAG_CP the pair statistics must be protagonist statistics. Output is
// in pair-key order and identical for both execution policies.
std::vector<ScoredPair> ScoreAll(Measure measure, const CorpusCounts &counts,
                                 const ScoreOptions &options = {},
                                 Execution policy = Execution::kParallel);

// Descending score, ties by (first, second); at most k entries.
std::vector<ScoredPair> RankTopK(std::vector<ScoredPair> scored,
                                 size_t k = 100);

}  // namespace contingency

#endif  // CONTINGENCY_MEASURES_H_
