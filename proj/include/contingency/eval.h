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

// Forced-choice evaluation: a candidate pair against its random pair.

#ifndef CONTINGENCY_EVAL_H_
#define CONTINGENCY_EVAL_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "contingency/refine.h"

namespace contingency {

enum class Side { kA, kB };

char SideLetter(Side s);
Side ParseSide(std::string_view s);
inline Side Opposite(Side s) { return s == Side::kA ? Side::kB : Side::kA; }

enum class Instructions { kOrderMatters, kOrderIgnored };

std::string_view InstructionsName(Instructions i);  // "order-matters", ...
Instructions ParseInstructions(std::string_view name);
// Text shown to raters above a batch.
std::string_view InstructionsText(Instructions i);

struct ChoiceTask {
  std::string task_id;
  std::string batch_id;
  std::string side_a;  // rendered pair
  std::string side_b;
  Side correct_side = Side::kA;  // where the candidate pair sits
  bool order_matters = true;
  bool show_arguments = false;

  bool operator==(const ChoiceTask &) const = default;
};

struct HitBatch {
  std::string batch_id;
  std::vector<ChoiceTask> tasks;
  Instructions instructions = Instructions::kOrderMatters;

  bool operator==(const HitBatch &) const = default;
};

inline constexpr size_t kTasksPerBatch = 20;

// "<verb>" or "<subject> <VERB> <object>" (absent arguments are skipped).
std::string RenderEvent(const DisplayEvent &event, bool show_arguments);
// Two rendered events joined by " - ".
std::string RenderPair(const DisplayEvent &first, const DisplayEvent &second,
                       bool show_arguments);

// One task per record, in record order, grouped into batches of
// `batch_size`. The candidate lands on side A or B by a seeded coin flip.
// Throws Error on empty input.
std::vector<HitBatch> GenerateChoiceTasks(
    std::span<const RefinementRecord> kept, uint64_t seed, bool order_matters,
    bool show_arguments, size_t batch_size = kTasksPerBatch);

using AnswerKey = std::map<std::string, Side>;  // taskId -> correct side
AnswerKey AnswerKeyOf(std::span<const HitBatch> batches);

struct RaterResponse {
  std::string rater_id;
  std::string batch_id;
  std::map<std::string, Side> answers;  // taskId -> chosen side
};

struct EvalResult {
  std::vector<std::string> retained_raters;
  std::vector<std::string> dropped_raters;
  std::map<std::string, double> mean_correlation;
  int64_t correct_answers = 0;
  int64_t total_answers = 0;
  double accuracy = 0.0;
  double precision = 0.0;  // equal to accuracy for a forced choice
  double recall = 0.0;     // likewise
};

// Pearson correlation; 0 when either vector has zero variance.
double PearsonCorrelation(std::span<const double> x, std::span<const double> y);

// Encodes each rater as a +1/-1 vector over the pooled task set (+1 = chose
// the candidate), scores raters by mean correlation with every other rater
// and drops the `drop_count` lowest (ties by rater id). Responses of one
// rater across batches are pooled; all raters must cover the same tasks.
// Throws Error with fewer than drop_count + 2 raters.
EvalResult FilterRaters(std::span<const RaterResponse> responses,
                        const AnswerKey &key, size_t drop_count = 5);

// Fraction of the retained raters' answers that pick the candidate.
EvalResult ComputeAccuracy(EvalResult scaffold,
                           std::span<const RaterResponse> responses,
                           const AnswerKey &key);

// 0.8564 -> "85.64%".
std::string FormatPercent(double fraction);

}  // namespace contingency

#endif  // CONTINGENCY_EVAL_H_
