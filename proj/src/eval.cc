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

#include "contingency/eval.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "contingency/error.h"

namespace contingency {
namespace {

std::string Uppercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}

// rater -> task -> chosen side, pooled across batches.
std::map<std::string, std::map<std::string, Side>> PoolResponses(
    std::span<const RaterResponse> responses, const AnswerKey &key) {
  std::map<std::string, std::map<std::string, Side>> pooled;
  for (const auto &r : responses) {
    auto &answers = pooled[r.rater_id];
    for (const auto &[task, side] : r.answers) {
      if (!key.contains(task)) {
        throw Error(fmt::format("rater '{}' answered unknown task '{}'",
                                r.rater_id, task));
      }
      auto [it, inserted] = answers.emplace(task, side);
      if (!inserted && it->second != side) {
        throw Error(fmt::format("rater '{}' gave conflicting answers for "
                                "task '{}'", r.rater_id, task));
      }
    }
  }
  return pooled;
}

}  // namespace

char SideLetter(Side s) { return s == Side::kA ? 'A' : 'B'; }

Side ParseSide(std::string_view s) {
  if (s == "A" || s == "a") return Side::kA;
  if (s == "B" || s == "b") return Side::kB;
  throw Error("invalid side '" + std::string(s) + "' (expected A or B)");
}

std::string_view InstructionsName(Instructions i) {
  return i == Instructions::kOrderMatters ? "order-matters" : "order-ignored";
}

Instructions ParseInstructions(std::string_view name) {
  if (name == "order-matters") return Instructions::kOrderMatters;
  if (name == "order-ignored") return Instructions::kOrderIgnored;
  throw Error("unknown instructions variant '" + std::string(name) + "'");
}

std::string_view InstructionsText(Instructions i) {
  if (i == Instructions::kOrderMatters) {
    return "Each item shows two event pairs. Choose the pair whose events are "
           "more likely to happen one after the other, in the order shown.";
  }
  return "Each item shows two event pairs. Choose the pair whose events are "
         "more likely to happen together. The order of the events within a "
         "pair does not matter.";
}

std::string RenderEvent(const DisplayEvent &event, bool show_arguments) {
  if (!show_arguments) return event.verb;
  std::string out;
  if (event.subject) out += *event.subject + " ";
  out += Uppercase(event.verb);
  if (event.object) out += " " + *event.object;
  return out;
}

std::string RenderPair(const DisplayEvent &first, const DisplayEvent &second,
                       bool show_arguments) {
  return RenderEvent(first, show_arguments) + " - " +
         RenderEvent(second, show_arguments);
}

std::vector<HitBatch> GenerateChoiceTasks(
    std::span<const RefinementRecord> kept, uint64_t seed, bool order_matters,
    bool show_arguments, size_t batch_size) {
  if (kept.empty()) throw Error("no kept pairs to build choice tasks from");
  if (batch_size == 0) throw Error("batch size must be positive");

  std::mt19937_64 rng(seed);
  const Instructions instructions = order_matters
                                        ? Instructions::kOrderMatters
                                        : Instructions::kOrderIgnored;
  std::vector<HitBatch> batches;
  for (size_t i = 0; i < kept.size(); ++i) {
    if (i % batch_size == 0) {
      batches.push_back(
          {fmt::format("hit-{:02}", batches.size() + 1), {}, instructions});
    }
    const RefinementRecord &r = kept[i];
    std::string pcep = RenderPair(r.pcep.first, r.pcep.second, show_arguments);
    std::string rep = RenderPair(r.pcep.first, r.rep_second, show_arguments);
    if (pcep == rep) {
      throw Error("candidate and random pair render identically: " + pcep);
    }
    const Side side = (rng() >> 63) == 0 ? Side::kA : Side::kB;
    ChoiceTask task;
    task.task_id = fmt::format("task-{:04}", i + 1);
    task.batch_id = batches.back().batch_id;
    task.side_a = side == Side::kA ? pcep : rep;
    task.side_b = side == Side::kA ? rep : pcep;
    task.correct_side = side;
    task.order_matters = order_matters;
    task.show_arguments = show_arguments;
    batches.back().tasks.push_back(std::move(task));
  }
  return batches;
}

AnswerKey AnswerKeyOf(std::span<const HitBatch> batches) {
  AnswerKey key;
  for (const auto &b : batches) {
    for (const auto &t : b.tasks) key[t.task_id] = t.correct_side;
  }
  return key;
}

double PearsonCorrelation(std::span<const double> x,
                          std::span<const double> y) {
  if (x.size() != y.size()) throw Error("correlation of unequal lengths");
  const size_t n = x.size();
  if (n == 0) return 0.0;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

EvalResult FilterRaters(std::span<const RaterResponse> responses,
                        const AnswerKey &key, size_t drop_count) {
  auto pooled = PoolResponses(responses, key);
  const size_t needed = drop_count + 2;
  if (pooled.size() < needed) {
    throw Error(fmt::format("{} rater(s) given; filtering {} needs at least {}",
                            pooled.size(), drop_count, needed));
  }

  std::vector<std::string> task_ids;
  for (const auto &[task, side] : pooled.begin()->second) {
    task_ids.push_back(task);
  }
  std::vector<std::string> raters;
  std::vector<std::vector<double>> vectors;
  for (const auto &[rater, answers] : pooled) {
    if (answers.size() != task_ids.size() ||
        !std::equal(task_ids.begin(), task_ids.end(), answers.begin(),
                    [](const std::string &t, const auto &a) {
                      return t == a.first;
                    })) {
      throw Error(fmt::format("rater '{}' did not answer the same task set as "
                              "rater '{}'", rater, pooled.begin()->first));
    }
    std::vector<double> v;
    v.reserve(task_ids.size());
    for (const auto &[task, side] : answers) {
      v.push_back(side == key.at(task) ? 1.0 : -1.0);
    }
    raters.push_back(rater);
    vectors.push_back(std::move(v));
  }

  const size_t n = raters.size();
  std::vector<double> sum(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double r = PearsonCorrelation(vectors[i], vectors[j]);
      sum[i] += r;
      sum[j] += r;
    }
  }
  EvalResult result;
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (size_t i = 0; i < n; ++i) {
    result.mean_correlation[raters[i]] = sum[i] / static_cast<double>(n - 1);
  }
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    double sa = result.mean_correlation[raters[a]];
    double sb = result.mean_correlation[raters[b]];
    if (sa != sb) return sa < sb;
    return raters[a] < raters[b];
  });
  for (size_t k = 0; k < n; ++k) {
    (k < drop_count ? result.dropped_raters : result.retained_raters)
        .push_back(raters[order[k]]);
  }
  std::sort(result.dropped_raters.begin(), result.dropped_raters.end());
  std::sort(result.retained_raters.begin(), result.retained_raters.end());
  return result;
}

EvalResult ComputeAccuracy(EvalResult scaffold,
                           std::span<const RaterResponse> responses,
                           const AnswerKey &key) {
  auto pooled = PoolResponses(responses, key);
  int64_t correct = 0;
  int64_t total = 0;
  for (const auto &rater : scaffold.retained_raters) {
    auto it = pooled.find(rater);
    if (it == pooled.end()) continue;
    for (const auto &[task, side] : it->second) {
      ++total;
      if (side == key.at(task)) ++correct;
    }
  }
  if (total == 0) throw Error("no answers from retained raters");
  scaffold.correct_answers = correct;
  scaffold.total_answers = total;
  scaffold.accuracy = static_cast<double>(correct) / static_cast<double>(total);
  scaffold.precision = scaffold.accuracy;
  scaffold.recall = scaffold.accuracy;
  return scaffold;
}

std::string FormatPercent(double fraction) {
  return fmt::format("{:.2f}%", fraction * 100.0);
}

}  // namespace contingency
