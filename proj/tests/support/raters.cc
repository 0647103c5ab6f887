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

#include "support/raters.h"

#include <random>

#include <fmt/format.h>

namespace contingency::testing {
namespace {

// Lowercase alphabetic name: search patterns accept letters only.
std::string Word(char prefix, size_t i) {
  std::string w(1, prefix);
  for (int k = 0; k < 3; ++k) {
    w += static_cast<char>('a' + i % 26);
    i /= 26;
  }
  return w;
}

RaterResponse Blank(const std::string &id) {
  return RaterResponse{id, "all", {}};
}

}  // namespace

std::vector<RefinementRecord> MakeKeptRecords(size_t n) {
  std::vector<RefinementRecord> out;
  for (size_t i = 0; i < n; ++i) {
    const std::string a = Word('a', i);
    const std::string b = Word('b', i);
    const std::string c = Word('c', i);
    RankedPair pcep{static_cast<int>(i + 1), Measure::kCp,
                    DisplayEvent{a, "person", std::nullopt},
                    DisplayEvent{b, "person", "door"}, 1.0};
    out.push_back(RefinementRecord{
        .pcep = pcep,
        .rep_second = DisplayEvent{c, std::nullopt, "window"},
        .pcep_pattern = BuildSearchPattern({a, b}),
        .rep_pattern = BuildSearchPattern({a, c}),
        .pcep_hits = 1000,
        .rep_hits = 1,
        .decision = Decision::kKeep,
    });
  }
  return out;
}

RaterPanel MakeRaterPanel(const AnswerKey &key, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution mostly_right(0.75);
  std::bernoulli_distribution coin(0.5);

  std::vector<bool> base;
  for (size_t i = 0; i < key.size(); ++i) base.push_back(mostly_right(rng));

  RaterPanel panel;
  for (int r = 0; r < 10; ++r) {
    RaterResponse resp = Blank(fmt::format("consistent-{:02}", r));
    size_t i = 0;
    for (const auto &[task, side] : key) {
      bool right = base[i];
      if (i == static_cast<size_t>(r) % key.size()) right = !right;
      resp.answers[task] = right ? side : Opposite(side);
      ++i;
    }
    panel.responses.push_back(std::move(resp));
  }
  for (int r = 0; r < 5; ++r) {
    RaterResponse resp = Blank(fmt::format("noisy-{:02}", r));
    for (const auto &[task, side] : key) {
      resp.answers[task] = coin(rng) ? side : Opposite(side);
    }
    panel.noisy.insert(resp.rater_id);
    panel.responses.push_back(std::move(resp));
  }
  return panel;
}

RaterResponse MakeRater(const std::string &id, const AnswerKey &key,
                        size_t correct) {
  RaterResponse resp = Blank(id);
  size_t i = 0;
  for (const auto &[task, side] : key) {
    resp.answers[task] = i++ < correct ? side : Opposite(side);
  }
  return resp;
}

}  // namespace contingency::testing
