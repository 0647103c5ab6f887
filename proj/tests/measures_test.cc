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

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <doctest.h>

#include "contingency/error.h"
#include "contingency/extract.h"
#include "contingency/measures.h"

namespace contingency {
namespace {

EventPairStats Stats(std::map<VerbPair, int64_t> counts) {
  EventPairStats s{"action", {}, 0};
  for (const auto &[pair, n] : counts) s.Add(pair, n);
  return s;
}

// [a, b, a, b] as one document.
CorpusCounts Abab() {
  return CorpusCounts({{"a", 2}, {"b", 2}},
                      Stats({{{"a", "b"}, 2}, {{"b", "a"}, 1}}));
}

TEST_CASE("pmi on an alternating sequence") {
  CorpusCounts c = Abab();
  CHECK(c.total_events() == 4);
  REQUIRE(Pmi("a", "b", c).has_value());
  CHECK(*Pmi("a", "b", c) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(*Pmi("a", "b", c) == doctest::Approx(1.3863).epsilon(1e-4));
}

TEST_CASE("pmi is zero under independence and symmetric") {
  CorpusCounts c({{"a", 2}, {"b", 2}, {"c", 2}, {"d", 2}},
                 Stats({{{"a", "b"}, 1}, {{"c", "d"}, 15}}));
  CHECK(std::abs(*Pmi("a", "b", c)) < 1e-12);
  CHECK(*Pmi("a", "b", c) == *Pmi("b", "a", c));
  CHECK(*Pmi("c", "d", c) == *Pmi("d", "c", c));
}

TEST_CASE("pairs never observed together are not scored") {
  CorpusCounts c({{"a", 1}, {"b", 1}, {"c", 1}},
                 Stats({{{"a", "b"}, 1}, {{"b", "c"}, 1}}));
  CHECK_FALSE(Pmi("a", "c", c).has_value());
  CHECK_FALSE(CausalPotential("a", "c", c).has_value());
  CHECK_FALSE(Pmi("a", "zzz", c).has_value());
}

TEST_CASE("causal potential adds the directional log ratio") {
  CorpusCounts c = Abab();
  CHECK(*CausalPotential("a", "b", c) ==
        doctest::Approx(std::log(4.0) + std::log(2.0)).epsilon(1e-12));
  CHECK(*CausalPotential("a", "b", c) == doctest::Approx(2.0794).epsilon(1e-4));

  CorpusCounts even({{"a", 3}, {"b", 3}},
                    Stats({{{"a", "b"}, 2}, {{"b", "a"}, 2}}));
  CHECK(*CausalPotential("a", "b", even) == *Pmi("a", "b", even));

  CorpusCounts one_way({{"a", 3}, {"b", 3}}, Stats({{{"a", "b"}, 3}}));
  CHECK(*CausalPotential("a", "b", one_way) - *Pmi("a", "b", one_way) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(*CausalPotential("b", "a", one_way) - *Pmi("a", "b", one_way) ==
        doctest::Approx(-std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("a self pair uses its single directional count") {
  CorpusCounts c({{"slow", 2}}, Stats({{{"slow", "slow"}, 1}}));
  CHECK(*Pmi("slow", "slow", c) == doctest::Approx(0.0));
  CHECK(*CausalPotential("slow", "slow", c) == *Pmi("slow", "slow", c));
}

TEST_CASE("bigram probability is normalized by the history count") {
  CorpusCounts c = Abab();
  CHECK(*BigramProbability("a", "b", c, 1) == doctest::Approx(1.0));
  // b is followed by something once (the final b ends the document).
  CHECK(*BigramProbability("b", "a", c, 1) == doctest::Approx(1.0));
  CHECK(c.HistoryCount("b") == 1);

  CorpusCounts follows({{"a", 3}, {"b", 3}, {"c", 1}},
                       Stats({{{"a", "b"}, 3}, {{"b", "c"}, 1},
                              {{"b", "a"}, 2}}));
  CHECK(*BigramProbability("a", "b", follows, 1) == 1.0);
  CHECK(*BigramProbability("b", "c", follows, 1) ==
        doctest::Approx(1.0 / 3.0));
}

TEST_CASE("bigram joint threshold") {
  CorpusCounts c({{"a", 40}, {"b", 40}},
                 Stats({{{"a", "b"}, 19}, {{"b", "a"}, 20}}));
  CHECK_FALSE(BigramProbability("a", "b", c).has_value());
  CHECK(BigramProbability("b", "a", c).has_value());
  CHECK(BigramProbability("a", "b", c, 19).has_value());
  CHECK_FALSE(BigramProbability("x", "y", c, 0).has_value());
}

TEST_CASE("protagonist causal potential") {
  CorpusCounts counts({{"run", 10}, {"jump", 10}, {"fall", 5}},
                      Stats({{{"run", "jump"}, 1}}));
  EventPairStats protag = Stats({{{"run", "jump"}, 6}, {{"jump", "run"}, 2}});
  auto cp = ProtagonistCp("run", "jump", protag, counts);
  REQUIRE(cp.has_value());
  const double pmi_term = std::log((8.0 / 8.0) / (0.4 * 0.4));
  CHECK(*cp - pmi_term == doctest::Approx(std::log(3.0)).epsilon(1e-12));

  EventPairStats even = Stats({{{"run", "jump"}, 5}, {{"jump", "run"}, 5}});
  CHECK(*ProtagonistCp("run", "jump", even, counts) ==
        doctest::Approx(pmi_term).epsilon(1e-12));
  CHECK_FALSE(ProtagonistCp("run", "fall", protag, counts).has_value());
}

TEST_CASE("scoring every candidate") {
  CorpusCounts c({{"a", 4}, {"b", 3}, {"c", 2}},
                 Stats({{{"a", "b"}, 2}, {{"b", "a"}, 1}, {{"b", "c"}, 2},
                        {{"a", "a"}, 1}}));
  auto pmi = ScoreAll(Measure::kPmi, c);
  REQUIRE(pmi.size() == 3);  // (a,a) (a,b) (b,c)
  for (const auto &p : pmi) {
    CHECK(p.first <= p.second);
    CHECK_FALSE(p.ordered);
    CHECK(std::isfinite(p.score));
  }
  auto cp = ScoreAll(Measure::kCp, c);
  CHECK(cp.size() == 4);
  for (const auto &p : cp) CHECK(p.ordered);

  CHECK(ScoreAll(Measure::kBigram, c).empty());
  CHECK(ScoreAll(Measure::kBigram, c, {.bigram_min_joint = 2}).size() == 2);

  for (Measure m :
       {Measure::kPmi, Measure::kCp, Measure::kBigram, Measure::kProtagCp}) {
    ScoreOptions o{.bigram_min_joint = 1};
    CHECK(ScoreAll(m, c, o, Execution::kSerial) ==
          ScoreAll(m, c, o, Execution::kParallel));
  }
}

TEST_CASE("ranking keeps the top k with deterministic ties") {
  std::vector<ScoredPair> scored = {
      {"slam", "shut", Measure::kCp, 2.11, true},
      {"know", "mean", Measure::kCp, 2.18, true},
      {"come", "rest", Measure::kCp, 2.12, true},
  };
  auto top = RankTopK(scored, 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0].first == "know");
  CHECK(top[1].first == "come");
  CHECK(RankTopK(scored, 10).size() == 3);
  CHECK(RankTopK(scored, 0).empty());

  std::vector<ScoredPair> tied = {
      {"unlock", "enter", Measure::kCp, 2.11, true},
      {"slam", "shut", Measure::kCp, 2.11, true},
      {"slam", "chuckle", Measure::kCp, 2.11, true},
  };
  auto ranked = RankTopK(tied);
  CHECK(ranked[0].second == "chuckle");
  CHECK(ranked[1].second == "shut");
  CHECK(ranked[2].first == "unlock");
  std::reverse(tied.begin(), tied.end());
  CHECK(RankTopK(tied) == ranked);
}

TEST_CASE("measure names") {
  for (Measure m :
       {Measure::kPmi, Measure::kCp, Measure::kBigram, Measure::kProtagCp}) {
    CHECK(ParseMeasure(MeasureName(m)) == m);
  }
  CHECK(MeasureName(Measure::kProtagCp) == "protag-cp");
  CHECK_THROWS_AS(ParseMeasure("cosine"), Error);
}

TEST_CASE("event totals") {
  CorpusCounts c({{"a", 4}, {"b", 3}}, Stats({{{"a", "b"}, 1}}));
  CHECK(c.total_events() == 7);
  CHECK(c.EventFrequency("a") == 4);
  CHECK(c.EventFrequency("q") == 0);
  CHECK(c.HistoryCount("a") == 1);
  CHECK(c.HistoryCount("b") == 0);
}

}  // namespace
}  // namespace contingency
