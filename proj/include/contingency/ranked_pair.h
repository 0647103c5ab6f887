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

#ifndef CONTINGENCY_RANKED_PAIR_H_
#define CONTINGENCY_RANKED_PAIR_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contingency/extract.h"
#include "contingency/measures.h"

namespace contingency {

// A verb with its representative arguments, as shown to people.
struct DisplayEvent {
  std::string verb;
  std::optional<std::string> subject;
  std::optional<std::string> object;

  bool operator==(const DisplayEvent &) const = default;
};

DisplayEvent DisplayEventFor(const std::string &verb,
                             const EventTypeTable &types);

// One row of a ranked candidate list.
struct RankedPair {
  int rank = 0;  // 1-based
  Measure measure = Measure::kCp;
  DisplayEvent first;
  DisplayEvent second;
  double score = 0.0;

  VerbPair verbs() const { return {first.verb, second.verb}; }
  bool ordered() const { return measure != Measure::kPmi; }

  bool operator==(const RankedPair &) const = default;
};

std::vector<RankedPair> AttachRepresentatives(
    std::span<const ScoredPair> ranked, const EventTypeTable &types);

}  // namespace contingency

#endif  // CONTINGENCY_RANKED_PAIR_H_
