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

#include "contingency/ranked_pair.h"

namespace contingency {

DisplayEvent DisplayEventFor(const std::string &verb,
                             const EventTypeTable &types) {
  DisplayEvent e{verb, std::nullopt, std::nullopt};
  auto it = types.find(verb);
  if (it != types.end()) {
    e.subject = it->second.rep_subject;
    e.object = it->second.rep_object;
  }
  return e;
}

std::vector<RankedPair> AttachRepresentatives(
    std::span<const ScoredPair> ranked, const EventTypeTable &types) {
  std::vector<RankedPair> out;
  out.reserve(ranked.size());
  int rank = 1;
  for (const auto &p : ranked) {
    out.push_back({rank++, p.measure, DisplayEventFor(p.first, types),
                   DisplayEventFor(p.second, types), p.score});
  }
  return out;
}

}  // namespace contingency
