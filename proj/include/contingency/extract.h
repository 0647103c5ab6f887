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

// Event mentions, event types and pair statistics.
//
// An event is a verb lemma with its (generalized) subject and object. Pair
// statistics are keyed by verb lemma only; arguments are kept for display.

#ifndef CONTINGENCY_EXTRACT_H_
#define CONTINGENCY_EXTRACT_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "contingency/document.h"
#include "contingency/execution.h"

namespace contingency {

struct TokenPosition {
  std::string doc_id;
  int sentence = 0;
  int token = 0;

  auto operator<=>(const TokenPosition &) const = default;
};

struct EventMention {
  std::string verb_lemma;
  std::optional<std::string> subject;  // generalized
  std::optional<std::string> object;   // generalized
  TokenPosition position;
  // Coreference chains with a mention headed at the subject token.
  std::set<std::string> protagonist_chains;

  bool operator==(const EventMention &) const = default;
};

struct EventType {
  std::string verb_lemma;
  std::map<std::string, int64_t> subject_dist;
  std::map<std::string, int64_t> object_dist;
  std::optional<std::string> rep_subject;
  std::optional<std::string> rep_object;
  int64_t frequency = 0;

  bool operator==(const EventType &) const = default;
};

using EventTypeTable = std::map<std::string, EventType>;

// Ordered pair of verb lemmas.
struct VerbPair {
  std::string first;
  std::string second;

  auto operator<=>(const VerbPair &) const = default;
};

struct EventPairStats {
  std::string genre;
  std::map<VerbPair, int64_t> counts;  // directional, every value >= 1
  int64_t total_pair_tokens = 0;

  void Add(const VerbPair &pair, int64_t n = 1);
  // Commutative and associative. Genres must agree (an empty genre adopts).
  void Merge(const EventPairStats &other);
  // Directional count; 0 when unobserved.
  int64_t Count(const std::string &first, const std::string &second) const;

  bool operator==(const EventPairStats &) const = default;
};

// One mention per token whose POS tag begins with "VB", in document order.
// Subjects come from nsubj/agent edges, objects from dobj/iobj/nsubjpass
// edges headed at the verb; when several qualify the lowest-index dependent
// wins.
std::vector<EventMention> ExtractEventMentions(const AnnotatedDocument &doc);

// Generalizes an argument span. When any token carries a named-entity label
// (other than empty or "O") that label is returned lowercased, preferring the
// head token's own label; otherwise the head token's lemma, lowercased.
// Returns nullopt for an empty span.
std::optional<std::string> GeneralizeArgument(std::span<const Token> tokens,
                                              size_t head_offset);

// Counts generalized arguments per verb and picks representatives by
// maximum count, ties broken by the lexicographically smaller argument.
EventTypeTable AggregateEventTypes(std::span<const EventMention> mentions);

// Adds `from` into `into` and recomputes representatives.
void MergeEventTypes(EventTypeTable &into, const EventTypeTable &from);

// Consecutive mentions of one document form an ordered pair. Pairs never
// cross document boundaries; self pairs are counted.
EventPairStats CollectAdjacentPairs(
    const std::string &genre,
    std::span<const std::vector<EventMention>> per_document);

// Consecutive mentions sharing a subject coreference chain form an ordered
// pair. After aggregation, pairs observed fewer than `min_pair_freq` times
// are removed and the token total is recomputed.
EventPairStats CollectProtagonistPairs(
    const std::string &genre,
    std::span<const std::vector<EventMention>> per_document,
    int64_t min_pair_freq = 5);

// Everything extraction produces for one genre.
struct GenreEvents {
  std::string genre;
  std::vector<std::vector<EventMention>> per_document;
  EventTypeTable types;
  int64_t total_events = 0;
  int64_t document_count = 0;
};

// Per-document extraction, parallel over documents under kParallel. Both
// policies produce identical results.
GenreEvents ExtractGenre(const std::string &genre,
                         std::span<const AnnotatedDocument *const> docs,
                         Execution policy = Execution::kParallel);

}  // namespace contingency

#endif  // CONTINGENCY_EXTRACT_H_
