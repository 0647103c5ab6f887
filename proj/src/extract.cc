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

#include "contingency/extract.h"

#include <algorithm>
#include <cctype>
#include <utility>

#include "contingency/error.h"

namespace contingency {
namespace {

bool IsSubjectRelation(const std::string &rel) {
  return rel == "nsubj" || rel == "agent";
}

bool IsObjectRelation(const std::string &rel) {
  return rel == "dobj" || rel == "iobj" || rel == "nsubjpass";
}

// Modifiers folded into an argument span (multi-word names and nouns).
bool IsSpanRelation(const std::string &rel) {
  return rel == "compound" || rel == "nn" || rel == "name";
}

bool HasEntityLabel(const Token &t) { return !t.ner.empty() && t.ner != "O"; }

std::string Lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::optional<std::string> ArgumentOf(const Sentence &sent, int dependent) {
  std::vector<int> indices{dependent};
  for (const auto &e : sent.deps) {
    if (e.head == dependent && IsSpanRelation(e.relation)) {
      indices.push_back(e.dependent);
    }
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  std::vector<Token> tokens;
  size_t head_offset = 0;
  for (int i : indices) {
    if (i == dependent) head_offset = tokens.size();
    tokens.push_back(sent.tokens[i]);
  }
  return GeneralizeArgument(tokens, head_offset);
}

std::optional<std::string> Representative(
    const std::map<std::string, int64_t> &dist) {
  std::optional<std::string> best;
  int64_t best_count = 0;
  // The map iterates in lexicographic order, so a strict comparison keeps the
  // smaller argument on ties.
  for (const auto &[arg, count] : dist) {
    if (count > best_count) {
      best = arg;
      best_count = count;
    }
  }
  return best;
}

void RecomputeRepresentatives(EventType &type) {
  type.rep_subject = Representative(type.subject_dist);
  type.rep_object = Representative(type.object_dist);
}

void AddMention(EventTypeTable &table, const EventMention &m) {
  EventType &type = table[m.verb_lemma];
  type.verb_lemma = m.verb_lemma;
  ++type.frequency;
  if (m.subject) ++type.subject_dist[*m.subject];
  if (m.object) ++type.object_dist[*m.object];
}

}  // namespace

void EventPairStats::Add(const VerbPair &pair, int64_t n) {
  if (n <= 0) return;
  counts[pair] += n;
  total_pair_tokens += n;
}

void EventPairStats::Merge(const EventPairStats &other) {
  if (genre.empty()) {
    genre = other.genre;
  } else if (!other.genre.empty() && other.genre != genre) {
    throw Error("cannot merge pair statistics of genre '" + other.genre +
                "' into genre '" + genre + "'");
  }
  for (const auto &[pair, n] : other.counts) Add(pair, n);
}

int64_t EventPairStats::Count(const std::string &first,
                              const std::string &second) const {
  auto it = counts.find(VerbPair{first, second});
  return it == counts.end() ? 0 : it->second;
}

std::optional<std::string> GeneralizeArgument(std::span<const Token> tokens,
                                              size_t head_offset) {
  if (tokens.empty()) return std::nullopt;
  head_offset = std::min(head_offset, tokens.size() - 1);
  const Token &head = tokens[head_offset];
  if (HasEntityLabel(head)) return Lowercase(head.ner);
  for (const auto &t : tokens) {
    if (HasEntityLabel(t)) return Lowercase(t.ner);
  }
  return Lowercase(head.lemma);
}

std::vector<EventMention> ExtractEventMentions(const AnnotatedDocument &doc) {
  std::map<std::pair<int, int>, std::set<std::string>> chains_at;
  for (const auto &chain : doc.coref_chains) {
    for (const auto &m : chain.mentions) {
      chains_at[{m.sentence, m.token}].insert(chain.chain_id);
    }
  }

  std::vector<EventMention> mentions;
  for (size_t s = 0; s < doc.sentences.size(); ++s) {
    const Sentence &sent = doc.sentences[s];
    for (const Token &tok : sent.tokens) {
      if (tok.pos.rfind("VB", 0) != 0) continue;
      int subject = -1;
      int object = -1;
      for (const auto &e : sent.deps) {
        if (e.head != tok.index) continue;
        if (IsSubjectRelation(e.relation) &&
            (subject < 0 || e.dependent < subject)) {
          subject = e.dependent;
        } else if (IsObjectRelation(e.relation) &&
                   (object < 0 || e.dependent < object)) {
          object = e.dependent;
        }
      }
      EventMention m;
      m.verb_lemma = Lowercase(tok.lemma);
      m.position = {doc.doc_id, static_cast<int>(s), tok.index};
      if (subject >= 0) {
        m.subject = ArgumentOf(sent, subject);
        auto it = chains_at.find({static_cast<int>(s), subject});
        if (it != chains_at.end()) m.protagonist_chains = it->second;
      }
      if (object >= 0) m.object = ArgumentOf(sent, object);
      mentions.push_back(std::move(m));
    }
  }
  return mentions;
}

EventTypeTable AggregateEventTypes(std::span<const EventMention> mentions) {
  EventTypeTable table;
  for (const auto &m : mentions) AddMention(table, m);
  for (auto &[verb, type] : table) RecomputeRepresentatives(type);
  return table;
}

void MergeEventTypes(EventTypeTable &into, const EventTypeTable &from) {
  for (const auto &[verb, src] : from) {
    EventType &dst = into[verb];
    dst.verb_lemma = verb;
    dst.frequency += src.frequency;
    for (const auto &[arg, n] : src.subject_dist) dst.subject_dist[arg] += n;
    for (const auto &[arg, n] : src.object_dist) dst.object_dist[arg] += n;
    RecomputeRepresentatives(dst);
  }
}

EventPairStats CollectAdjacentPairs(
    const std::string &genre,
    std::span<const std::vector<EventMention>> per_document) {
  EventPairStats stats;
  stats.genre = genre;
  for (const auto &mentions : per_document) {
    for (size_t i = 0; i + 1 < mentions.size(); ++i) {
      stats.Add({mentions[i].verb_lemma, mentions[i + 1].verb_lemma});
    }
  }
  return stats;
}

EventPairStats CollectProtagonistPairs(
    const std::string &genre,
    std::span<const std::vector<EventMention>> per_document,
    int64_t min_pair_freq) {
  EventPairStats raw;
  raw.genre = genre;
  for (const auto &mentions : per_document) {
    // chain -> verb of the previous event in that chain
    std::map<std::string, const std::string *> last;
    for (const auto &m : mentions) {
      for (const auto &chain : m.protagonist_chains) {
        auto [it, inserted] = last.try_emplace(chain, &m.verb_lemma);
        if (!inserted) {
          raw.Add({*it->second, m.verb_lemma});
          it->second = &m.verb_lemma;
        }
      }
    }
  }
  EventPairStats filtered;
  filtered.genre = genre;
  for (const auto &[pair, n] : raw.counts) {
    if (n >= min_pair_freq) filtered.Add(pair, n);
  }
  return filtered;
}

GenreEvents ExtractGenre(const std::string &genre,
                         std::span<const AnnotatedDocument *const> docs,
                         Execution policy) {
  for (const auto *doc : docs) {
    if (doc->genre != genre) {
      throw Error("document '" + doc->doc_id + "' has genre '" + doc->genre +
                  "', expected '" + genre + "'");
    }
  }
  GenreEvents out;
  out.genre = genre;
  out.document_count = static_cast<int64_t>(docs.size());
  out.per_document.resize(docs.size());
  std::vector<EventTypeTable> partial(docs.size());

  const auto n = static_cast<int64_t>(docs.size());
  if (policy == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (int64_t i = 0; i < n; ++i) {
      out.per_document[i] = ExtractEventMentions(*docs[i]);
      partial[i] = AggregateEventTypes(out.per_document[i]);
    }
  } else {
    for (int64_t i = 0; i < n; ++i) {
      out.per_document[i] = ExtractEventMentions(*docs[i]);
      partial[i] = AggregateEventTypes(out.per_document[i]);
    }
  }
  for (int64_t i = 0; i < n; ++i) {
    MergeEventTypes(out.types, partial[i]);
    out.total_events += static_cast<int64_t>(out.per_document[i].size());
  }
  return out;
}

}  // namespace contingency
