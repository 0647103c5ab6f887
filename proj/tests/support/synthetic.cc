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

#include "support/synthetic.h"

#include <algorithm>
#include <map>
#include <random>

#include <fmt/format.h>

namespace contingency::testing {
namespace {

constexpr const char *kVerbs[] = {"run",  "jump", "fall",  "open", "shoot",
                                  "look", "kiss", "enter", "hide", "wait"};
constexpr const char *kVerbTags[] = {"VB", "VBD", "VBZ", "VBG", "VBN", "VBP"};
constexpr const char *kNouns[] = {"door", "gun", "window", "car", "letter"};

struct Planned {
  TruthEvent truth;
  bool has_subject = false;
};

int Uniform(std::mt19937_64 &rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool Chance(std::mt19937_64 &rng, double p) {
  return std::bernoulli_distribution(p)(rng);
}

AnnotatedDocument BuildDocument(const std::string &doc_id,
                                const std::string &genre,
                                const std::vector<Planned> &events,
                                std::mt19937_64 &rng) {
  AnnotatedDocument doc{doc_id, genre, {}, {}};
  std::map<std::string, std::vector<MentionRef>> chains;

  for (size_t i = 0; i < events.size();) {
    // Two verbs share a sentence only when they share the subject.
    size_t verbs = 1;
    if (i + 1 < events.size() && events[i].has_subject &&
        events[i + 1].has_subject &&
        events[i].truth.chain == events[i + 1].truth.chain &&
        events[i].truth.chain.has_value() && Chance(rng, 0.4)) {
      verbs = 2;
    }
    Sentence s;
    auto add = [&](std::string surface, std::string lemma, std::string pos,
                   std::string ner = "") {
      int index = static_cast<int>(s.tokens.size());
      s.tokens.push_back({index, std::move(surface), std::move(lemma),
                          std::move(pos), std::move(ner)});
      return index;
    };
    if (Chance(rng, 0.3)) add("Then", "then", "RB");
    int subject = -1;
    if (events[i].has_subject) {
      if (events[i].truth.chain) {
        subject = add("He", "he", "PRP");
      } else if (Chance(rng, 0.5)) {
        subject = add("Guards", "guard", "NNS");
      } else {
        subject = add("Kim", "Kim", "NNP", "PERSON");
      }
    }
    int first_verb = -1;
    for (size_t k = 0; k < verbs; ++k) {
      const Planned &e = events[i + k];
      if (k > 0) {
        int cc = add("and", "and", "CC");
        s.deps.push_back({first_verb, cc, "cc"});
      }
      int v = add(e.truth.verb + "s", e.truth.verb,
                  kVerbTags[Uniform(rng, 0, 5)]);
      if (k == 0) first_verb = v;
      if (k > 0) s.deps.push_back({first_verb, v, "conj"});
      if (subject >= 0) {
        s.deps.push_back({v, subject, Chance(rng, 0.8) ? "nsubj" : "agent"});
      }
      if (Chance(rng, 0.5)) {
        int det = add("the", "the", "DT");
        int obj = add(kNouns[Uniform(rng, 0, 4)], "", "NN");
        s.tokens[obj].lemma = s.tokens[obj].surface;
        s.deps.push_back({obj, det, "det"});
        s.deps.push_back({v, obj, Chance(rng, 0.7) ? "dobj" : "iobj"});
      }
    }
    int dot = add(".", ".", ".");
    s.deps.push_back({first_verb, dot, "punct"});
    if (subject >= 0 && events[i].truth.chain) {
      chains[*events[i].truth.chain].push_back(
          {static_cast<int>(doc.sentences.size()), subject});
    }
    doc.sentences.push_back(std::move(s));
    i += verbs;
  }
  for (auto &[id, mentions] : chains) {
    doc.coref_chains.push_back({id, std::move(mentions)});
  }
  return doc;
}

}  // namespace

SyntheticCorpus MakeSyntheticCorpus(uint64_t seed,
                                    const SyntheticOptions &options) {
  std::mt19937_64 rng(seed);
  SyntheticCorpus corpus;
  corpus.genre = "synthetic";

  const int n_verbs = Uniform(rng, 2, std::min(options.max_verbs, 10));
  const int n_events = Uniform(rng, 2, options.max_events);
  const int n_docs = Uniform(rng, 1, options.max_documents);
  // A few frequent verbs make repeated pairs likely.
  const int hot = std::min(n_verbs, 3);

  std::vector<int> cuts;
  for (int d = 1; d < n_docs; ++d) cuts.push_back(Uniform(rng, 0, n_events));
  cuts.push_back(n_events);
  std::sort(cuts.begin(), cuts.end());

  int begin = 0;
  for (int d = 0; d < n_docs; ++d) {
    const int end = cuts[d];
    const int n_chains = Uniform(rng, 0, options.max_chains);
    std::vector<Planned> events;
    for (int e = begin; e < end; ++e) {
      Planned p;
      int v = Chance(rng, 0.5) ? Uniform(rng, 0, hot - 1)
                               : Uniform(rng, 0, n_verbs - 1);
      p.truth.verb = kVerbs[v];
      p.has_subject = Chance(rng, 0.85);
      if (p.has_subject && n_chains > 0 && Chance(rng, 0.8)) {
        p.truth.chain = fmt::format("c{}", Uniform(rng, 0, n_chains - 1));
      }
      events.push_back(std::move(p));
    }
    begin = end;

    std::vector<TruthEvent> truth;
    for (const auto &p : events) truth.push_back(p.truth);
    corpus.truth.push_back(std::move(truth));
    corpus.documents.push_back(BuildDocument(
        fmt::format("doc-{}-{}", seed, d), corpus.genre, events, rng));
  }
  return corpus;
}

SyntheticCorpus CorpusFromSequences(
    const std::string &genre,
    const std::vector<std::vector<std::string>> &sequences) {
  SyntheticCorpus corpus;
  corpus.genre = genre;
  std::mt19937_64 rng(0);
  for (size_t d = 0; d < sequences.size(); ++d) {
    std::vector<Planned> events;
    std::vector<TruthEvent> truth;
    for (const auto &verb : sequences[d]) {
      events.push_back({{verb, std::nullopt}, false});
      truth.push_back({verb, std::nullopt});
    }
    corpus.truth.push_back(std::move(truth));
    corpus.documents.push_back(
        BuildDocument(fmt::format("{}-{}", genre, d), genre, events, rng));
  }
  return corpus;
}

}  // namespace contingency::testing
