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

// Random annotated corpora with their ground-truth event sequences.

#ifndef CONTINGENCY_TESTS_SUPPORT_SYNTHETIC_H_
#define CONTINGENCY_TESTS_SUPPORT_SYNTHETIC_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contingency/document.h"

namespace contingency::testing {

// What the generator intended for one event.
struct TruthEvent {
  std::string verb;
  std::optional<std::string> chain;  // coreference chain of the subject
};

struct SyntheticCorpus {
  std::string genre;
  std::vector<AnnotatedDocument> documents;
  std::vector<std::vector<TruthEvent>> truth;  // per document, in order
};

struct SyntheticOptions {
  int max_events = 50;     // total over the corpus
  int max_verbs = 10;      // distinct verb lemmas
  int max_documents = 4;
  int max_chains = 3;      // per document
};

// Events are spread over documents; a sentence holds one or two verbs
// sharing a subject, and may contain non-verb filler. Deterministic in seed.
SyntheticCorpus MakeSyntheticCorpus(uint64_t seed,
                                    const SyntheticOptions &options = {});

// A corpus with one document per verb sequence, no arguments, no chains.
SyntheticCorpus CorpusFromSequences(
    const std::string &genre,
    const std::vector<std::vector<std::string>> &sequences);

}  // namespace contingency::testing

#endif  // CONTINGENCY_TESTS_SUPPORT_SYNTHETIC_H_
