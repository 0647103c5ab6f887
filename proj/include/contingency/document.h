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

// In-memory form of a pre-annotated scene-description document. Indices are
// 0-based and local to their sentence.

#ifndef CONTINGENCY_DOCUMENT_H_
#define CONTINGENCY_DOCUMENT_H_

#include <string>
#include <vector>

namespace contingency {

struct Token {
  int index = 0;
  std::string surface;
  std::string lemma;
  std::string pos;
  std::string ner;  // empty when untagged

  bool operator==(const Token &) const = default;
};

struct DependencyEdge {
  int head = 0;
  int dependent = 0;
  std::string relation;

  bool operator==(const DependencyEdge &) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::vector<DependencyEdge> deps;

  bool operator==(const Sentence &) const = default;
};

// Points at the head token of one coreferring mention.
struct MentionRef {
  int sentence = 0;
  int token = 0;

  bool operator==(const MentionRef &) const = default;
};

struct CorefChain {
  std::string chain_id;
  std::vector<MentionRef> mentions;

  bool operator==(const CorefChain &) const = default;
};

struct AnnotatedDocument {
  std::string doc_id;
  std::string genre;
  std::vector<Sentence> sentences;
  std::vector<CorefChain> coref_chains;

  bool operator==(const AnnotatedDocument &) const = default;
};

}  // namespace contingency

#endif  // CONTINGENCY_DOCUMENT_H_
