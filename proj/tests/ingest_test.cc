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
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <doctest.h>

#include "contingency/artifacts.h"
#include "contingency/error.h"
#include "contingency/ingest.h"
#include "support/synthetic.h"
#include "support/temp_dir.h"

namespace contingency {
namespace {

const std::string kData = CONTINGENCY_DATA_DIR;

std::set<std::string> NonBlankLines(const std::string &text) {
  std::set<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t") != std::string::npos) out.insert(line);
  }
  return out;
}

constexpr const char *kOneSentence =
    R"({"docId":"d1","genre":"action","sentences":[{"tokens":[)"
    R"({"index":0,"surface":"Quail","lemma":"Quail","pos":"NNP","ner":"PERSON"},)"
    R"({"index":1,"surface":"sits","lemma":"sit","pos":"VBZ","ner":"O"}],)"
    R"("deps":[{"head":1,"dependent":0,"relation":"nsubj"}]}],)"
    R"("coref":[{"chainId":"quail","mentions":[{"sentence":0,"token":0}]}]})";

std::string FiveTokensWithEdgeTo(int dependent) {
  std::string tokens;
  for (int i = 0; i < 5; ++i) {
    if (i > 0) tokens += ",";
    tokens += "{\"index\":" + std::to_string(i) +
              R"(,"surface":"w","lemma":"w","pos":"NN","ner":"O"})";
  }
  return R"({"docId":"bad-edge","genre":"action","sentences":[{"tokens":[)" +
         tokens + R"(],"deps":[{"head":1,"dependent":)" +
         std::to_string(dependent) + R"(,"relation":"dobj"}]}],"coref":[]})";
}

TEST_CASE("speaker cue with a flattened parenthetical is excised") {
  std::string raw = ReadFile(kData + "/fixtures/bedroom_screenplay.txt");
  std::string out = ExciseDialog(raw);
  CHECK(out.find("Tick, tock") == std::string::npos);
  CHECK(out.find("CLOCK") == std::string::npos);
  CHECK(out.find("Time to get up") == std::string::npos);
  CHECK(out.find("Quail reaches out and shuts the clock off.") !=
        std::string::npos);
  CHECK(out == ReadFile(kData + "/fixtures/bedroom_description.txt"));
}

TEST_CASE("text without dialogue is unchanged") {
  const std::string text =
      "EXT. MARS - DAY\n\nThe rover crawls over the dunes.\n"
      "  It stops near a crater.\n";
  CHECK(ExciseDialog(text) == text);
  CHECK(ExciseDialog("") == "");
}

TEST_CASE("description paragraphs survive between dialogue blocks") {
  const std::string raw =
      "The hall is dark. A door creaks.\n"
      "Footsteps approach.\n"
      "\n"
      "              MELINA\n"
      "        (whispering)\n"
      "     Stay behind me.\n"
      "     And keep quiet.\n"
      "\n"
      "Melina draws her gun and edges forward.\n"
      "\n"
      "              QUAIL\n"
      "     Where are we going?\n"
      "\n"
      "A guard rounds the corner. Quail ducks.\n";
  const std::set<std::string> expected = {
      "The hall is dark. A door creaks.",
      "Footsteps approach.",
      "Melina draws her gun and edges forward.",
      "A guard rounds the corner. Quail ducks.",
  };
  std::string out = ExciseDialog(raw);
  CHECK(NonBlankLines(out) == expected);
  // Retained lines keep their order.
  CHECK(out.find("Footsteps") < out.find("Melina draws"));
  CHECK(out.find("Melina draws") < out.find("A guard"));
}

TEST_CASE("lower-case and mixed lines indented past the margin are kept") {
  const std::string raw =
      "Quail runs.\n"
      "        CUT TO:\n"
      "        he looks back\n"
      "        Later, in the car.\n";
  CHECK(ExciseDialog(raw) == raw);
}

TEST_CASE("tabs count as indentation") {
  const std::string raw = "Quail runs.\n\t\tRICHTER\n\tCome back!\n\nHe stops.";
  CHECK(ExciseDialog(raw) == "Quail runs.\n\nHe stops.");
}

TEST_CASE("excision is idempotent") {
  std::mt19937_64 rng(7);
  const char *pieces[] = {"The door opens.", "  QUAIL", "    Hello there.",
                          "", "        KRISTEN (V.O.)", "  softly",
                          "He waits.", "      CUT TO:", "\tRICHTER",
                          "   (beat)Move!"};
  for (int round = 0; round < 200; ++round) {
    std::string raw;
    int n = std::uniform_int_distribution<int>(0, 12)(rng);
    for (int i = 0; i < n; ++i) {
      raw += pieces[std::uniform_int_distribution<int>(0, 9)(rng)];
      raw += '\n';
    }
    std::string once = ExciseDialog(raw);
    CHECK(ExciseDialog(once) == once);
  }
  std::string fixture = ReadFile(kData + "/fixtures/bedroom_screenplay.txt");
  CHECK(ExciseDialog(ExciseDialog(fixture)) == ExciseDialog(fixture));
}

TEST_CASE("a valid one-sentence document loads") {
  AnnotatedDocument doc = LoadDocument(kOneSentence);
  CHECK(doc.doc_id == "d1");
  CHECK(doc.genre == "action");
  REQUIRE(doc.sentences.size() == 1);
  CHECK(doc.sentences[0].tokens.size() == 2);
  CHECK(doc.sentences[0].tokens[1].lemma == "sit");
  REQUIRE(doc.coref_chains.size() == 1);
  CHECK(doc.coref_chains[0].chain_id == "quail");
}

TEST_CASE("an out-of-range dependency index is a validation error") {
  CHECK_NOTHROW(LoadDocument(FiveTokensWithEdgeTo(4)));
  try {
    LoadDocument(FiveTokensWithEdgeTo(99));
    FAIL("expected a validation error");
  } catch (const ValidationError &e) {
    std::string what = e.what();
    CHECK(what.find("bad-edge") != std::string::npos);
    CHECK(what.find("sentence 0") != std::string::npos);
    CHECK(what.find("99") != std::string::npos);
  }
}

TEST_CASE("schema violations name the document and field") {
  std::string missing_lemma = kOneSentence;
  missing_lemma.replace(missing_lemma.find(R"("lemma":"sit",)"),
                        std::string(R"("lemma":"sit",)").size(), "");
  try {
    LoadDocument(missing_lemma);
    FAIL("expected a load error");
  } catch (const LoadError &e) {
    std::string what = e.what();
    CHECK(what.find("'d1'") != std::string::npos);
    CHECK(what.find("sentences[0].tokens[1].lemma") != std::string::npos);
  }
  CHECK_THROWS_AS(LoadDocument("not json"), LoadError);
  CHECK_THROWS_AS(LoadDocument(R"({"docId":"x","genre":"","sentences":[],)"
                               R"("coref":[]})"),
                  Error);
}

TEST_CASE("coreference mentions must point at existing tokens") {
  std::string bad = kOneSentence;
  bad.replace(bad.find(R"("token":0)"), 9, R"("token":7)");
  CHECK_THROWS_AS(LoadDocument(bad), ValidationError);
  std::string empty_chain = kOneSentence;
  empty_chain.replace(empty_chain.find(R"([{"sentence":0,"token":0}])"),
                      26, "[]");
  CHECK_THROWS_AS(LoadDocument(empty_chain), ValidationError);
}

TEST_CASE("the annotated bedroom sentence has two verbs") {
  Corpus corpus = LoadCorpusFile(kData + "/fixtures/bedroom_annotated.jsonl");
  REQUIRE(corpus.documents.size() == 1);
  const Sentence &s = corpus.documents[0].sentences[0];
  std::vector<std::string> verbs;
  for (const auto &t : s.tokens) {
    if (t.pos.rfind("VB", 0) == 0) verbs.push_back(t.surface);
  }
  CHECK(verbs == std::vector<std::string>{"reaches", "shuts"});
}

TEST_CASE("serialization round-trips and keeps every sentence") {
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    auto corpus = testing::MakeSyntheticCorpus(seed);
    for (const auto &doc : corpus.documents) {
      std::string line = SerializeDocument(doc);
      CHECK(line.find('\n') == std::string::npos);
      AnnotatedDocument back = LoadDocument(line);
      CHECK(back == doc);
      CHECK(back.sentences.size() == doc.sentences.size());
      CHECK(SerializeDocument(back) == line);
    }
  }
}

TEST_CASE("corpus loading reports the failing line and duplicate ids") {
  std::string good = SerializeDocument(LoadDocument(kOneSentence));
  {
    std::istringstream in(good + "\n\n" + FiveTokensWithEdgeTo(50) + "\n");
    try {
      LoadCorpus(in, "corpus.jsonl");
      FAIL("expected an error");
    } catch (const ValidationError &e) {
      CHECK(std::string(e.what()).rfind("corpus.jsonl:3: ", 0) == 0);
    }
  }
  {
    std::istringstream in(good + "\n" + good + "\n");
    CHECK_THROWS_AS(LoadCorpus(in, "dup.jsonl"), ValidationError);
  }
}

TEST_CASE("corpus keeps file order and groups documents by genre") {
  auto a = testing::MakeSyntheticCorpus(3).documents;
  auto b = testing::MakeSyntheticCorpus(4).documents;
  std::string text;
  std::vector<std::string> ids;
  for (auto *docs : {&a, &b}) {
    for (auto &d : *docs) {
      d.genre = docs == &a ? "romance" : "action";
      text += SerializeDocument(d) + "\n";
      ids.push_back(d.doc_id);
    }
  }
  std::istringstream in(text);
  Corpus corpus = LoadCorpus(in, "mem");
  std::vector<std::string> loaded;
  for (const auto &d : corpus.documents) loaded.push_back(d.doc_id);
  CHECK(loaded == ids);
  CHECK(corpus.Genres() == std::vector<std::string>{"action", "romance"});
  CHECK(corpus.ByGenre("romance").size() == a.size());
  CHECK(corpus.ByGenre("action").size() == b.size());
  CHECK(corpus.ByGenre("comedy").empty());
}

TEST_CASE("excising a directory tags genres by subdirectory") {
  testing::TempDir tmp;
  WriteFile(tmp / "action/b.txt", "He runs.\n      GUARD\n   Halt!\n");
  WriteFile(tmp / "action/a.txt", "She waits.\n");
  WriteFile(tmp / "romance/c.txt", "They dance.\n");
  WriteFile(tmp / "notes.md", "ignored\n");
  auto out = ExciseDirectory(tmp.path());
  REQUIRE(out.size() == 3);
  CHECK(out[0].doc_id == "action/a");
  CHECK(out[0].genre == "action");
  CHECK(out[1].doc_id == "action/b");
  CHECK(out[1].text == "He runs.\n");
  CHECK(out[2].genre == "romance");
}

}  // namespace
}  // namespace contingency
