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

#ifndef CONTINGENCY_INGEST_H_
#define CONTINGENCY_INGEST_H_

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "contingency/document.h"

namespace contingency {

// Removes speaker cues and dialogue from a plain-text screenplay.
//
// The description indent is the smallest indentation of any non-blank line.
// A cue is a line indented past it whose content is an upper-case name,
// optionally followed by a parenthetical (text may trail the parenthetical
// when a layout has been flattened onto one line). The block runs through
// the following non-blank lines that are also indented past the description
// indent. Everything else, blank lines included, is kept in order.
std::string ExciseDialog(std::string_view screenplay);

// Parses one serialized document (one line of the annotation corpus) and
// checks every index invariant. Throws LoadError for schema violations and
// ValidationError for out-of-range or inconsistent indices.
AnnotatedDocument LoadDocument(std::string_view serialized);

// Inverse of LoadDocument. Produces a single line without a trailing newline.
std::string SerializeDocument(const AnnotatedDocument &doc);

// Checks the structural invariants of a document built in memory.
void ValidateDocument(const AnnotatedDocument &doc);

struct Corpus {
  std::vector<AnnotatedDocument> documents;

  // Sorted, distinct genre tags.
  std::vector<std::string> Genres() const;
  // Documents of one genre in corpus order.
  std::vector<const AnnotatedDocument *> ByGenre(std::string_view genre) const;
};

// Reads one document per non-blank line. Lines are parsed in parallel;
// the first failing line (in file order) is reported. Rejects duplicate ids.
Corpus LoadCorpus(std::istream &in, std::string_view source_name);
Corpus LoadCorpusFile(const std::filesystem::path &path);

// A screenplay after dialog excision.
struct ExcisedScreenplay {
  std::string doc_id;
  std::string genre;  // name of the containing subdirectory, may be empty
  std::string text;
};

// Excises every *.txt file under `dir`. Files in a subdirectory take the
// subdirectory name as their genre. Output is sorted by relative path.
std::vector<ExcisedScreenplay> ExciseDirectory(
    const std::filesystem::path &dir);

}  // namespace contingency

#endif  // CONTINGENCY_INGEST_H_
