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

#include "contingency/ingest.h"

#include <algorithm>
#include <exception>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "contingency/error.h"

namespace contingency {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Dialog excision

std::string_view StripCarriageReturn(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r';
  });
}

// Column of the first non-blank character; tabs advance to multiples of 8.
int Indent(std::string_view line) {
  int col = 0;
  for (char c : line) {
    if (c == ' ') {
      ++col;
    } else if (c == '\t') {
      col = (col / 8 + 1) * 8;
    } else {
      break;
    }
  }
  return col;
}

std::string_view Content(std::string_view line) {
  line = StripCarriageReturn(line);
  size_t begin = line.find_first_not_of(" \t");
  if (begin == std::string_view::npos) return {};
  size_t end = line.find_last_not_of(" \t");
  return line.substr(begin, end - begin + 1);
}

bool IsNameChar(unsigned char c) {
  return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == ' ' ||
         c == '.' || c == '\'' || c == '-' || c == '&' || c == '#' ||
         c >= 0x80;
}

// NAME, NAME (parenthetical), or NAME (parenthetical)trailing text.
bool IsSpeakerCue(std::string_view content) {
  size_t i = 0;
  bool has_letter = false;
  while (i < content.size() && IsNameChar(content[i])) {
    if (content[i] >= 'A' && content[i] <= 'Z') has_letter = true;
    ++i;
  }
  if (!has_letter) return false;
  unsigned char first = content[0];
  if (!((first >= 'A' && first <= 'Z') || (first >= '0' && first <= '9') ||
        first >= 0x80)) {
    return false;
  }
  if (i == content.size()) return true;
  if (content[i] != '(') return false;
  return content.find(')', i) != std::string_view::npos;
}

// ---------------------------------------------------------------------------
// Schema parsing

struct FieldContext {
  std::string doc_id;
};

[[noreturn]] void SchemaError(const FieldContext &ctx, const std::string &field,
                              const std::string &what) {
  throw LoadError(fmt::format("document '{}': field '{}': {}",
                              ctx.doc_id.empty() ? "<unknown>" : ctx.doc_id,
                              field, what));
}

const json &Member(const json &obj, const char *name, const FieldContext &ctx,
                   const std::string &path) {
  std::string field = path.empty() ? name : path + "." + name;
  if (!obj.is_object()) SchemaError(ctx, path, "expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) SchemaError(ctx, field, "missing");
  return *it;
}

std::string GetString(const json &obj, const char *name,
                      const FieldContext &ctx, const std::string &path) {
  const json &v = Member(obj, name, ctx, path);
  if (!v.is_string()) {
    SchemaError(ctx, path.empty() ? name : path + "." + name,
                "expected a string");
  }
  return v.get<std::string>();
}

int GetIndex(const json &obj, const char *name, const FieldContext &ctx,
             const std::string &path) {
  const json &v = Member(obj, name, ctx, path);
  std::string field = path.empty() ? name : path + "." + name;
  if (!v.is_number_integer()) SchemaError(ctx, field, "expected an integer");
  auto value = v.get<int64_t>();
  if (value < 0 || value > std::numeric_limits<int>::max()) {
    SchemaError(ctx, field, "index out of range");
  }
  return static_cast<int>(value);
}

const json &GetArray(const json &obj, const char *name,
                     const FieldContext &ctx, const std::string &path) {
  const json &v = Member(obj, name, ctx, path);
  if (!v.is_array()) {
    SchemaError(ctx, path.empty() ? name : path + "." + name,
                "expected an array");
  }
  return v;
}

[[noreturn]] void IndexError(const AnnotatedDocument &doc, size_t sentence,
                             const std::string &what) {
  throw ValidationError(fmt::format("document '{}': sentence {}: {}",
                                    doc.doc_id, sentence, what));
}

}  // namespace

std::string ExciseDialog(std::string_view screenplay) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (true) {
    size_t nl = screenplay.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(screenplay.substr(start));
      break;
    }
    lines.push_back(screenplay.substr(start, nl - start));
    start = nl + 1;
  }

  int base = std::numeric_limits<int>::max();
  for (auto line : lines) {
    if (!IsBlank(line)) base = std::min(base, Indent(line));
  }

  std::string out;
  out.reserve(screenplay.size());
  bool first = true;
  bool in_block = false;
  for (auto line : lines) {
    bool blank = IsBlank(line);
    if (in_block) {
      if (!blank && Indent(line) > base) continue;
      in_block = false;
    }
    if (!blank && Indent(line) > base && IsSpeakerCue(Content(line))) {
      in_block = true;
      continue;
    }
    if (!first) out.push_back('\n');
    out.append(line);
    first = false;
  }
  return out;
}

void ValidateDocument(const AnnotatedDocument &doc) {
  if (doc.doc_id.empty()) throw ValidationError("document with empty docId");
  if (doc.genre.empty()) {
    throw ValidationError(
        fmt::format("document '{}': genre is empty", doc.doc_id));
  }
  for (size_t s = 0; s < doc.sentences.size(); ++s) {
    const Sentence &sent = doc.sentences[s];
    const int n = static_cast<int>(sent.tokens.size());
    for (int t = 0; t < n; ++t) {
      const Token &tok = sent.tokens[t];
      if (tok.index != t) {
        IndexError(doc, s,
                   fmt::format("token at position {} has index {}", t,
                               tok.index));
      }
      if (tok.surface.empty()) {
        IndexError(doc, s, fmt::format("token {} has empty surface", t));
      }
      if (tok.lemma.empty()) {
        IndexError(doc, s, fmt::format("token {} has empty lemma", t));
      }
    }
    for (const auto &e : sent.deps) {
      if (e.head < 0 || e.head >= n) {
        IndexError(doc, s, fmt::format("dependency head index {} out of range "
                                       "for {} tokens", e.head, n));
      }
      if (e.dependent < 0 || e.dependent >= n) {
        IndexError(doc, s, fmt::format("dependency dependent index {} out of "
                                       "range for {} tokens", e.dependent, n));
      }
      if (e.head == e.dependent) {
        IndexError(doc, s, fmt::format("dependency edge {}->{} is a self loop",
                                       e.head, e.dependent));
      }
    }
  }
  for (const auto &chain : doc.coref_chains) {
    if (chain.mentions.empty()) {
      throw ValidationError(fmt::format("document '{}': coref chain '{}' has "
                                        "no mentions", doc.doc_id,
                                        chain.chain_id));
    }
    for (const auto &m : chain.mentions) {
      if (m.sentence < 0 ||
          m.sentence >= static_cast<int>(doc.sentences.size())) {
        throw ValidationError(fmt::format(
            "document '{}': coref chain '{}' mention sentence {} out of range",
            doc.doc_id, chain.chain_id, m.sentence));
      }
      const auto &tokens = doc.sentences[m.sentence].tokens;
      if (m.token < 0 || m.token >= static_cast<int>(tokens.size())) {
        IndexError(doc, m.sentence,
                   fmt::format("coref chain '{}' mention token {} out of range",
                               chain.chain_id, m.token));
      }
    }
  }
}

AnnotatedDocument LoadDocument(std::string_view serialized) {
  json root;
  try {
    root = json::parse(serialized);
  } catch (const json::parse_error &e) {
    throw LoadError(fmt::format("malformed document record: {}", e.what()));
  }
  FieldContext ctx;
  if (root.is_object()) {
    auto it = root.find("docId");
    if (it != root.end() && it->is_string()) ctx.doc_id = it->get<std::string>();
  }

  AnnotatedDocument doc;
  doc.doc_id = GetString(root, "docId", ctx, "");
  doc.genre = GetString(root, "genre", ctx, "");
  const json &sentences = GetArray(root, "sentences", ctx, "");
  for (size_t s = 0; s < sentences.size(); ++s) {
    std::string spath = fmt::format("sentences[{}]", s);
    Sentence sent;
    const json &tokens = GetArray(sentences[s], "tokens", ctx, spath);
    for (size_t t = 0; t < tokens.size(); ++t) {
      std::string tpath = fmt::format("{}.tokens[{}]", spath, t);
      Token tok;
      tok.index = GetIndex(tokens[t], "index", ctx, tpath);
      tok.surface = GetString(tokens[t], "surface", ctx, tpath);
      tok.lemma = GetString(tokens[t], "lemma", ctx, tpath);
      tok.pos = GetString(tokens[t], "pos", ctx, tpath);
      tok.ner = GetString(tokens[t], "ner", ctx, tpath);
      sent.tokens.push_back(std::move(tok));
    }
    const json &deps = GetArray(sentences[s], "deps", ctx, spath);
    for (size_t d = 0; d < deps.size(); ++d) {
      std::string dpath = fmt::format("{}.deps[{}]", spath, d);
      DependencyEdge edge;
      edge.head = GetIndex(deps[d], "head", ctx, dpath);
      edge.dependent = GetIndex(deps[d], "dependent", ctx, dpath);
      edge.relation = GetString(deps[d], "relation", ctx, dpath);
      sent.deps.push_back(std::move(edge));
    }
    doc.sentences.push_back(std::move(sent));
  }
  const json &coref = GetArray(root, "coref", ctx, "");
  for (size_t c = 0; c < coref.size(); ++c) {
    std::string cpath = fmt::format("coref[{}]", c);
    CorefChain chain;
    const json &id = Member(coref[c], "chainId", ctx, cpath);
    if (id.is_string()) {
      chain.chain_id = id.get<std::string>();
    } else if (id.is_number_integer()) {
      chain.chain_id = std::to_string(id.get<int64_t>());
    } else {
      SchemaError(ctx, cpath + ".chainId", "expected a string or integer");
    }
    const json &mentions = GetArray(coref[c], "mentions", ctx, cpath);
    for (size_t m = 0; m < mentions.size(); ++m) {
      std::string mpath = fmt::format("{}.mentions[{}]", cpath, m);
      chain.mentions.push_back(
          {GetIndex(mentions[m], "sentence", ctx, mpath),
           GetIndex(mentions[m], "token", ctx, mpath)});
    }
    doc.coref_chains.push_back(std::move(chain));
  }
  ValidateDocument(doc);
  return doc;
}

std::string SerializeDocument(const AnnotatedDocument &doc) {
  using nlohmann::ordered_json;
  ordered_json root;
  root["docId"] = doc.doc_id;
  root["genre"] = doc.genre;
  ordered_json sentences = ordered_json::array();
  for (const auto &sent : doc.sentences) {
    ordered_json tokens = ordered_json::array();
    for (const auto &t : sent.tokens) {
      ordered_json tok;
      tok["index"] = t.index;
      tok["surface"] = t.surface;
      tok["lemma"] = t.lemma;
      tok["pos"] = t.pos;
      tok["ner"] = t.ner;
      tokens.push_back(std::move(tok));
    }
    ordered_json deps = ordered_json::array();
    for (const auto &e : sent.deps) {
      ordered_json edge;
      edge["head"] = e.head;
      edge["dependent"] = e.dependent;
      edge["relation"] = e.relation;
      deps.push_back(std::move(edge));
    }
    ordered_json s;
    s["tokens"] = std::move(tokens);
    s["deps"] = std::move(deps);
    sentences.push_back(std::move(s));
  }
  root["sentences"] = std::move(sentences);
  ordered_json coref = ordered_json::array();
  for (const auto &chain : doc.coref_chains) {
    ordered_json mentions = ordered_json::array();
    for (const auto &m : chain.mentions) {
      mentions.push_back({{"sentence", m.sentence}, {"token", m.token}});
    }
    ordered_json c;
    c["chainId"] = chain.chain_id;
    c["mentions"] = std::move(mentions);
    coref.push_back(std::move(c));
  }
  root["coref"] = std::move(coref);
  return root.dump();
}

std::vector<std::string> Corpus::Genres() const {
  std::set<std::string> genres;
  for (const auto &d : documents) genres.insert(d.genre);
  return {genres.begin(), genres.end()};
}

std::vector<const AnnotatedDocument *> Corpus::ByGenre(
    std::string_view genre) const {
  std::vector<const AnnotatedDocument *> out;
  for (const auto &d : documents) {
    if (d.genre == genre) out.push_back(&d);
  }
  return out;
}

Corpus LoadCorpus(std::istream &in, std::string_view source_name) {
  std::vector<std::string> lines;
  std::vector<size_t> line_numbers;
  std::string line;
  for (size_t n = 1; std::getline(in, line); ++n) {
    if (IsBlank(line)) continue;
    lines.push_back(std::move(line));
    line_numbers.push_back(n);
  }

  const auto count = static_cast<int64_t>(lines.size());
  std::vector<AnnotatedDocument> docs(lines.size());
  std::vector<std::exception_ptr> errors(lines.size());
#pragma omp parallel for schedule(dynamic)
  for (int64_t i = 0; i < count; ++i) {
    try {
      docs[i] = LoadDocument(lines[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    std::string where = fmt::format("{}:{}: ", source_name, line_numbers[i]);
    try {
      std::rethrow_exception(errors[i]);
    } catch (const ValidationError &e) {
      throw ValidationError(where + e.what());
    } catch (const LoadError &e) {
      throw LoadError(where + e.what());
    }
  }

  std::set<std::string> seen;
  for (size_t i = 0; i < docs.size(); ++i) {
    if (!seen.insert(docs[i].doc_id).second) {
      throw ValidationError(fmt::format("{}:{}: duplicate docId '{}'",
                                        source_name, line_numbers[i],
                                        docs[i].doc_id));
    }
  }
  return Corpus{std::move(docs)};
}

Corpus LoadCorpusFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open annotated corpus " + path.string());
  return LoadCorpus(in, path.string());
}

std::vector<ExcisedScreenplay> ExciseDirectory(
    const std::filesystem::path &dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw LoadError("not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto &entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(fs::relative(entry.path(), dir));
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<ExcisedScreenplay> out;
  for (const auto &rel : files) {
    std::ifstream in(dir / rel, std::ios::binary);
    if (!in) throw LoadError("cannot read " + (dir / rel).string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    ExcisedScreenplay s;
    fs::path id = rel;
    id.replace_extension();
    s.doc_id = id.generic_string();
    if (rel.has_parent_path()) s.genre = rel.begin()->string();
    s.text = ExciseDialog(buffer.str());
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace contingency
