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

#include "contingency/artifacts.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "contingency/error.h"

namespace contingency {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::string_view kHeaderPrefix = "#contingency";
constexpr std::string_view kAbsent = "-";

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string OrAbsent(const std::optional<std::string> &s) {
  return s ? *s : std::string(kAbsent);
}

std::optional<std::string> FromAbsent(const std::string &s) {
  if (s == kAbsent) return std::nullopt;
  return s;
}

[[noreturn]] void BadRow(std::string_view source, size_t line,
                         const std::string &what) {
  throw LoadError(fmt::format("{}:{}: {}", source, line, what));
}

int64_t ParseInt(const std::string &s, std::string_view source, size_t line) {
  int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    BadRow(source, line, "expected an integer, got '" + s + "'");
  }
  return v;
}

double ParseScore(const std::string &s, std::string_view source, size_t line) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    BadRow(source, line, "expected a number, got '" + s + "'");
  }
}

// Reads the header line and the data lines (comments and blanks skipped).
struct TsvLines {
  ArtifactHeader header;
  std::vector<std::pair<size_t, std::vector<std::string>>> rows;
};

TsvLines ReadTsv(std::istream &in, std::string_view source,
                 size_t expected_columns) {
  TsvLines out;
  std::string line;
  bool have_header = false;
  for (size_t n = 1; std::getline(in, line); ++n) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind(kHeaderPrefix, 0) == 0) {
      if (have_header) BadRow(source, n, "second artifact header");
      out.header = ArtifactHeader::Parse(line);
      have_header = true;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    auto cols = SplitTabs(line);
    if (cols.size() != expected_columns) {
      BadRow(source, n, fmt::format("expected {} columns, found {}",
                                    expected_columns, cols.size()));
    }
    out.rows.emplace_back(n, std::move(cols));
  }
  if (!have_header) {
    throw ArtifactMismatchError(std::string(source) +
                                ": missing artifact header");
  }
  return out;
}

void WritePairColumns(std::ostream &out, const RankedPair &p) {
  out << p.rank << '\t' << p.first.verb << '\t' << OrAbsent(p.first.subject)
      << '\t' << OrAbsent(p.first.object) << '\t' << p.second.verb << '\t'
      << OrAbsent(p.second.subject) << '\t' << OrAbsent(p.second.object)
      << '\t' << fmt::format("{:.6f}", p.score);
}

RankedPair ReadPairColumns(const std::vector<std::string> &c, Measure measure,
                           std::string_view source, size_t line) {
  RankedPair p;
  p.rank = static_cast<int>(ParseInt(c[0], source, line));
  p.measure = measure;
  p.first = {c[1], FromAbsent(c[2]), FromAbsent(c[3])};
  p.second = {c[4], FromAbsent(c[5]), FromAbsent(c[6])};
  p.score = ParseScore(c[7], source, line);
  return p;
}

Measure MeasureFromHeader(const ArtifactHeader &h, std::string_view source) {
  try {
    return ParseMeasure(h.Get("measure"));
  } catch (const Error &e) {
    throw LoadError(std::string(source) + ": " + e.what());
  }
}

ordered_json DistToJson(const std::map<std::string, int64_t> &dist) {
  ordered_json out = ordered_json::object();
  for (const auto &[k, v] : dist) out[k] = v;
  return out;
}

}  // namespace

std::string ArtifactHeader::Get(const std::string &key) const {
  auto it = fields.find(key);
  return it == fields.end() ? std::string() : it->second;
}

void ArtifactHeader::Set(const std::string &key, std::string value) {
  if (key.find_first_of(" \t=\n") != std::string::npos ||
      value.find_first_of(" \t\n") != std::string::npos) {
    throw Error("artifact header entry '" + key + "=" + value +
                "' may not contain whitespace");
  }
  fields[key] = std::move(value);
}

std::string ArtifactHeader::Render() const {
  std::string out(kHeaderPrefix);
  for (const auto &[k, v] : fields) out += " " + k + "=" + v;
  return out;
}

ArtifactHeader ArtifactHeader::Parse(std::string_view line) {
  if (line.rfind(kHeaderPrefix, 0) != 0) {
    throw LoadError("not an artifact header: " + std::string(line));
  }
  ArtifactHeader h;
  std::istringstream ss{std::string(line.substr(kHeaderPrefix.size()))};
  std::string item;
  while (ss >> item) {
    size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw LoadError("malformed artifact header entry '" + item + "'");
    }
    h.fields[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return h;
}

void RequireSame(const ArtifactHeader &a, const ArtifactHeader &b,
                 const std::string &key, std::string_view what) {
  if (a.Get(key) != b.Get(key)) {
    throw ArtifactMismatchError(fmt::format(
        "{}: {} '{}' does not match '{}'", what, key, a.Get(key), b.Get(key)));
  }
}

void RequireStage(const ArtifactHeader &header, std::string_view stage,
                  std::string_view source) {
  if (header.Get("stage") != stage) {
    throw ArtifactMismatchError(fmt::format(
        "{}: expected a '{}' artifact, found stage '{}'", source, stage,
        header.Get("stage")));
  }
}

std::string_view PairingModeName(PairingMode m) {
  return m == PairingMode::kAdjacent ? "adjacent" : "protagonist";
}

PairingMode ParsePairingMode(std::string_view name) {
  if (name == "adjacent") return PairingMode::kAdjacent;
  if (name == "protagonist") return PairingMode::kProtagonist;
  throw LoadError("unknown pairing mode '" + std::string(name) + "'");
}

std::string SerializeStats(const StatsArtifact &stats) {
  ordered_json root;
  ordered_json header = ordered_json::object();
  for (const auto &[k, v] : stats.header.fields) header[k] = v;
  root["artifact"] = std::move(header);
  root["genre"] = stats.pairs.genre;
  root["mode"] = PairingModeName(stats.mode);
  root["min_pair_freq"] = stats.min_pair_freq;
  root["documents"] = stats.documents;
  root["total_events"] = stats.total_events;
  ordered_json types = ordered_json::array();
  for (const auto &[verb, t] : stats.types) {
    ordered_json e;
    e["verb"] = verb;
    e["frequency"] = t.frequency;
    e["rep_subject"] = t.rep_subject ? ordered_json(*t.rep_subject) : nullptr;
    e["rep_object"] = t.rep_object ? ordered_json(*t.rep_object) : nullptr;
    e["subjects"] = DistToJson(t.subject_dist);
    e["objects"] = DistToJson(t.object_dist);
    types.push_back(std::move(e));
  }
  root["event_types"] = std::move(types);
  ordered_json pairs = ordered_json::array();
  for (const auto &[pair, n] : stats.pairs.counts) {
    pairs.push_back({{"first", pair.first}, {"second", pair.second},
                     {"count", n}});
  }
  root["pairs"] = std::move(pairs);
  root["total_pair_tokens"] = stats.pairs.total_pair_tokens;
  return root.dump(1) + "\n";
}

StatsArtifact ParseStats(std::string_view text, std::string_view source) {
  StatsArtifact out;
  try {
    json root = json::parse(text);
    for (const auto &[k, v] : root.at("artifact").items()) {
      out.header.fields[k] = v.get<std::string>();
    }
    out.pairs.genre = root.at("genre").get<std::string>();
    out.mode = ParsePairingMode(root.at("mode").get<std::string>());
    out.min_pair_freq = root.at("min_pair_freq").get<int64_t>();
    out.documents = root.at("documents").get<int64_t>();
    out.total_events = root.at("total_events").get<int64_t>();
    int64_t frequency_sum = 0;
    for (const auto &e : root.at("event_types")) {
      EventType t;
      t.verb_lemma = e.at("verb").get<std::string>();
      t.frequency = e.at("frequency").get<int64_t>();
      if (!e.at("rep_subject").is_null()) {
        t.rep_subject = e.at("rep_subject").get<std::string>();
      }
      if (!e.at("rep_object").is_null()) {
        t.rep_object = e.at("rep_object").get<std::string>();
      }
      t.subject_dist = e.at("subjects").get<std::map<std::string, int64_t>>();
      t.object_dist = e.at("objects").get<std::map<std::string, int64_t>>();
      frequency_sum += t.frequency;
      std::string verb = t.verb_lemma;
      out.types.emplace(std::move(verb), std::move(t));
    }
    for (const auto &p : root.at("pairs")) {
      int64_t n = p.at("count").get<int64_t>();
      if (n < 1) throw LoadError("pair count below 1");
      out.pairs.Add({p.at("first").get<std::string>(),
                     p.at("second").get<std::string>()},
                    n);
    }
    if (out.pairs.total_pair_tokens !=
        root.at("total_pair_tokens").get<int64_t>()) {
      throw LoadError("total_pair_tokens does not equal the sum of pair counts");
    }
    if (frequency_sum != out.total_events) {
      throw LoadError("total_events does not equal the sum of frequencies");
    }
  } catch (const json::exception &e) {
    throw LoadError(fmt::format("{}: malformed stats file: {}", source,
                                e.what()));
  } catch (const LoadError &e) {
    throw LoadError(fmt::format("{}: {}", source, e.what()));
  }
  return out;
}

void WriteScored(std::ostream &out, const ScoredArtifact &scored) {
  out << scored.header.Render() << '\n';
  for (const auto &row : scored.rows) {
    WritePairColumns(out, row);
    out << '\n';
  }
}

ScoredArtifact ReadScored(std::istream &in, std::string_view source) {
  TsvLines tsv = ReadTsv(in, source, 8);
  RequireStage(tsv.header, "score", source);
  ScoredArtifact out;
  out.header = tsv.header;
  Measure measure = MeasureFromHeader(tsv.header, source);
  for (const auto &[line, cols] : tsv.rows) {
    out.rows.push_back(ReadPairColumns(cols, measure, source, line));
  }
  return out;
}

void WriteRefined(std::ostream &out, const RefinedArtifact &refined) {
  out << refined.header.Render() << '\n';
  for (const auto &r : refined.records) {
    WritePairColumns(out, r.pcep);
    out << '\t' << r.rep_second.verb << '\t' << OrAbsent(r.rep_second.subject)
        << '\t' << OrAbsent(r.rep_second.object) << '\t'
        << r.pcep_pattern.text() << '\t'
        << (r.pcep_hits ? std::to_string(*r.pcep_hits) : "-") << '\t'
        << r.rep_pattern.text() << '\t'
        << (r.rep_hits ? std::to_string(*r.rep_hits) : "-") << '\t'
        << (r.decision ? DecisionName(*r.decision) : kAbsent) << '\n';
  }
}

RefinedArtifact ReadRefined(std::istream &in, std::string_view source) {
  TsvLines tsv = ReadTsv(in, source, 16);
  RequireStage(tsv.header, "refine", source);
  RefinedArtifact out;
  out.header = tsv.header;
  Measure measure = MeasureFromHeader(tsv.header, source);
  for (const auto &[line, c] : tsv.rows) {
    try {
      RefinementRecord r{
          .pcep = ReadPairColumns(c, measure, source, line),
          .rep_second = {c[8], FromAbsent(c[9]), FromAbsent(c[10])},
          .pcep_pattern = SearchPattern(c[11]),
          .rep_pattern = SearchPattern(c[13]),
          .pcep_hits = std::nullopt,
          .rep_hits = std::nullopt,
          .decision = std::nullopt,
      };
      if (c[12] != kAbsent) r.pcep_hits = ParseInt(c[12], source, line);
      if (c[14] != kAbsent) r.rep_hits = ParseInt(c[14], source, line);
      if (c[15] != kAbsent) r.decision = ParseDecision(c[15]);
      out.records.push_back(std::move(r));
    } catch (const LoadError &) {
      throw;
    } catch (const Error &e) {
      BadRow(source, line, e.what());
    }
  }
  return out;
}

void WriteTaskDirectory(const std::filesystem::path &dir,
                        const TaskArtifact &tasks) {
  std::filesystem::create_directories(dir);
  std::ostringstream task_out;
  std::ostringstream key_out;
  task_out << tasks.header.Render() << '\n';
  key_out << tasks.header.Render() << '\n';
  for (const auto &b : tasks.batches) {
    for (const auto &t : b.tasks) {
      task_out << t.task_id << '\t' << t.batch_id << '\t' << t.side_a << '\t'
               << t.side_b << '\t' << InstructionsName(b.instructions) << '\n';
      key_out << t.task_id << '\t' << SideLetter(t.correct_side) << '\n';
    }
  }
  WriteFile(dir / kTasksFile, task_out.str());
  WriteFile(dir / kAnswerKeyFile, key_out.str());
}

TaskArtifact ReadTaskDirectory(const std::filesystem::path &dir) {
  const std::string task_source = (dir / kTasksFile).string();
  const std::string key_source = (dir / kAnswerKeyFile).string();
  std::istringstream task_in(ReadFile(dir / kTasksFile));
  std::istringstream key_in(ReadFile(dir / kAnswerKeyFile));
  TsvLines tasks = ReadTsv(task_in, task_source, 5);
  TsvLines key = ReadTsv(key_in, key_source, 2);
  RequireStage(tasks.header, "eval-gen", task_source);
  RequireStage(key.header, "eval-gen", key_source);
  RequireSame(tasks.header, key.header, "config",
              "task file and answer key come from different generations");

  std::map<std::string, Side> answers;
  for (const auto &[line, c] : key.rows) {
    try {
      answers[c[0]] = ParseSide(c[1]);
    } catch (const Error &e) {
      BadRow(key_source, line, e.what());
    }
  }

  TaskArtifact out;
  out.header = tasks.header;
  const bool show_args = tasks.header.Get("show_args") == "true";
  for (const auto &[line, c] : tasks.rows) {
    auto it = answers.find(c[0]);
    if (it == answers.end()) {
      BadRow(task_source, line, "task '" + c[0] + "' missing from answer key");
    }
    Instructions instructions;
    try {
      instructions = ParseInstructions(c[4]);
    } catch (const Error &e) {
      BadRow(task_source, line, e.what());
    }
    if (out.batches.empty() || out.batches.back().batch_id != c[1]) {
      out.batches.push_back({c[1], {}, instructions});
    }
    ChoiceTask t;
    t.task_id = c[0];
    t.batch_id = c[1];
    t.side_a = c[2];
    t.side_b = c[3];
    t.correct_side = it->second;
    t.order_matters = instructions == Instructions::kOrderMatters;
    t.show_arguments = show_args;
    out.batches.back().tasks.push_back(std::move(t));
    answers.erase(it);
  }
  if (!answers.empty()) {
    throw LoadError(key_source + ": answer key lists task '" +
                    answers.begin()->first + "' absent from the task file");
  }
  return out;
}

std::vector<RaterResponse> ReadResponses(std::istream &in,
                                         std::string_view source,
                                         const TaskArtifact &tasks) {
  std::map<std::string, std::string> batch_of;
  for (const auto &b : tasks.batches) {
    for (const auto &t : b.tasks) batch_of[t.task_id] = b.batch_id;
  }
  std::map<std::pair<std::string, std::string>, RaterResponse> grouped;
  std::string line;
  for (size_t n = 1; std::getline(in, line); ++n) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto c = SplitTabs(line);
    if (c.size() != 3) {
      BadRow(source, n, fmt::format("expected 3 columns, found {}", c.size()));
    }
    if (c[0] == "raterId") continue;  // optional column header
    auto it = batch_of.find(c[1]);
    if (it == batch_of.end()) {
      BadRow(source, n, "unknown task '" + c[1] + "'");
    }
    Side side;
    try {
      side = ParseSide(c[2]);
    } catch (const Error &e) {
      BadRow(source, n, e.what());
    }
    RaterResponse &r = grouped[{c[0], it->second}];
    r.rater_id = c[0];
    r.batch_id = it->second;
    auto [pos, inserted] = r.answers.emplace(c[1], side);
    if (!inserted && pos->second != side) {
      BadRow(source, n, "conflicting answer for task '" + c[1] + "'");
    }
  }
  std::vector<RaterResponse> out;
  for (auto &[key, r] : grouped) out.push_back(std::move(r));
  return out;
}

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path &path, std::string_view content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace contingency
