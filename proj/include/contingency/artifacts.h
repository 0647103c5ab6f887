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

// On-disk stage artifacts. Every artifact carries a header naming the stage,
// genre and a hash of the configuration that produced it; consumers compare
// these before combining artifacts.
//
//   stats       JSON, keys in a fixed order, maps sorted by key
//   scored      TSV: rank first subj1 obj1 second subj2 obj2 score(%.6f)
//   refined     TSV: the scored columns, then rep_second rep_subj rep_obj
//               pcep_pattern pcep_hits rep_pattern rep_hits decision
//   tasks       TSV: taskId batchId sideA sideB instructions
//   answer key  TSV: taskId correctSide
//   responses   TSV: raterId taskId chosenSide (written by raters, no header)
//
// TSV artifacts start with a `#contingency key=value ...` line. Absent
// arguments are written as "-".

#ifndef CONTINGENCY_ARTIFACTS_H_
#define CONTINGENCY_ARTIFACTS_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "contingency/eval.h"
#include "contingency/extract.h"
#include "contingency/ranked_pair.h"
#include "contingency/refine.h"

namespace contingency {

struct ArtifactHeader {
  std::map<std::string, std::string> fields;  // stage, genre, config, ...

  std::string Get(const std::string &key) const;  // "" when absent
  void Set(const std::string &key, std::string value);
  std::string Render() const;  // "#contingency k=v ..." without newline
  static ArtifactHeader Parse(std::string_view line);

  bool operator==(const ArtifactHeader &) const = default;
};

// Throws ArtifactMismatchError when `key` differs between the two headers.
void RequireSame(const ArtifactHeader &a, const ArtifactHeader &b,
                 const std::string &key, std::string_view what);

// Throws ArtifactMismatchError unless header.Get("stage") == stage.
void RequireStage(const ArtifactHeader &header, std::string_view stage,
                  std::string_view source);

enum class PairingMode { kAdjacent, kProtagonist };
std::string_view PairingModeName(PairingMode m);  // "adjacent", "protagonist"
PairingMode ParsePairingMode(std::string_view name);

struct StatsArtifact {
  ArtifactHeader header;
  PairingMode mode = PairingMode::kAdjacent;
  int64_t min_pair_freq = 0;  // protagonist mode only
  int64_t documents = 0;
  int64_t total_events = 0;
  EventTypeTable types;
  EventPairStats pairs;

  bool operator==(const StatsArtifact &) const = default;
};

std::string SerializeStats(const StatsArtifact &stats);
StatsArtifact ParseStats(std::string_view text, std::string_view source);

struct ScoredArtifact {
  ArtifactHeader header;
  std::vector<RankedPair> rows;
};

void WriteScored(std::ostream &out, const ScoredArtifact &scored);
ScoredArtifact ReadScored(std::istream &in, std::string_view source);

struct RefinedArtifact {
  ArtifactHeader header;
  std::vector<RefinementRecord> records;
};

void WriteRefined(std::ostream &out, const RefinedArtifact &refined);
RefinedArtifact ReadRefined(std::istream &in, std::string_view source);

struct TaskArtifact {
  ArtifactHeader header;
  std::vector<HitBatch> batches;
};

inline constexpr std::string_view kTasksFile = "tasks.tsv";
inline constexpr std::string_view kAnswerKeyFile = "answer_key.tsv";

// Writes tasks.tsv (no answers) and answer_key.tsv into `dir`.
void WriteTaskDirectory(const std::filesystem::path &dir,
                        const TaskArtifact &tasks);
// Reads both files back and checks that they come from the same generation.
TaskArtifact ReadTaskDirectory(const std::filesystem::path &dir);

// Groups rows by (rater, batch) using the batch of each task.
std::vector<RaterResponse> ReadResponses(std::istream &in,
                                         std::string_view source,
                                         const TaskArtifact &tasks);

// File helpers.
std::string ReadFile(const std::filesystem::path &path);
void WriteFile(const std::filesystem::path &path, std::string_view content);

}  // namespace contingency

#endif  // CONTINGENCY_ARTIFACTS_H_
