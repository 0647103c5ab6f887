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

// Web-count refinement of ranked candidate pairs.
//
// Each candidate keeps its first event and is paired with a random second
// event from the same genre. Both pairs are turned into historical-present
// exact-phrase queries ("he knows * means") and the candidate survives only
// if its own pattern is frequent and the random pattern is rare.

#ifndef CONTINGENCY_REFINE_H_
#define CONTINGENCY_REFINE_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "contingency/error.h"
#include "contingency/ranked_pair.h"

namespace contingency {

// English third-person-singular present form of a lowercase verb lemma.
std::string ThirdPersonSingular(std::string_view lemma);

// An exact query of the form `he <v1-3sg> * <v2-3sg>`.
class SearchPattern {
 public:
  // Validates the shape; throws Error when it does not match.
  explicit SearchPattern(std::string text);

  const std::string &text() const { return text_; }

  auto operator<=>(const SearchPattern &) const = default;

 private:
  std::string text_;
};

SearchPattern BuildSearchPattern(const VerbPair &pair);

// Keeps `pcep.first` and draws the second event uniformly from `pool` minus
// every occurrence of `pcep.second`. Deterministic for a fixed seed.
VerbPair GenerateRep(const VerbPair &pcep, std::span<const std::string> pool,
                     uint64_t seed);

enum class Decision { kKeep, kDropLowPcep, kDropHighRep };

// "KEEP", "DROP_LOW_PCEP", "DROP_HIGH_REP".
std::string_view DecisionName(Decision d);
Decision ParseDecision(std::string_view name);

struct RefinementRecord {
  RankedPair pcep;
  DisplayEvent rep_second;  // the REP is (pcep.first, rep_second)
  SearchPattern pcep_pattern;
  SearchPattern rep_pattern;
  std::optional<int64_t> pcep_hits;
  std::optional<int64_t> rep_hits;
  std::optional<Decision> decision;

  VerbPair rep() const { return {pcep.first.verb, rep_second.verb}; }

  bool operator==(const RefinementRecord &) const = default;
};

// Builds one record per candidate. Record i draws its REP with a seed mixed
// from `seed` and i, so the whole list is reproducible.
std::vector<RefinementRecord> BuildRefinementRecords(
    std::span<const RankedPair> pceps, std::span<const std::string> pool,
    const EventTypeTable &types, uint64_t seed);

struct RefineThresholds {
  int64_t min_pcep_hits = 100;
  int64_t max_rep_hits = 100;
};

// DROP_LOW_PCEP when pcep_hits < min_pcep_hits, else DROP_HIGH_REP when
// rep_hits > max_rep_hits, else KEEP. Every record is returned. Throws
// UnresolvedPatternError naming patterns without a hit count.
std::vector<RefinementRecord> Refine(std::vector<RefinementRecord> records,
                                     const RefineThresholds &thresholds = {});

// Parses "415000000", "415M", "1.5M", "697K", "2B" (case-insensitive suffix).
int64_t ParseHitCount(std::string_view text);

// Pattern -> count store backed by a `<pattern>\t<count>` file. Concurrent
// reads, exclusive writes.
class HitCountCache {
 public:
  HitCountCache() = default;
  HitCountCache(const HitCountCache &) = delete;
  HitCountCache &operator=(const HitCountCache &) = delete;

  // A missing file yields an empty cache. Throws Error on malformed rows.
  static HitCountCache Load(const std::filesystem::path &path) {
    return HitCountCache(path);
  }

  std::optional<int64_t> Lookup(const std::string &pattern) const;
  void Insert(const std::string &pattern, int64_t count);
  size_t size() const;

  // Writes integer counts sorted by pattern.
  void Save(const std::filesystem::path &path) const;
  void Save() const;  // to the path it was loaded from

  const std::filesystem::path &path() const { return path_; }

 private:
  explicit HitCountCache(const std::filesystem::path &path);

  std::filesystem::path path_;
  mutable std::shared_mutex mu_;
  std::map<std::string, int64_t> counts_;
};

// Raised by a provider for one query. Retryable failures are re-attempted by
// FetchHitCounts.
class HitCountQueryError : public Error {
 public:
  HitCountQueryError(const std::string &what, bool retryable)
      : Error(what), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

class HitCountProvider {
 public:
  virtual ~HitCountProvider() = default;
  // Throws HitCountQueryError when the count cannot be obtained.
  virtual int64_t Query(const SearchPattern &pattern) = 0;
  // Persists anything learned so far.
  virtual void Flush() {}
};

// Answers from the cache only; a miss is a non-retryable failure.
class CachedHitCountProvider : public HitCountProvider {
 public:
  explicit CachedHitCountProvider(const HitCountCache &cache) : cache_(cache) {}
  int64_t Query(const SearchPattern &pattern) override;

 private:
  const HitCountCache &cache_;
};

struct LiveEndpoint {
  std::string host = "127.0.0.1";
  int port = 80;
  // GET <path>?q=<url-encoded pattern>; the body is an integer count or a
  // JSON object with an integer "count".
  std::string path = "/count";
  std::chrono::milliseconds min_interval{1000};
  std::chrono::milliseconds timeout{10000};
};

// Queries a hit-count HTTP service with at most one request in flight and a
// minimum delay between requests. Cached patterns are answered locally and
// every live answer is written through to the cache.
class LiveHitCountProvider : public HitCountProvider {
 public:
  LiveHitCountProvider(LiveEndpoint endpoint, HitCountCache &cache);
  int64_t Query(const SearchPattern &pattern) override;
  void Flush() override;

  int64_t live_queries() const { return live_queries_; }

 private:
  LiveEndpoint endpoint_;
  HitCountCache &cache_;
  std::mutex request_mu_;
  std::optional<std::chrono::steady_clock::time_point> last_request_;
  int64_t live_queries_ = 0;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff{0};
};

// Resolves each distinct pattern once, sequentially. Unresolved patterns are
// collected; the provider is flushed before an UnresolvedPatternError is
// thrown for them.
std::map<std::string, int64_t> FetchHitCounts(
    std::span<const SearchPattern> patterns, HitCountProvider &provider,
    const RetryPolicy &retry = {});

// Fills pcep_hits/rep_hits from `hits`; missing patterns stay empty.
void AttachHitCounts(std::span<RefinementRecord> records,
                     const std::map<std::string, int64_t> &hits);

}  // namespace contingency

#endif  // CONTINGENCY_REFINE_H_
