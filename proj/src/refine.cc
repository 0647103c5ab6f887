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

#include "contingency/refine.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include "contingency/error.h"

namespace contingency {
namespace {

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool IsVowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool IsVerbForm(std::string_view w) {
  if (w.empty() || w == "*") return false;
  return std::all_of(w.begin(), w.end(), [](unsigned char c) {
    return std::islower(c) || c == '-' || c == '\'' || c >= 0x80;
  });
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, n) by rejection; the engine's output sequence is fixed by
// the standard, so draws are identical on every platform.
uint64_t UniformIndex(std::mt19937_64 &rng, uint64_t n) {
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % n;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

std::string Trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string ThirdPersonSingular(std::string_view lemma) {
  if (lemma.empty()) throw Error("cannot inflect an empty verb lemma");
  if (lemma == "be") return "is";
  if (lemma == "have") return "has";
  if (lemma == "do") return "does";
  if (lemma == "go") return "goes";
  std::string s(lemma);
  if (EndsWith(s, "s") || EndsWith(s, "x") || EndsWith(s, "z") ||
      EndsWith(s, "ch") || EndsWith(s, "sh")) {
    return s + "es";
  }
  if (s.size() >= 2 && s.back() == 'y' && !IsVowel(s[s.size() - 2])) {
    s.pop_back();
    return s + "ies";
  }
  return s + "s";
}

SearchPattern::SearchPattern(std::string text) : text_(std::move(text)) {
  std::vector<std::string> parts;
  std::stringstream ss(text_);
  std::string word;
  while (std::getline(ss, word, ' ')) parts.push_back(word);
  if (parts.size() != 4 || parts[0] != "he" || parts[2] != "*" ||
      !IsVerbForm(parts[1]) || !IsVerbForm(parts[3]) ||
      !EndsWith(parts[1], "s") || !EndsWith(parts[3], "s")) {
    throw Error("malformed search pattern \"" + text_ +
                "\" (expected \"he <verb>s * <verb>s\")");
  }
}

SearchPattern BuildSearchPattern(const VerbPair &pair) {
  return SearchPattern(fmt::format("he {} * {}",
                                   ThirdPersonSingular(pair.first),
                                   ThirdPersonSingular(pair.second)));
}

VerbPair GenerateRep(const VerbPair &pcep, std::span<const std::string> pool,
                     uint64_t seed) {
  std::vector<const std::string *> eligible;
  for (const auto &v : pool) {
    if (v != pcep.second) eligible.push_back(&v);
  }
  if (eligible.empty()) {
    throw Error(fmt::format("event pool of size {} has no candidate other "
                            "than '{}' for the random pair",
                            pool.size(), pcep.second));
  }
  std::mt19937_64 rng(seed);
  return {pcep.first, *eligible[UniformIndex(rng, eligible.size())]};
}

std::string_view DecisionName(Decision d) {
  switch (d) {
    case Decision::kKeep:
      return "KEEP";
    case Decision::kDropLowPcep:
      return "DROP_LOW_PCEP";
    case Decision::kDropHighRep:
      return "DROP_HIGH_REP";
  }
  return "UNKNOWN";
}

Decision ParseDecision(std::string_view name) {
  for (Decision d :
       {Decision::kKeep, Decision::kDropLowPcep, Decision::kDropHighRep}) {
    if (DecisionName(d) == name) return d;
  }
  throw Error("unknown refinement decision '" + std::string(name) + "'");
}

std::vector<RefinementRecord> BuildRefinementRecords(
    std::span<const RankedPair> pceps, std::span<const std::string> pool,
    const EventTypeTable &types, uint64_t seed) {
  std::vector<RefinementRecord> out;
  out.reserve(pceps.size());
  for (size_t i = 0; i < pceps.size(); ++i) {
    const RankedPair &p = pceps[i];
    const uint64_t record_seed = SplitMix64(seed ^ SplitMix64(i));
    VerbPair rep = GenerateRep(p.verbs(), pool, record_seed);
    out.push_back(RefinementRecord{
        .pcep = p,
        .rep_second = DisplayEventFor(rep.second, types),
        .pcep_pattern = BuildSearchPattern(p.verbs()),
        .rep_pattern = BuildSearchPattern(rep),
        .pcep_hits = std::nullopt,
        .rep_hits = std::nullopt,
        .decision = std::nullopt,
    });
  }
  return out;
}

std::vector<RefinementRecord> Refine(std::vector<RefinementRecord> records,
                                     const RefineThresholds &thresholds) {
  std::vector<std::string> missing;
  for (const auto &r : records) {
    if (!r.pcep_hits) missing.push_back(r.pcep_pattern.text());
    if (!r.rep_hits) missing.push_back(r.rep_pattern.text());
  }
  if (!missing.empty()) throw UnresolvedPatternError(std::move(missing));

  for (auto &r : records) {
    if (*r.pcep_hits < thresholds.min_pcep_hits) {
      r.decision = Decision::kDropLowPcep;
    } else if (*r.rep_hits > thresholds.max_rep_hits) {
      r.decision = Decision::kDropHighRep;
    } else {
      r.decision = Decision::kKeep;
    }
  }
  return records;
}

int64_t ParseHitCount(std::string_view text) {
  std::string s;
  for (char c : Trim(text)) {
    if (c != ',') s.push_back(c);
  }
  auto bad = [&]() -> Error {
    return Error("invalid hit count '" + std::string(text) + "'");
  };
  if (s.empty()) throw bad();

  int64_t multiplier = 1;
  int scale_digits = 0;
  switch (std::toupper(static_cast<unsigned char>(s.back()))) {
    case 'K':
      multiplier = 1000;
      scale_digits = 3;
      break;
    case 'M':
      multiplier = 1000000;
      scale_digits = 6;
      break;
    case 'B':
      multiplier = 1000000000;
      scale_digits = 9;
      break;
    default:
      break;
  }
  if (multiplier != 1) s.pop_back();
  if (s.empty()) throw bad();

  size_t dot = s.find('.');
  std::string whole = s.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
  if (whole.empty() ||
      !std::all_of(whole.begin(), whole.end(), ::isdigit) ||
      !std::all_of(frac.begin(), frac.end(), ::isdigit) ||
      (dot != std::string::npos && frac.empty())) {
    throw bad();
  }
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  if (static_cast<int>(frac.size()) > scale_digits) throw bad();

  constexpr int64_t kMax = std::numeric_limits<int64_t>::max();
  int64_t value = 0;
  for (char c : whole) {
    if (value > (kMax - (c - '0')) / 10) throw bad();
    value = value * 10 + (c - '0');
  }
  if (value > kMax / multiplier) throw bad();
  value *= multiplier;
  int64_t frac_value = 0;
  for (char c : frac) frac_value = frac_value * 10 + (c - '0');
  for (int i = static_cast<int>(frac.size()); i < scale_digits; ++i) {
    frac_value *= 10;
  }
  if (value > kMax - frac_value) throw bad();
  return value + frac_value;
}

HitCountCache::HitCountCache(const std::filesystem::path &path) : path_(path) {
  std::ifstream in(path);
  if (!in) return;
  std::string line;
  for (size_t n = 1; std::getline(in, line); ++n) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.rfind('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(fmt::format("{}:{}: expected <pattern>\\t<count>",
                              path.string(), n));
    }
    try {
      counts_[line.substr(0, tab)] = ParseHitCount(line.substr(tab + 1));
    } catch (const Error &e) {
      throw Error(fmt::format("{}:{}: {}", path.string(), n, e.what()));
    }
  }
}

std::optional<int64_t> HitCountCache::Lookup(const std::string &pattern) const {
  std::shared_lock lock(mu_);
  auto it = counts_.find(pattern);
  if (it == counts_.end()) return std::nullopt;
  return it->second;
}

void HitCountCache::Insert(const std::string &pattern, int64_t count) {
  std::unique_lock lock(mu_);
  counts_[pattern] = count;
}

size_t HitCountCache::size() const {
  std::shared_lock lock(mu_);
  return counts_.size();
}

void HitCountCache::Save(const std::filesystem::path &path) const {
  std::shared_lock lock(mu_);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write hit-count cache " + path.string());
  for (const auto &[pattern, count] : counts_) {
    out << pattern << '\t' << count << '\n';
  }
}

void HitCountCache::Save() const {
  if (path_.empty()) throw Error("hit-count cache has no backing file");
  Save(path_);
}

int64_t CachedHitCountProvider::Query(const SearchPattern &pattern) {
  auto hit = cache_.Lookup(pattern.text());
  if (!hit) {
    throw HitCountQueryError(
        "pattern \"" + pattern.text() + "\" is not in the hit-count cache",
        /*retryable=*/false);
  }
  return *hit;
}

LiveHitCountProvider::LiveHitCountProvider(LiveEndpoint endpoint,
                                           HitCountCache &cache)
    : endpoint_(std::move(endpoint)), cache_(cache) {}

int64_t LiveHitCountProvider::Query(const SearchPattern &pattern) {
  if (auto hit = cache_.Lookup(pattern.text())) return *hit;

  std::lock_guard lock(request_mu_);
  if (last_request_) {
    auto next = *last_request_ + endpoint_.min_interval;
    std::this_thread::sleep_until(next);
  }
  last_request_ = std::chrono::steady_clock::now();
  ++live_queries_;

  httplib::Client client(endpoint_.host, endpoint_.port);
  auto timeout_s = std::chrono::duration_cast<std::chrono::seconds>(
      endpoint_.timeout);
  auto timeout_us = std::chrono::duration_cast<std::chrono::microseconds>(
      endpoint_.timeout - timeout_s);
  client.set_connection_timeout(timeout_s.count(), timeout_us.count());
  client.set_read_timeout(timeout_s.count(), timeout_us.count());
  httplib::Params params{{"q", pattern.text()}};
  auto res = client.Get(endpoint_.path, params, httplib::Headers{});
  if (!res) {
    throw HitCountQueryError(
        fmt::format("hit-count request for \"{}\" failed: {}", pattern.text(),
                    httplib::to_string(res.error())),
        /*retryable=*/true);
  }
  if (res->status != 200) {
    bool retryable = res->status == 429 || res->status >= 500;
    throw HitCountQueryError(
        fmt::format("hit-count service answered {} for \"{}\"", res->status,
                    pattern.text()),
        retryable);
  }

  int64_t count = 0;
  std::string body = Trim(res->body);
  try {
    if (!body.empty() && body.front() == '{') {
      auto doc = nlohmann::json::parse(body);
      count = doc.at("count").get<int64_t>();
    } else {
      count = ParseHitCount(body);
    }
  } catch (const std::exception &e) {
    throw HitCountQueryError(
        fmt::format("unreadable hit count for \"{}\": {}", pattern.text(),
                    e.what()),
        /*retryable=*/false);
  }
  if (count < 0) {
    throw HitCountQueryError("negative hit count for \"" + pattern.text() + "\"",
                             /*retryable=*/false);
  }
  cache_.Insert(pattern.text(), count);
  return count;
}

void LiveHitCountProvider::Flush() {
  if (!cache_.path().empty()) cache_.Save();
}

std::map<std::string, int64_t> FetchHitCounts(
    std::span<const SearchPattern> patterns, HitCountProvider &provider,
    const RetryPolicy &retry) {
  std::map<std::string, int64_t> hits;
  std::vector<std::string> unresolved;
  std::set<std::string> seen;
  for (const auto &pattern : patterns) {
    if (!seen.insert(pattern.text()).second) continue;
    for (int attempt = 1;; ++attempt) {
      try {
        hits[pattern.text()] = provider.Query(pattern);
        break;
      } catch (const HitCountQueryError &e) {
        if (!e.retryable() || attempt >= retry.max_attempts) {
          unresolved.push_back(pattern.text());
          break;
        }
        std::this_thread::sleep_for(retry.backoff * attempt);
      }
    }
  }
  provider.Flush();
  if (!unresolved.empty()) throw UnresolvedPatternError(std::move(unresolved));
  return hits;
}

void AttachHitCounts(std::span<RefinementRecord> records,
                     const std::map<std::string, int64_t> &hits) {
  for (auto &r : records) {
    if (auto it = hits.find(r.pcep_pattern.text()); it != hits.end()) {
      r.pcep_hits = it->second;
    }
    if (auto it = hits.find(r.rep_pattern.text()); it != hits.end()) {
      r.rep_hits = it->second;
    }
  }
}

}  // namespace contingency
