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

#ifndef CONTINGENCY_ERROR_H_
#define CONTINGENCY_ERROR_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace contingency {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Serialized input does not conform to the annotation schema.
class LoadError : public Error {
 public:
  using Error::Error;
};

// Structurally well-formed input that violates an index invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Artifacts produced under different configurations were combined.
class ArtifactMismatchError : public Error {
 public:
  using Error::Error;
};

// One or more search patterns could not be resolved to a hit count.
class UnresolvedPatternError : public Error {
 public:
  explicit UnresolvedPatternError(std::vector<std::string> patterns)
      : Error(BuildMessage(patterns)), patterns_(std::move(patterns)) {}

  const std::vector<std::string> &patterns() const { return patterns_; }

 private:
  static std::string BuildMessage(const std::vector<std::string> &patterns) {
    std::string msg = "unresolved search pattern(s):";
    for (const auto &p : patterns) msg += " \"" + p + "\"";
    return msg;
  }

  std::vector<std::string> patterns_;
};

// Wraps an error with the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string &cause)
      : Error(stage + ": " + cause), stage_(std::move(stage)) {}

  const std::string &stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace contingency

#endif  // CONTINGENCY_ERROR_H_
