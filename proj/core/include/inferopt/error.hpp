// Copyright 2026 The inferopt Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace inferopt {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input document (pipeline spec, dataset, workload, config).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

/// Structurally well-formed input that violates an invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error("validation error: " + what) {}
};

/// Failure while executing a pipeline node; carries the node id.
class ExecutorError : public Error {
 public:
  ExecutorError(const std::string& node_id, const std::string& what)
      : Error("executor error at node '" + node_id + "': " + what), node_id_(node_id) {}
  const std::string& node_id() const { return node_id_; }

 private:
  std::string node_id_;
};

}  // namespace inferopt
