// Copyright 2026 The pipecache Authors. All Rights Reserved.
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

#ifndef PIPECACHE_ERRORS_HPP
#define PIPECACHE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pipecache {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller broke an operation's precondition (e.g. prefix length out of range).
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(what) {}
};

/// Input data violates a domain invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

/// Malformed input file. The message names the file and the offending field.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& file, const std::string& field,
             const std::string& detail)
      : ValidationError(file + ": field '" + field + "': " + detail),
        file_(file),
        field_(field) {}

  const std::string& file() const { return file_; }
  const std::string& field() const { return field_; }

 private:
  std::string file_;
  std::string field_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace pipecache

#endif  // PIPECACHE_ERRORS_HPP
