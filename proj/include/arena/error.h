// Copyright 2026 The Riddle Arena Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARENA_ERROR_H_
#define ARENA_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace arena {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A CSV data row violated the riddle schema. `line` is the 1-based physical
// line on which the offending record starts.
class RowError : public Error {
 public:
  RowError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Input could not be framed at all (broken CSV quoting, unbalanced markup).
// `offset` is a byte offset for markup and a line number for CSV.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error(what + " (at " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

// The resource exists but is not in a state that allows the request.
class NotReady : public Error {
 public:
  using Error::Error;
};

}  // namespace arena

#endif  // ARENA_ERROR_H_
