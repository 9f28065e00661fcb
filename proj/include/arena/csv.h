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

#ifndef ARENA_CSV_H_
#define ARENA_CSV_H_

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace arena::csv {

struct Record {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

// Reads an RFC 4180 document (comma separator, double-quote quoting, CRLF or
// LF line ends, optional UTF-8 BOM). Throws ParseError, whose offset is a line
// number, on broken quoting. Completely empty lines are skipped.
std::vector<Record> read(std::istream& in);

// Writes one record, quoting only fields that need it.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace arena::csv

#endif  // ARENA_CSV_H_
