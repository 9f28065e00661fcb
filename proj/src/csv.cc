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

#include "arena/csv.h"

#include <iterator>

#include "arena/error.h"

namespace arena::csv {

std::vector<Record> read(std::istream& in) {
  const std::string data{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  std::size_t pos = 0;
  if (data.rfind("\xEF\xBB\xBF", 0) == 0) pos = 3;

  std::vector<Record> records;
  std::size_t line = 1;
  while (pos < data.size()) {
    Record rec;
    rec.line = line;
    std::string field;
    bool record_done = false;
    bool any_content = false;
    while (!record_done) {
      field.clear();
      if (pos < data.size() && data[pos] == '"') {
        const std::size_t quote_line = line;
        ++pos;
        for (;;) {
          if (pos >= data.size())
            throw ParseError(quote_line, "unterminated quoted field");
          const char c = data[pos++];
          if (c == '"') {
            if (pos < data.size() && data[pos] == '"') {
              field.push_back('"');
              ++pos;
            } else {
              break;
            }
          } else {
            if (c == '\n') ++line;
            field.push_back(c);
          }
        }
        any_content = true;
        if (pos < data.size() && data[pos] != ',' && data[pos] != '\n' &&
            data[pos] != '\r')
          throw ParseError(line, "unexpected character after closing quote");
      } else {
        while (pos < data.size() && data[pos] != ',' && data[pos] != '\n' &&
               data[pos] != '\r') {
          if (data[pos] == '"')
            throw ParseError(line, "quote inside unquoted field");
          field.push_back(data[pos++]);
        }
        if (!field.empty()) any_content = true;
      }
      rec.fields.push_back(field);

      if (pos >= data.size()) {
        record_done = true;
      } else if (data[pos] == ',') {
        ++pos;
        any_content = true;
      } else {
        if (data[pos] == '\r') ++pos;
        if (pos < data.size() && data[pos] == '\n') ++pos;
        ++line;
        record_done = true;
      }
    }
    if (any_content) records.push_back(std::move(rec));
  }
  return records;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\r\n") == std::string::npos) {
      out << f;
      continue;
    }
    out << '"';
    for (char c : f) {
      if (c == '"') out << '"';
      out << c;
    }
    out << '"';
  }
  out << "\r\n";
}

}  // namespace arena::csv
