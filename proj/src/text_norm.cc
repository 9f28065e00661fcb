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

#include "arena/text_norm.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <sstream>

namespace arena {

namespace {

bool is_separator_punct(UChar32 c) {
  return c == '/' || c == 0x2044 /* fraction slash */ ||
         u_charType(c) == U_DASH_PUNCTUATION;
}

bool is_deleted_punct(UChar32 c) {
  if (c == 0x00B0 || c == 0x2032 || c == 0x2033) return true;
  switch (u_charType(c)) {
    case U_CONNECTOR_PUNCTUATION:
    case U_START_PUNCTUATION:
    case U_END_PUNCTUATION:
    case U_INITIAL_PUNCTUATION:
    case U_FINAL_PUNCTUATION:
    case U_OTHER_PUNCTUATION:
      return true;
    default:
      return false;
  }
}

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buf, static_cast<std::size_t>(len));
}

// Core pass. Emits a single space for any whitespace/separator run.
std::string normalize_impl(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const auto length = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) continue;
    if (u_isUWhiteSpace(c) || is_separator_punct(c) || u_iscntrl(c)) {
      pending_space = true;
      continue;
    }
    if (is_deleted_punct(c)) continue;
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    append_utf8(out, u_tolower(c));
  }
  return out;
}

}  // namespace

std::vector<std::string> NormalizedText::tokens() const {
  return split_words(value_);
}

NormalizedText normalize_text(std::string_view s) {
  return NormalizedText(normalize_impl(s));
}

NormalizedText normalize_answer(std::string_view s) {
  std::string out;
  for (const auto& tok : split_words(normalize_impl(s))) {
    if (tok == "the" || tok == "a" || tok == "an") continue;
    if (!out.empty()) out.push_back(' ');
    out += tok;
  }
  return NormalizedText(std::move(out));
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> words;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) words.push_back(std::move(w));
  return words;
}

}  // namespace arena
