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

#ifndef ARENA_TEXT_NORM_H_
#define ARENA_TEXT_NORM_H_

#include <string>
#include <string_view>
#include <vector>

namespace arena {

// Text that has been lowercased, stripped of punctuation and
// whitespace-collapsed. Only the normalizers below construct one.
class NormalizedText {
 public:
  NormalizedText() = default;

  const std::string& value() const { return value_; }
  bool empty() const { return value_.empty(); }
  // Space-separated tokens of the normalized value.
  std::vector<std::string> tokens() const;

  friend bool operator==(const NormalizedText&, const NormalizedText&) = default;

 private:
  explicit NormalizedText(std::string v) : value_(std::move(v)) {}
  friend NormalizedText normalize_text(std::string_view s);
  friend NormalizedText normalize_answer(std::string_view s);

  std::string value_;
};

// Lowercases, maps hyphens and slashes to spaces, deletes every other
// punctuation character (Unicode P* plus the degree, prime and double-prime
// signs), collapses whitespace runs and trims. Digits are kept. Invalid UTF-8
// bytes are dropped.
NormalizedText normalize_text(std::string_view s);

// normalize_text followed by removal of the whole-word articles
// "the", "a" and "an". May produce an empty value.
NormalizedText normalize_answer(std::string_view s);

// Splits on ASCII whitespace without any normalization.
std::vector<std::string> split_words(std::string_view s);

}  // namespace arena

#endif  // ARENA_TEXT_NORM_H_
