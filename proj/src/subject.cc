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

#include "arena/subject.h"

#include <algorithm>
#include <cctype>

namespace arena {

std::string_view to_string(Subject s) {
  switch (s) {
    case Subject::kBiology:
      return "Biology";
    case Subject::kChemistry:
      return "Chemistry";
    case Subject::kPhysics:
      return "Physics";
    case Subject::kMathematics:
      return "Mathematics";
  }
  return "Unknown";
}

std::optional<Subject> parse_subject(std::string_view name) {
  while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front())))
    name.remove_prefix(1);
  while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back())))
    name.remove_suffix(1);
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "biology") return Subject::kBiology;
  if (lower == "chemistry") return Subject::kChemistry;
  if (lower == "physics") return Subject::kPhysics;
  if (lower == "mathematics" || lower == "maths" || lower == "math")
    return Subject::kMathematics;
  return std::nullopt;
}

}  // namespace arena
