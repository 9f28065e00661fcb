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

#ifndef ARENA_SUBJECT_H_
#define ARENA_SUBJECT_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace arena {

enum class Subject { kBiology, kChemistry, kPhysics, kMathematics };

inline constexpr std::array<Subject, 4> kAllSubjects = {
    Subject::kBiology, Subject::kChemistry, Subject::kPhysics,
    Subject::kMathematics};

// Canonical capitalized name, e.g. "Physics".
std::string_view to_string(Subject s);

// Case-insensitive; surrounding whitespace ignored. "Math" and "Maths" are
// accepted for Mathematics.
std::optional<Subject> parse_subject(std::string_view name);

}  // namespace arena

#endif  // ARENA_SUBJECT_H_
