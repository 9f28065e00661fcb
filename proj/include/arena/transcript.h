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

#ifndef ARENA_TRANSCRIPT_H_
#define ARENA_TRANSCRIPT_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "arena/subject.h"

namespace arena {

namespace event {

// Written by the driver before the first engine event; records the clock.
struct MatchStart {
  std::string clock;  // "virtual" or "wall"
  std::vector<std::string> teams;
  friend bool operator==(const MatchStart&, const MatchStart&) = default;
};
struct RiddleStart {
  std::string riddle_id;
  Subject subject = Subject::kPhysics;
  friend bool operator==(const RiddleStart&, const RiddleStart&) = default;
};
struct ClueStart {
  int clue_index = 0;
  friend bool operator==(const ClueStart&, const ClueStart&) = default;
};
struct Token {
  int clue_index = 0;
  std::string text;
  friend bool operator==(const Token&, const Token&) = default;
};
struct ClueEnd {
  int clue_index = 0;
  friend bool operator==(const ClueEnd&, const ClueEnd&) = default;
};
struct Buzz {
  std::string team;
  std::uint64_t seq = 0;
  friend bool operator==(const Buzz&, const Buzz&) = default;
};
struct AnswerGiven {
  std::string team;
  std::string text;
  friend bool operator==(const AnswerGiven&, const AnswerGiven&) = default;
};
struct Verdict {
  std::string team;
  bool correct = false;
  int points = 0;
  friend bool operator==(const Verdict&, const Verdict&) = default;
};
struct RiddleEnd {
  std::optional<std::string> winner;
  friend bool operator==(const RiddleEnd&, const RiddleEnd&) = default;
};
struct ContestEnd {
  std::map<std::string, int> scores;
  friend bool operator==(const ContestEnd&, const ContestEnd&) = default;
};
// An input the engine refused; logged so replays reproduce it.
struct InputRejected {
  std::string team;
  std::string input;  // "buzz", "answer", "tick" or "deadline"
  std::uint64_t seq = 0;
  std::string reason;
  std::string text;  // answer text, if any
  friend bool operator==(const InputRejected&, const InputRejected&) = default;
};

}  // namespace event

using EventPayload =
    std::variant<event::MatchStart, event::RiddleStart, event::ClueStart, event::Token,
                 event::ClueEnd, event::Buzz, event::AnswerGiven, event::Verdict,
                 event::RiddleEnd, event::ContestEnd, event::InputRejected>;

struct TranscriptEvent {
  std::int64_t t_ms = 0;
  EventPayload payload;

  // "MatchStart", "RiddleStart", ... as written in the "kind" field.
  std::string_view kind() const;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&payload);
  }

  friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

// {"t_ms": n, "kind": "...", <payload fields>}
nlohmann::json event_to_json(const TranscriptEvent& e);
// Throws Error on unknown kinds or missing fields.
TranscriptEvent event_from_json(const nlohmann::json& j);

// One compact JSON object per line (keys sorted, so output is byte-stable).
std::string event_to_line(const TranscriptEvent& e);
void write_transcript(std::ostream& out, const std::vector<TranscriptEvent>& events);
std::vector<TranscriptEvent> read_transcript(std::istream& in);

}  // namespace arena

#endif  // ARENA_TRANSCRIPT_H_
