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

#ifndef ARENA_AGENT_H_
#define ARENA_AGENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "arena/subject.h"

namespace arena {

namespace inbound {
struct RiddleStart {
  std::string riddle_id;
  Subject subject = Subject::kPhysics;
  friend bool operator==(const RiddleStart&, const RiddleStart&) = default;
};
struct Token {
  int clue_index = 0;
  std::string text;
  std::int64_t t_ms = 0;
  friend bool operator==(const Token&, const Token&) = default;
};
struct ClueEnd {
  int clue_index = 0;
  friend bool operator==(const ClueEnd&, const ClueEnd&) = default;
};
struct BuzzGranted {
  std::int64_t deadline_ms = 0;  // time left to answer
  friend bool operator==(const BuzzGranted&, const BuzzGranted&) = default;
};
struct BuzzDenied {
  std::string reason;
  friend bool operator==(const BuzzDenied&, const BuzzDenied&) = default;
};
struct RiddleEnd {
  std::optional<std::string> winner;
  int points = 0;
  friend bool operator==(const RiddleEnd&, const RiddleEnd&) = default;
};
}  // namespace inbound

using AgentInbound = std::variant<inbound::RiddleStart, inbound::Token, inbound::ClueEnd,
                                  inbound::BuzzGranted, inbound::BuzzDenied, inbound::RiddleEnd>;

namespace outbound {
struct BuzzRequest {
  double confidence = 1.0;  // in [0, 1]
  friend bool operator==(const BuzzRequest&, const BuzzRequest&) = default;
};
struct AnswerSubmission {
  std::string text;
  friend bool operator==(const AnswerSubmission&, const AnswerSubmission&) = default;
};
}  // namespace outbound

using AgentOutbound = std::variant<outbound::BuzzRequest, outbound::AnswerSubmission>;

// A competitor. The driver calls deliver() once per inbound message, in
// transcript order, and enqueues whatever the agent appends to `out`.
class Agent {
 public:
  virtual ~Agent() = default;

  // Called once before the first message. Throws Error if the agent cannot
  // take part (for a remote agent: the endpoint is unreachable).
  virtual void start(const std::string& team) { (void)team; }
  virtual void deliver(const AgentInbound& msg, std::vector<AgentOutbound>& out) = 0;
  virtual void finish() {}
};

// Wire form: one JSON object per message, discriminated by "type".
nlohmann::json inbound_to_wire(const AgentInbound& msg);
nlohmann::json outbound_to_wire(const AgentOutbound& msg);

}  // namespace arena

#endif  // ARENA_AGENT_H_
