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

#ifndef ARENA_REMOTE_AGENT_H_
#define ARENA_REMOTE_AGENT_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "arena/agent.h"

namespace arena {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

// Accepts "host:port" and "tcp://host:port". Throws Error otherwise.
Endpoint parse_endpoint(std::string_view text);
std::string to_string(const Endpoint& endpoint);

struct RemoteDeadlines {
  // How long to wait for a buzz after each token and clue_end. 0 only picks
  // up lines that have already arrived.
  std::int64_t buzz_forward_ms = 1000;
  // How long to wait for the answer after buzz_granted; on expiry an empty
  // answer is submitted.
  std::int64_t answer_ms = 5000;
};

// Parsed line from a remote. kPass ends a buzz wait early.
struct RemoteMessage {
  enum class Kind { kBuzz, kAnswer, kPass, kUnknown, kMalformed };
  Kind kind = Kind::kMalformed;
  double confidence = 0.0;  // clamped into [0, 1]
  bool clamped = false;
  std::string text;         // answer text, or the problem for kUnknown/kMalformed
};

RemoteMessage parse_remote_line(std::string_view line);

// Talks newline-delimited JSON over one TCP connection per match.
class RemoteAgent : public Agent {
 public:
  using Logger = std::function<void(const std::string&)>;

  RemoteAgent(Endpoint endpoint, RemoteDeadlines deadlines, Logger logger = {});
  ~RemoteAgent() override;

  // Connects; throws Error when the endpoint is unreachable.
  void start(const std::string& team) override;
  void deliver(const AgentInbound& msg, std::vector<AgentOutbound>& out) override;
  void finish() override;

  bool silent() const { return silent_; }
  std::vector<std::string> log() const;

 private:
  enum class ReadResult { kLine, kTimeout, kClosed };

  ReadResult read_line(std::string& line, std::chrono::steady_clock::time_point deadline);
  bool send_line(const std::string& line);
  void go_silent(const std::string& why);
  void note(const std::string& message);

  Endpoint endpoint_;
  RemoteDeadlines deadlines_;
  Logger logger_;
  std::string team_;
  int fd_ = -1;
  std::string buffer_;
  bool silent_ = false;
  bool granted_ = false;
  mutable std::mutex log_mu_;
  std::vector<std::string> log_;
};

}  // namespace arena

#endif  // ARENA_REMOTE_AGENT_H_
