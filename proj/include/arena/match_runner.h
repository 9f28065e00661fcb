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

#ifndef ARENA_MATCH_RUNNER_H_
#define ARENA_MATCH_RUNNER_H_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arena/agent.h"
#include "arena/match_engine.h"

namespace arena {

// team -> agent. Teams without an entry only act through MatchDriver::submit.
using AgentMap = std::map<std::string, Agent*>;

struct InputAck {
  bool accepted = false;
  std::uint64_t seq = 0;
  std::string reason;
};

struct MatchRun {
  ContestResult result;
  std::vector<TranscriptEvent> transcript;
};

// Feeds one engine from a single ordered input queue. Inputs are ordered by
// (t_ms, seq); at equal times queued inputs are applied before scheduled
// ticks. With the virtual clock the run never sleeps.
class MatchDriver {
 public:
  using EventSink = std::function<void(const TranscriptEvent&)>;

  MatchDriver(MatchEngine engine, AgentMap agents, EventSink sink = {});
  MatchDriver(const MatchDriver&) = delete;
  MatchDriver& operator=(const MatchDriver&) = delete;

  // Thread-safe. The input is stamped with the current clock and a receipt
  // sequence number; the future resolves once the engine has ruled on it.
  std::future<InputAck> submit(const std::string& team, MatchAction action);

  // Runs the match to completion on the calling thread.
  MatchRun run();

  // Thread-safe. Makes run() return early with the transcript so far.
  void cancel();

 private:
  struct Pending {
    MatchAction action;
    std::optional<std::promise<InputAck>> ack;
  };
  using Key = std::pair<std::int64_t, std::uint64_t>;

  std::int64_t now_ms() const;
  void push(std::int64_t t, MatchAction action, std::optional<std::promise<InputAck>> ack);
  void dispatch(const TranscriptEvent& e, const MatchState& state);
  void emit(const TranscriptEvent& e);

  MatchEngine engine_;
  AgentMap agents_;
  EventSink sink_;
  std::vector<std::string> dispatch_order_;
  std::mt19937_64 rng_;
  std::chrono::steady_clock::time_point wall_start_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::map<Key, Pending> queue_;
  std::uint64_t next_seq_ = 1;
  std::int64_t clock_ms_ = 0;
  bool running_ = false;
  bool done_ = false;
  bool cancelled_ = false;

  std::vector<TranscriptEvent> transcript_;
};

// Runs a match with the clock named in the config.
MatchRun run_match(const MatchConfig& config, std::vector<Riddle> riddles,
                   const AgentMap& agents);

// Re-feeds the Buzz, AnswerGiven and InputRejected events of `transcript`
// through a fresh engine. Throws Error if the replay diverges.
MatchRun replay_transcript(const MatchConfig& config, std::vector<Riddle> riddles,
                           std::span<const TranscriptEvent> transcript);

}  // namespace arena

#endif  // ARENA_MATCH_RUNNER_H_
