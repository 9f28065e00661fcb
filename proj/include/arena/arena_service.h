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

#ifndef ARENA_ARENA_SERVICE_H_
#define ARENA_ARENA_SERVICE_H_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arena/agent_spec.h"
#include "arena/eval_runner.h"
#include "arena/match_runner.h"
#include "arena/storage.h"

namespace arena {

enum class MatchStatus { kPending, kRunning, kFinished, kFailed };
std::string_view to_string(MatchStatus status);

struct MatchRequest {
  MatchConfig config;
  std::vector<std::string> riddle_ids;
  std::map<std::string, AgentSpec> slots;  // team -> agent or human
};

// {"config": {...}, "riddle_ids": [...], "agents": {"team": "oracle:1" | "human" | ...}}.
// When config.team_ids is absent the agent keys are used in sorted order.
MatchRequest match_request_from_json(const nlohmann::json& j);

struct ServiceOptions {
  std::filesystem::path data_dir;
  RemoteDeadlines deadlines;
  std::function<void(const std::string&)> log;
};

// Matches, eval jobs and datasets behind the HTTP API. Thread-safe. Errors
// are reported as NotFound (unknown id), NotReady (wrong state) or Error
// (bad request).
class ArenaService {
 public:
  explicit ArenaService(ServiceOptions options);
  ~ArenaService();
  ArenaService(const ArenaService&) = delete;
  ArenaService& operator=(const ArenaService&) = delete;

  // Returns the match handle. Matches without human slots start at once;
  // matches with human slots run on the wall clock once every slot joined.
  nlohmann::json create_match(const nlohmann::json& request);
  nlohmann::json match_json(const std::string& id) const;
  nlohmann::json list_matches() const;

  // {"team": T, "type": "join" | "buzz" | "answer", "text": ...}. Buzz and
  // answer block until the engine has ruled on them.
  InputAck submit_input(const std::string& id, const nlohmann::json& body);

  // Appends transcript lines [from, ...) to `out`, waiting up to `wait` when
  // none are available yet. Returns true once nothing more will follow.
  bool read_events(const std::string& id, std::size_t from, std::vector<std::string>& out,
                   std::chrono::milliseconds wait) const;

  // Starts an eval job in the background; returns its summary.
  nlohmann::json start_eval(const nlohmann::json& request);
  nlohmann::json eval_json(const std::string& id) const;
  // Throws NotReady until the job has finished.
  nlohmann::json eval_report(const std::string& id) const;
  nlohmann::json list_evals() const;

  nlohmann::json datasets() const;

  // Blocks until every running match and eval job has ended.
  void wait_idle();
  // Cancels running work and joins it.
  void shutdown();

  const DataDir& data() const { return data_; }

 private:
  struct MatchRecord;
  struct JobRecord;

  std::shared_ptr<MatchRecord> find_match(const std::string& id) const;
  std::shared_ptr<JobRecord> find_job(const std::string& id) const;
  std::shared_ptr<const CorpusIndex> index() const;
  void start_match(const std::shared_ptr<MatchRecord>& rec);
  void persist_match(const MatchRecord& rec) const;
  void load_existing();
  std::string new_id(const char* prefix);
  void log(const std::string& line) const;

  ServiceOptions options_;
  DataDir data_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<MatchRecord>> matches_;
  std::map<std::string, std::shared_ptr<JobRecord>> jobs_;
  mutable std::shared_ptr<const CorpusIndex> index_;
  std::atomic<bool> stopping_{false};
};

}  // namespace arena

#endif  // ARENA_ARENA_SERVICE_H_
