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

#ifndef ARENA_EVAL_RUNNER_H_
#define ARENA_EVAL_RUNNER_H_

#include <atomic>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "arena/agent_spec.h"
#include "arena/match_engine.h"
#include "arena/metrics.h"

namespace arena {

// batch: every clue at once, then the floor is granted; latency is wall time.
// live: a single-team match per riddle on the virtual clock; latency is
// virtual time from riddle start to the answer.
enum class EvalMode { kBatch, kLive };

std::string_view to_string(EvalMode mode);
EvalMode parse_eval_mode(std::string_view text);

struct EvalSpec {
  std::string split = "test";
  AgentSpec agent;
  EvalMode mode = EvalMode::kBatch;
  double fuzzy_threshold = kDefaultFuzzyThreshold;
  RemoteDeadlines deadlines;
  // Pacing for live mode; team_ids and full_contest are overridden.
  MatchConfig live;
};

nlohmann::json eval_spec_to_json(const EvalSpec& spec);
EvalSpec eval_spec_from_json(const nlohmann::json& j);

struct EvalItem {
  std::string riddle_id;
  Subject subject = Subject::kPhysics;
  std::string prediction;
  double latency_s = 0.0;
  MatchVerdict verdict;
  std::optional<int> answered_on_clue;  // live mode, when the agent answered

  friend bool operator==(const EvalItem& a, const EvalItem& b) {
    return a.riddle_id == b.riddle_id && a.subject == b.subject &&
           a.prediction == b.prediction && a.latency_s == b.latency_s &&
           a.verdict.em == b.verdict.em && a.verdict.fm == b.verdict.fm &&
           a.verdict.best_f1 == b.verdict.best_f1 && a.answered_on_clue == b.answered_on_clue;
  }
};

nlohmann::json eval_item_to_json(const EvalItem& item);
EvalItem eval_item_from_json(const nlohmann::json& j);

enum class JobStatus { kPending, kRunning, kFinished, kFailed };
std::string_view to_string(JobStatus status);

struct EvalJob {
  std::string job_id;
  std::string created_at;
  EvalSpec spec;
  JobStatus status = JobStatus::kPending;
  std::size_t total = 0;
  std::vector<EvalItem> items;
  std::optional<EvalReport> report;  // present iff finished
  std::string error;
};

// Summary for listings; the report is included when present.
nlohmann::json job_to_json(const EvalJob& job);
// {"job_id", "split", "agent", "mode", "fuzzy_threshold", "report"}.
nlohmann::json job_report_json(const EvalJob& job);

EvalReport report_from_items(std::span<const EvalItem> items);

struct EvalHooks {
  std::function<void(const EvalItem&)> on_item;
  std::function<void(const std::string&)> log;
  const std::atomic<bool>* cancel = nullptr;
};

// Runs the job over `riddles` in order, filling items, status, report and
// error. Failures (an unreachable remote, a lost connection, cancellation)
// leave status kFailed with the items gathered so far.
void run_eval(EvalJob& job, std::span<const Riddle> riddles, const CorpusIndex* index,
              const EvalHooks& hooks = {});

// Append-only job log: a "job" header line, one "item" line per riddle and a
// closing "end" line. A log without an "end" line loads as failed.
void append_job_header(const std::filesystem::path& path, const EvalJob& job);
void append_job_item(const std::filesystem::path& path, const EvalItem& item);
void append_job_end(const std::filesystem::path& path, const EvalJob& job);
EvalJob load_job_log(const std::filesystem::path& path);

}  // namespace arena

#endif  // ARENA_EVAL_RUNNER_H_
