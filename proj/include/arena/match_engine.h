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

#ifndef ARENA_MATCH_ENGINE_H_
#define ARENA_MATCH_ENGINE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "arena/metrics.h"
#include "arena/riddle_data.h"
#include "arena/transcript.h"

namespace arena {

inline constexpr std::size_t kMaxTeams = 3;

// 1 -> 5, 2 -> 4, >= 3 -> 3. Throws Error for clue_index < 1.
int points_for_clue(int clue_index);

struct Adjudication {
  enum class Mode { kStrictEm, kLenientFm };
  Mode mode = Mode::kStrictEm;
  double threshold = kDefaultFuzzyThreshold;  // lenient_fm only
};

struct AdjudicationResult {
  bool correct = false;
  MatchVerdict detail;
};

AdjudicationResult adjudicate(std::string_view answer, const Riddle& riddle,
                              const Adjudication& mode);

enum class TieBreak { kReceiptOrder, kSeededRandom };
enum class ClockKind { kVirtual, kWall };

std::string_view to_string(ClockKind clock);

struct MatchConfig {
  std::vector<std::string> team_ids;
  double words_per_second = 2.5;
  std::int64_t answer_deadline_ms = 5000;
  Adjudication adjudication;
  bool lockout_on_wrong = true;
  std::int64_t inter_clue_pause_ms = 1000;
  std::uint64_t seed = 0;
  TieBreak tie_break = TieBreak::kReceiptOrder;
  // Requires exactly four riddles with distinct subjects.
  bool full_contest = true;
  ClockKind clock = ClockKind::kVirtual;

  // Throws Error when a field is out of range.
  void validate() const;
  // Interval between consecutive tokens, at least 1 ms.
  std::int64_t token_interval_ms() const;
};

nlohmann::json config_to_json(const MatchConfig& config);
// Missing fields take their defaults; "team_ids" is required.
MatchConfig config_from_json(const nlohmann::json& j);

struct RiddleOutcome {
  std::string riddle_id;
  std::optional<std::string> winner;
  std::optional<int> answered_on_clue;
  int points_awarded = 0;
  friend bool operator==(const RiddleOutcome&, const RiddleOutcome&) = default;
};

struct ContestResult {
  std::map<std::string, int> points;
  std::vector<RiddleOutcome> riddles;
  friend bool operator==(const ContestResult&, const ContestResult&) = default;
};

nlohmann::json result_to_json(const ContestResult& result);

enum class Phase { kIdle, kStreaming, kAwaitingAnswer, kRiddleDone, kContestDone };
enum class StreamStep { kRiddleStart, kClueStart, kToken, kClueEnd, kRiddleEnd, kContestEnd };

std::string_view to_string(Phase phase);

struct MatchState {
  Phase phase = Phase::kIdle;
  std::size_t riddle_index = 0;
  int clue_index = 0;            // clue being or last read; 0 before the first clue
  std::size_t token_index = 0;   // tokens of the current clue already emitted
  StreamStep next_step = StreamStep::kRiddleStart;
  std::int64_t next_emit_ms = 0;
  std::int64_t clock_ms = 0;
  std::optional<std::string> floor_team;  // set while AwaitingAnswer
  std::int64_t deadline_ms = 0;
  std::int64_t resume_delay_ms = 0;
  std::map<std::string, int> scores;
  std::set<std::string> locked_out;
  std::vector<RiddleOutcome> outcomes;

  friend bool operator==(const MatchState&, const MatchState&) = default;
};

namespace input {
struct Tick {};
struct Buzz {
  std::string team;
};
struct Answer {
  std::string team;
  std::string text;
};
struct DeadlineExpired {};
}  // namespace input

using MatchAction = std::variant<input::Tick, input::Buzz, input::Answer, input::DeadlineExpired>;

struct MatchInput {
  std::int64_t t_ms = 0;
  std::uint64_t seq = 0;
  MatchAction action;
};

struct Transition {
  MatchState state;
  std::vector<TranscriptEvent> events;
  std::optional<std::string> rejection;  // reason, when the input was refused
};

struct Due {
  std::int64_t t_ms = 0;
  MatchAction action;  // Tick or DeadlineExpired
};

class MatchEngine {
 public:
  // Throws Error on an invalid config, an empty riddle list, or (in
  // full-contest mode) anything but four riddles with distinct subjects.
  MatchEngine(MatchConfig config, std::vector<Riddle> riddles);

  MatchState initial_state() const;

  // Pure transition. Illegal inputs leave the state untouched and yield a
  // single InputRejected event.
  Transition step(const MatchState& state, const MatchInput& in) const;

  // The next engine-scheduled input, or nothing once the contest is over.
  std::optional<Due> next_due(const MatchState& state) const;

  ContestResult result(const MatchState& state) const;

  const MatchConfig& config() const { return config_; }
  const std::vector<Riddle>& riddles() const { return riddles_; }
  const std::vector<std::string>& clue_tokens(std::size_t riddle, int clue_index) const;

 private:
  Transition on_tick(const MatchState& s, std::int64_t t) const;
  Transition on_buzz(const MatchState& s, const MatchInput& in, const input::Buzz& b) const;
  Transition on_answer(const MatchState& s, std::int64_t t, const std::string& team,
                       const std::string& text) const;
  void schedule_after_riddle(MatchState& s, std::int64_t t) const;

  MatchConfig config_;
  std::vector<Riddle> riddles_;
  std::vector<std::vector<std::vector<std::string>>> tokens_;
};

// Rebuilds the result from Verdict and RiddleEnd events alone.
ContestResult result_from_transcript(std::span<const TranscriptEvent> events);

// Throws NotFound for an unknown riddle id and Error when answered_on_clue is
// out of range for the riddle.
ContestResult replay_human(std::span<const HumanRecord> records, std::span<const Riddle> riddles);

}  // namespace arena

#endif  // ARENA_MATCH_ENGINE_H_
