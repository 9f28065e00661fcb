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

#include "arena/match_engine.h"

#include <algorithm>
#include <cmath>

#include "arena/error.h"
#include "arena/text_norm.h"

namespace arena {

int points_for_clue(int clue_index) {
  if (clue_index < 1) throw Error("clue index must be >= 1, got " + std::to_string(clue_index));
  if (clue_index == 1) return 5;
  if (clue_index == 2) return 4;
  return 3;
}

AdjudicationResult adjudicate(std::string_view answer, const Riddle& riddle,
                              const Adjudication& mode) {
  AdjudicationResult r;
  if (riddle.gold_answers.empty()) return r;
  r.detail = fuzzy_match(answer, riddle.gold_answers, mode.threshold);
  r.correct = mode.mode == Adjudication::Mode::kStrictEm ? r.detail.em : r.detail.fm;
  return r;
}

std::string_view to_string(ClockKind clock) {
  return clock == ClockKind::kVirtual ? "virtual" : "wall";
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::kIdle: return "Idle";
    case Phase::kStreaming: return "Streaming";
    case Phase::kAwaitingAnswer: return "AwaitingAnswer";
    case Phase::kRiddleDone: return "RiddleDone";
    case Phase::kContestDone: return "ContestDone";
  }
  return "?";
}

void MatchConfig::validate() const {
  if (team_ids.empty() || team_ids.size() > kMaxTeams) {
    throw Error("a match needs 1 to 3 teams, got " + std::to_string(team_ids.size()));
  }
  std::set<std::string> seen;
  for (const auto& t : team_ids) {
    if (t.empty()) throw Error("team id must not be empty");
    if (!seen.insert(t).second) throw Error("duplicate team id \"" + t + "\"");
  }
  if (!std::isfinite(words_per_second) || words_per_second <= 0) {
    throw Error("words_per_second must be positive");
  }
  if (answer_deadline_ms <= 0) throw Error("answer_deadline_ms must be positive");
  if (inter_clue_pause_ms < 0) throw Error("inter_clue_pause_ms must be non-negative");
  if (!(adjudication.threshold > 0.0 && adjudication.threshold <= 1.0)) {
    throw Error("fuzzy threshold must lie in (0, 1]");
  }
}

std::int64_t MatchConfig::token_interval_ms() const {
  return std::max<std::int64_t>(1, std::llround(1000.0 / words_per_second));
}

nlohmann::json config_to_json(const MatchConfig& c) {
  return {
      {"team_ids", c.team_ids},
      {"words_per_second", c.words_per_second},
      {"answer_deadline_ms", c.answer_deadline_ms},
      {"adjudication_mode",
       c.adjudication.mode == Adjudication::Mode::kStrictEm ? "strict_em" : "lenient_fm"},
      {"fuzzy_threshold", c.adjudication.threshold},
      {"lockout_on_wrong", c.lockout_on_wrong},
      {"inter_clue_pause_ms", c.inter_clue_pause_ms},
      {"seed", c.seed},
      {"tie_break", c.tie_break == TieBreak::kReceiptOrder ? "receipt_order" : "seeded_random"},
      {"full_contest", c.full_contest},
      {"clock", std::string(to_string(c.clock))},
  };
}

MatchConfig config_from_json(const nlohmann::json& j) {
  MatchConfig c;
  try {
    if (!j.is_object()) throw Error("match config must be a JSON object");
    c.team_ids = j.at("team_ids").get<std::vector<std::string>>();
    c.words_per_second = j.value("words_per_second", c.words_per_second);
    c.answer_deadline_ms = j.value("answer_deadline_ms", c.answer_deadline_ms);
    const auto mode = j.value("adjudication_mode", std::string("strict_em"));
    if (mode == "strict_em") {
      c.adjudication.mode = Adjudication::Mode::kStrictEm;
    } else if (mode == "lenient_fm") {
      c.adjudication.mode = Adjudication::Mode::kLenientFm;
    } else {
      throw Error("unknown adjudication_mode \"" + mode + "\"");
    }
    c.adjudication.threshold = j.value("fuzzy_threshold", c.adjudication.threshold);
    c.lockout_on_wrong = j.value("lockout_on_wrong", c.lockout_on_wrong);
    c.inter_clue_pause_ms = j.value("inter_clue_pause_ms", c.inter_clue_pause_ms);
    c.seed = j.value("seed", c.seed);
    const auto tie = j.value("tie_break", std::string("receipt_order"));
    if (tie == "receipt_order") {
      c.tie_break = TieBreak::kReceiptOrder;
    } else if (tie == "seeded_random") {
      c.tie_break = TieBreak::kSeededRandom;
    } else {
      throw Error("unknown tie_break \"" + tie + "\"");
    }
    c.full_contest = j.value("full_contest", c.full_contest);
    const auto clock = j.value("clock", std::string("virtual"));
    if (clock == "virtual") {
      c.clock = ClockKind::kVirtual;
    } else if (clock == "wall") {
      c.clock = ClockKind::kWall;
    } else {
      throw Error("unknown clock \"" + clock + "\"");
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(std::string("malformed match config: ") + ex.what());
  }
  c.validate();
  return c;
}

nlohmann::json result_to_json(const ContestResult& result) {
  nlohmann::json riddles = nlohmann::json::array();
  for (const auto& r : result.riddles) {
    riddles.push_back({
        {"riddle_id", r.riddle_id},
        {"winner", r.winner ? nlohmann::json(*r.winner) : nlohmann::json(nullptr)},
        {"answered_on_clue",
         r.answered_on_clue ? nlohmann::json(*r.answered_on_clue) : nlohmann::json(nullptr)},
        {"points_awarded", r.points_awarded},
    });
  }
  return {{"points", result.points}, {"riddles", riddles}};
}

MatchEngine::MatchEngine(MatchConfig config, std::vector<Riddle> riddles)
    : config_(std::move(config)), riddles_(std::move(riddles)) {
  config_.validate();
  if (riddles_.empty()) throw Error("a match needs at least one riddle");
  if (config_.full_contest) {
    if (riddles_.size() != kAllSubjects.size()) {
      throw Error("a full contest needs exactly 4 riddles, got " +
                  std::to_string(riddles_.size()));
    }
    std::set<Subject> subjects;
    for (const auto& r : riddles_) {
      if (!subjects.insert(r.subject).second) {
        throw Error("duplicate subject " + std::string(to_string(r.subject)) +
                    " in full-contest mode");
      }
    }
  }
  for (const auto& r : riddles_) {
    if (r.clues.empty()) throw Error("riddle \"" + r.id + "\" has no clues");
    auto& per_clue = tokens_.emplace_back();
    for (const auto& clue : r.clues) {
      auto& words = per_clue.emplace_back();
      for (auto w : split_words(clue)) words.emplace_back(w);
    }
  }
}

MatchState MatchEngine::initial_state() const {
  MatchState s;
  for (const auto& t : config_.team_ids) s.scores[t] = 0;
  return s;
}

const std::vector<std::string>& MatchEngine::clue_tokens(std::size_t riddle,
                                                         int clue_index) const {
  return tokens_.at(riddle).at(static_cast<std::size_t>(clue_index - 1));
}

std::optional<Due> MatchEngine::next_due(const MatchState& s) const {
  switch (s.phase) {
    case Phase::kContestDone:
      return std::nullopt;
    case Phase::kAwaitingAnswer:
      return Due{s.deadline_ms, input::DeadlineExpired{}};
    default:
      return Due{s.next_emit_ms, input::Tick{}};
  }
}

ContestResult MatchEngine::result(const MatchState& s) const {
  return ContestResult{s.scores, s.outcomes};
}

namespace {

Transition reject(const MatchState& s, const MatchInput& in, std::string reason) {
  event::InputRejected p;
  p.seq = in.seq;
  p.reason = reason;
  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, input::Tick>) {
          p.input = "tick";
        } else if constexpr (std::is_same_v<T, input::DeadlineExpired>) {
          p.input = "deadline";
        } else if constexpr (std::is_same_v<T, input::Buzz>) {
          p.input = "buzz";
          p.team = a.team;
        } else {
          p.input = "answer";
          p.team = a.team;
          p.text = a.text;
        }
      },
      in.action);
  Transition tr{s, {}, reason};
  tr.events.push_back({std::max(s.clock_ms, in.t_ms), std::move(p)});
  return tr;
}

bool is_team(const MatchConfig& c, const std::string& team) {
  return std::find(c.team_ids.begin(), c.team_ids.end(), team) != c.team_ids.end();
}

}  // namespace

Transition MatchEngine::step(const MatchState& s, const MatchInput& in) const {
  if (const auto* b = std::get_if<input::Buzz>(&in.action)) return on_buzz(s, in, *b);
  if (const auto* a = std::get_if<input::Answer>(&in.action)) {
    if (!is_team(config_, a->team)) return reject(s, in, "unknown_team");
    if (s.phase == Phase::kContestDone) return reject(s, in, "contest_over");
    if (s.phase != Phase::kAwaitingAnswer || s.floor_team != a->team) {
      return reject(s, in, "no_buzz_granted");
    }
    return on_answer(s, std::max(s.clock_ms, in.t_ms), a->team, a->text);
  }
  if (std::holds_alternative<input::DeadlineExpired>(in.action)) {
    if (s.phase != Phase::kAwaitingAnswer) return reject(s, in, "no_deadline_pending");
    return on_answer(s, std::max(s.clock_ms, s.deadline_ms), *s.floor_team, "");
  }
  if (s.phase == Phase::kContestDone) return reject(s, in, "contest_over");
  if (s.phase == Phase::kAwaitingAnswer) return reject(s, in, "awaiting_answer");
  return on_tick(s, std::max(s.clock_ms, s.next_emit_ms));
}

void MatchEngine::schedule_after_riddle(MatchState& s, std::int64_t t) const {
  s.phase = Phase::kRiddleDone;
  s.floor_team.reset();
  s.next_step = s.riddle_index + 1 < riddles_.size() ? StreamStep::kRiddleStart
                                                     : StreamStep::kContestEnd;
  s.next_emit_ms = t + config_.inter_clue_pause_ms;
}

Transition MatchEngine::on_tick(const MatchState& prev, std::int64_t t) const {
  Transition tr{prev, {}, std::nullopt};
  MatchState& s = tr.state;
  s.clock_ms = t;
  auto emit = [&](EventPayload p) { tr.events.push_back({t, std::move(p)}); };
  switch (s.next_step) {
    case StreamStep::kRiddleStart: {
      if (s.phase == Phase::kRiddleDone) ++s.riddle_index;
      const Riddle& r = riddles_[s.riddle_index];
      s.phase = Phase::kStreaming;
      s.clue_index = 0;
      s.token_index = 0;
      s.locked_out.clear();
      emit(event::RiddleStart{r.id, r.subject});
      s.next_step = StreamStep::kClueStart;
      s.next_emit_ms = t;
      break;
    }
    case StreamStep::kClueStart: {
      ++s.clue_index;
      s.token_index = 0;
      emit(event::ClueStart{s.clue_index});
      s.next_step = clue_tokens(s.riddle_index, s.clue_index).empty() ? StreamStep::kClueEnd
                                                                      : StreamStep::kToken;
      s.next_emit_ms = t;
      break;
    }
    case StreamStep::kToken: {
      const auto& words = clue_tokens(s.riddle_index, s.clue_index);
      emit(event::Token{s.clue_index, words[s.token_index]});
      ++s.token_index;
      s.next_step = s.token_index < words.size() ? StreamStep::kToken : StreamStep::kClueEnd;
      s.next_emit_ms = t + config_.token_interval_ms();
      break;
    }
    case StreamStep::kClueEnd: {
      emit(event::ClueEnd{s.clue_index});
      const auto n = static_cast<int>(riddles_[s.riddle_index].clues.size());
      s.next_step = s.clue_index < n ? StreamStep::kClueStart : StreamStep::kRiddleEnd;
      s.next_emit_ms = t + config_.inter_clue_pause_ms;
      break;
    }
    case StreamStep::kRiddleEnd: {
      emit(event::RiddleEnd{std::nullopt});
      s.outcomes.push_back({riddles_[s.riddle_index].id, std::nullopt, std::nullopt, 0});
      schedule_after_riddle(s, t);
      break;
    }
    case StreamStep::kContestEnd: {
      emit(event::ContestEnd{s.scores});
      s.phase = Phase::kContestDone;
      break;
    }
  }
  return tr;
}

Transition MatchEngine::on_buzz(const MatchState& s, const MatchInput& in,
                                const input::Buzz& b) const {
  if (!is_team(config_, b.team)) return reject(s, in, "unknown_team");
  if (s.phase == Phase::kContestDone) return reject(s, in, "contest_over");
  if (s.phase == Phase::kIdle || s.phase == Phase::kRiddleDone) {
    return reject(s, in, "not_streaming");
  }
  if (s.locked_out.count(b.team)) return reject(s, in, "locked_out");
  if (s.phase == Phase::kAwaitingAnswer) return reject(s, in, "floor_taken");
  if (s.clue_index == 0) return reject(s, in, "no_clue_yet");

  const std::int64_t t = std::max(s.clock_ms, in.t_ms);
  Transition tr{s, {}, std::nullopt};
  MatchState& n = tr.state;
  n.clock_ms = t;
  n.phase = Phase::kAwaitingAnswer;
  n.floor_team = b.team;
  n.deadline_ms = t + config_.answer_deadline_ms;
  n.resume_delay_ms = std::max<std::int64_t>(0, s.next_emit_ms - t);
  tr.events.push_back({t, event::Buzz{b.team, in.seq}});
  return tr;
}

Transition MatchEngine::on_answer(const MatchState& prev, std::int64_t t,
                                  const std::string& team, const std::string& text) const {
  Transition tr{prev, {}, std::nullopt};
  MatchState& s = tr.state;
  s.clock_ms = t;
  tr.events.push_back({t, event::AnswerGiven{team, text}});
  const Riddle& r = riddles_[s.riddle_index];
  if (adjudicate(text, r, config_.adjudication).correct) {
    const int pts = points_for_clue(s.clue_index);
    s.scores[team] += pts;
    s.outcomes.push_back({r.id, team, s.clue_index, pts});
    tr.events.push_back({t, event::Verdict{team, true, pts}});
    tr.events.push_back({t, event::RiddleEnd{team}});
    schedule_after_riddle(s, t);
  } else {
    tr.events.push_back({t, event::Verdict{team, false, 0}});
    if (config_.lockout_on_wrong) s.locked_out.insert(team);
    s.phase = Phase::kStreaming;
    s.floor_team.reset();
    s.next_emit_ms = t + s.resume_delay_ms;
  }
  return tr;
}

ContestResult result_from_transcript(std::span<const TranscriptEvent> events) {
  ContestResult result;
  std::optional<RiddleOutcome> current;
  int clue = 0;
  for (const auto& e : events) {
    if (const auto* p = e.as<event::MatchStart>()) {
      for (const auto& t : p->teams) result.points.emplace(t, 0);
    } else if (const auto* p = e.as<event::RiddleStart>()) {
      current = RiddleOutcome{p->riddle_id, std::nullopt, std::nullopt, 0};
      clue = 0;
    } else if (const auto* p = e.as<event::ClueStart>()) {
      clue = p->clue_index;
    } else if (const auto* p = e.as<event::Verdict>()) {
      result.points.emplace(p->team, 0);
      if (p->correct && current) {
        current->winner = p->team;
        current->answered_on_clue = clue;
        current->points_awarded = p->points;
        result.points[p->team] += p->points;
      }
    } else if (e.as<event::RiddleEnd>()) {
      if (!current) throw Error("RiddleEnd without RiddleStart in transcript");
      result.riddles.push_back(*current);
      current.reset();
    }
  }
  return result;
}

ContestResult replay_human(std::span<const HumanRecord> records,
                           std::span<const Riddle> riddles) {
  std::map<std::string, const Riddle*> by_id;
  for (const auto& r : riddles) by_id[r.id] = &r;
  ContestResult result;
  for (const auto& rec : records) {
    auto it = by_id.find(rec.riddle_id);
    if (it == by_id.end()) throw NotFound("unknown riddle id \"" + rec.riddle_id + "\"");
    RiddleOutcome o{rec.riddle_id, std::nullopt, std::nullopt, 0};
    if (rec.winning_team) {
      if (!rec.answered_on_clue) {
        throw Error("record for \"" + rec.riddle_id + "\" has a winner but no clue");
      }
      const int k = *rec.answered_on_clue;
      const auto n = static_cast<int>(it->second->clues.size());
      if (k < 1 || k > n) {
        throw Error("riddle \"" + rec.riddle_id + "\" answered on clue " + std::to_string(k) +
                    " but has " + std::to_string(n) + " clues");
      }
      o.winner = rec.winning_team;
      o.answered_on_clue = k;
      o.points_awarded = points_for_clue(k);
      result.points[*rec.winning_team] += o.points_awarded;
    }
    result.riddles.push_back(std::move(o));
  }
  return result;
}

}  // namespace arena
