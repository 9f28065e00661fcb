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

#include "arena/match_runner.h"

#include <algorithm>

#include "arena/error.h"
#include "arena/random.h"

namespace arena {

MatchDriver::MatchDriver(MatchEngine engine, AgentMap agents, EventSink sink)
    : engine_(std::move(engine)),
      agents_(std::move(agents)),
      sink_(std::move(sink)),
      rng_(engine_.config().seed) {
  for (const auto& [team, agent] : agents_) {
    const auto& teams = engine_.config().team_ids;
    if (std::find(teams.begin(), teams.end(), team) == teams.end()) {
      throw Error("agent bound to unknown team \"" + team + "\"");
    }
    if (agent == nullptr) throw Error("null agent for team \"" + team + "\"");
  }
  for (const auto& team : engine_.config().team_ids) {
    if (agents_.count(team)) dispatch_order_.push_back(team);
  }
}

std::int64_t MatchDriver::now_ms() const {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               wall_start_)
      .count();
}

void MatchDriver::push(std::int64_t t, MatchAction action,
                       std::optional<std::promise<InputAck>> ack) {
  queue_.emplace(Key{t, next_seq_++}, Pending{std::move(action), std::move(ack)});
}

std::future<InputAck> MatchDriver::submit(const std::string& team, MatchAction action) {
  std::promise<InputAck> promise;
  auto future = promise.get_future();
  std::visit(
      [&](auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, input::Buzz> || std::is_same_v<T, input::Answer>) {
          a.team = team;
        }
      },
      action);
  std::lock_guard lock(mu_);
  if (done_ || cancelled_) {
    promise.set_value({false, 0, "match_finished"});
    return future;
  }
  std::int64_t t = clock_ms_;
  if (running_ && engine_.config().clock == ClockKind::kWall) t = std::max(t, now_ms());
  push(t, std::move(action), std::move(promise));
  cv_.notify_all();
  return future;
}

void MatchDriver::cancel() {
  std::lock_guard lock(mu_);
  cancelled_ = true;
  cv_.notify_all();
}

void MatchDriver::emit(const TranscriptEvent& e) {
  transcript_.push_back(e);
  if (sink_) sink_(e);
}

void MatchDriver::dispatch(const TranscriptEvent& e, const MatchState& state) {
  std::vector<std::pair<std::string, AgentInbound>> msgs;
  auto to_all = [&](AgentInbound m) {
    for (const auto& team : dispatch_order_) msgs.emplace_back(team, m);
  };
  if (const auto* p = e.as<event::RiddleStart>()) {
    to_all(inbound::RiddleStart{p->riddle_id, p->subject});
  } else if (const auto* p = e.as<event::Token>()) {
    to_all(inbound::Token{p->clue_index, p->text, e.t_ms});
  } else if (const auto* p = e.as<event::ClueEnd>()) {
    to_all(inbound::ClueEnd{p->clue_index});
  } else if (const auto* p = e.as<event::Buzz>()) {
    msgs.emplace_back(p->team, inbound::BuzzGranted{engine_.config().answer_deadline_ms});
  } else if (const auto* p = e.as<event::InputRejected>()) {
    if (p->input == "buzz") msgs.emplace_back(p->team, inbound::BuzzDenied{p->reason});
  } else if (const auto* p = e.as<event::RiddleEnd>()) {
    int points = 0;
    if (p->winner && !state.outcomes.empty()) points = state.outcomes.back().points_awarded;
    to_all(inbound::RiddleEnd{p->winner, points});
  }
  if (msgs.empty()) return;
  if (msgs.size() > 1 && engine_.config().tie_break == TieBreak::kSeededRandom) {
    seeded_shuffle(std::span(msgs), rng_);
  }
  for (auto& [team, msg] : msgs) {
    auto it = agents_.find(team);
    if (it == agents_.end()) continue;
    std::vector<AgentOutbound> out;
    it->second->deliver(msg, out);
    if (out.empty()) continue;
    std::lock_guard lock(mu_);
    std::int64_t t = e.t_ms;
    if (engine_.config().clock == ClockKind::kWall) t = std::max(t, now_ms());
    for (auto& o : out) {
      if (auto* b = std::get_if<outbound::BuzzRequest>(&o)) {
        (void)b;
        push(t, input::Buzz{team}, std::nullopt);
      } else {
        push(t, input::Answer{team, std::get<outbound::AnswerSubmission>(o).text}, std::nullopt);
      }
    }
  }
}

MatchRun MatchDriver::run() {
  const auto& config = engine_.config();
  const bool wall = config.clock == ClockKind::kWall;
  {
    std::lock_guard lock(mu_);
    if (running_ || done_) throw Error("match already run");
    running_ = true;
    wall_start_ = std::chrono::steady_clock::now();
  }
  for (const auto& team : dispatch_order_) agents_.at(team)->start(team);

  emit({0, event::MatchStart{std::string(to_string(config.clock)), config.team_ids}});
  MatchState state = engine_.initial_state();
  while (auto due = engine_.next_due(state)) {
    MatchInput in;
    std::optional<std::promise<InputAck>> ack;
    {
      std::unique_lock lock(mu_);
      auto ready = [&] {
        return cancelled_ || (!queue_.empty() && queue_.begin()->first.first <= due->t_ms);
      };
      if (wall) {
        cv_.wait_until(lock, wall_start_ + std::chrono::milliseconds(due->t_ms), ready);
      }
      if (cancelled_) break;
      if (ready()) {
        auto node = queue_.extract(queue_.begin());
        in = {node.key().first, node.key().second, std::move(node.mapped().action)};
        ack = std::move(node.mapped().ack);
      } else {
        in = {due->t_ms, 0, due->action};
      }
    }
    Transition tr = engine_.step(state, in);
    state = std::move(tr.state);
    {
      std::lock_guard lock(mu_);
      clock_ms_ = state.clock_ms;
    }
    if (ack) ack->set_value({!tr.rejection, in.seq, tr.rejection.value_or("")});
    for (const auto& e : tr.events) {
      emit(e);
      dispatch(e, state);
    }
  }
  {
    std::lock_guard lock(mu_);
    done_ = true;
    for (auto& [key, pending] : queue_) {
      if (pending.ack) pending.ack->set_value({false, key.second, "match_finished"});
    }
    queue_.clear();
  }
  for (const auto& team : dispatch_order_) agents_.at(team)->finish();
  return {engine_.result(state), transcript_};
}

MatchRun run_match(const MatchConfig& config, std::vector<Riddle> riddles,
                   const AgentMap& agents) {
  MatchDriver driver(MatchEngine(config, std::move(riddles)), agents);
  return driver.run();
}

MatchRun replay_transcript(const MatchConfig& config, std::vector<Riddle> riddles,
                           std::span<const TranscriptEvent> transcript) {
  struct Replayed {
    std::size_t index;
    MatchInput input;
  };
  std::vector<Replayed> inputs;
  for (std::size_t i = 0; i < transcript.size(); ++i) {
    const auto& e = transcript[i];
    if (const auto* p = e.as<event::Buzz>()) {
      inputs.push_back({i, {e.t_ms, p->seq, input::Buzz{p->team}}});
    } else if (const auto* p = e.as<event::AnswerGiven>()) {
      inputs.push_back({i, {e.t_ms, 0, input::Answer{p->team, p->text}}});
    } else if (const auto* p = e.as<event::InputRejected>()) {
      if (p->input == "buzz") {
        inputs.push_back({i, {e.t_ms, p->seq, input::Buzz{p->team}}});
      } else if (p->input == "answer") {
        inputs.push_back({i, {e.t_ms, p->seq, input::Answer{p->team, p->text}}});
      }
    }
  }

  MatchEngine engine(config, std::move(riddles));
  MatchRun run;
  if (!transcript.empty() && transcript.front().as<event::MatchStart>()) {
    run.transcript.push_back(transcript.front());
  }
  MatchState state = engine.initial_state();
  std::size_t next = 0;
  for (;;) {
    MatchInput in;
    if (next < inputs.size() && inputs[next].index <= run.transcript.size()) {
      if (inputs[next].index < run.transcript.size()) {
        throw Error("replay diverged before event " + std::to_string(inputs[next].index));
      }
      in = inputs[next++].input;
    } else if (auto due = engine.next_due(state)) {
      in = {due->t_ms, 0, due->action};
    } else {
      break;
    }
    Transition tr = engine.step(state, in);
    state = std::move(tr.state);
    for (auto& e : tr.events) run.transcript.push_back(std::move(e));
  }
  if (next < inputs.size()) throw Error("replay ended with unused inputs");
  run.result = engine.result(state);
  return run;
}

}  // namespace arena
