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

#include "arena/agents.h"

#include <cmath>

#include "arena/error.h"
#include "arena/text_norm.h"

namespace arena {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string section_title(const CorpusIndex& index, const Retrieval& hit) {
  const auto& path = index.passage(hit.passage_id).heading_path;
  return path.empty() ? std::string() : path.back();
}

}  // namespace

nlohmann::json inbound_to_wire(const AgentInbound& msg) {
  return std::visit(
      Overloaded{
          [](const inbound::RiddleStart& m) -> nlohmann::json {
            return {{"type", "riddle_start"},
                    {"riddle_id", m.riddle_id},
                    {"subject", std::string(to_string(m.subject))}};
          },
          [](const inbound::Token& m) -> nlohmann::json {
            return {{"type", "token"},
                    {"clue_index", m.clue_index},
                    {"text", m.text},
                    {"t_ms", m.t_ms}};
          },
          [](const inbound::ClueEnd& m) -> nlohmann::json {
            return {{"type", "clue_end"}, {"clue_index", m.clue_index}};
          },
          [](const inbound::BuzzGranted& m) -> nlohmann::json {
            return {{"type", "buzz_granted"}, {"deadline_ms", m.deadline_ms}};
          },
          [](const inbound::BuzzDenied& m) -> nlohmann::json {
            return {{"type", "buzz_denied"}, {"reason", m.reason}};
          },
          [](const inbound::RiddleEnd& m) -> nlohmann::json {
            return {{"type", "riddle_end"},
                    {"outcome",
                     {{"winner", m.winner ? nlohmann::json(*m.winner) : nlohmann::json(nullptr)},
                      {"points", m.points}}}};
          }},
      msg);
}

nlohmann::json outbound_to_wire(const AgentOutbound& msg) {
  return std::visit(Overloaded{[](const outbound::BuzzRequest& m) -> nlohmann::json {
                                 return {{"type", "buzz"}, {"confidence", m.confidence}};
                               },
                               [](const outbound::AnswerSubmission& m) -> nlohmann::json {
                                 return {{"type", "answer"}, {"text", m.text}};
                               }},
                    msg);
}

OracleAgent::OracleAgent(int buzz_at_clue, std::map<std::string, std::string> golds)
    : buzz_at_clue_(buzz_at_clue), golds_(std::move(golds)) {
  if (buzz_at_clue < 1) throw Error("oracle buzz clue must be >= 1");
}

void OracleAgent::deliver(const AgentInbound& msg, std::vector<AgentOutbound>& out) {
  if (const auto* m = std::get_if<inbound::RiddleStart>(&msg)) {
    auto it = golds_.find(m->riddle_id);
    current_ = it == golds_.end() ? nullptr : &it->second;
  } else if (const auto* m = std::get_if<inbound::ClueEnd>(&msg)) {
    if (current_ && m->clue_index == buzz_at_clue_) out.push_back(outbound::BuzzRequest{1.0});
  } else if (std::holds_alternative<inbound::BuzzGranted>(msg)) {
    if (current_) out.push_back(outbound::AnswerSubmission{*current_});
  } else if (std::holds_alternative<inbound::RiddleEnd>(msg)) {
    current_ = nullptr;
  }
}

std::unique_ptr<OracleAgent> oracle_agent(int buzz_at_clue, std::span<const Riddle> riddles) {
  std::map<std::string, std::string> golds;
  for (const auto& r : riddles) {
    if (!r.gold_answers.empty()) golds[r.id] = r.gold_answers.front();
  }
  return std::make_unique<OracleAgent>(buzz_at_clue, std::move(golds));
}

RetrievalAgent::RetrievalAgent(const CorpusIndex& index, BuzzPolicy policy, Observer observer)
    : index_(index), policy_(policy), observer_(std::move(observer)) {
  if (!std::isfinite(policy_.threshold) || policy_.threshold < 0) {
    throw Error("buzz threshold must be finite and >= 0");
  }
}

void RetrievalAgent::evaluate(int clue_index, std::vector<AgentOutbound>& out) {
  if (buzzed_ || normalize_text(heard_).empty()) return;
  RetrievalProbe probe{riddle_id_, clue_index, heard_, {}, false};
  const auto hits = index_.search(heard_, 3);
  probe.bundle = index_.make_context(hits);
  if (probe.bundle.confidence >= policy_.threshold) {
    answer_ = section_title(index_, hits.front());
    buzzed_ = true;
    probe.buzzed = true;
    out.push_back(outbound::BuzzRequest{probe.bundle.confidence});
  }
  if (observer_) observer_(probe);
}

void RetrievalAgent::deliver(const AgentInbound& msg, std::vector<AgentOutbound>& out) {
  using EvaluateAt = BuzzPolicy::EvaluateAt;
  if (const auto* m = std::get_if<inbound::RiddleStart>(&msg)) {
    riddle_id_ = m->riddle_id;
    heard_.clear();
    answer_.clear();
    buzzed_ = false;
    granted_ = false;
  } else if (const auto* m = std::get_if<inbound::Token>(&msg)) {
    if (!heard_.empty()) heard_ += ' ';
    heard_ += m->text;
    if (policy_.evaluate_at == EvaluateAt::kEveryToken) evaluate(m->clue_index, out);
  } else if (const auto* m = std::get_if<inbound::ClueEnd>(&msg)) {
    if (policy_.evaluate_at == EvaluateAt::kClueEnd) evaluate(m->clue_index, out);
  } else if (std::holds_alternative<inbound::BuzzGranted>(msg)) {
    granted_ = true;
    if (!buzzed_ && !normalize_text(heard_).empty()) {
      answer_ = section_title(index_, index_.search(heard_, 1).front());
    }
    out.push_back(outbound::AnswerSubmission{answer_});
  } else if (const auto* m = std::get_if<inbound::BuzzDenied>(&msg)) {
    if (!granted_ && m->reason != "locked_out") buzzed_ = false;
  }
}

std::unique_ptr<RetrievalAgent> retrieval_agent(const CorpusIndex& index, BuzzPolicy policy,
                                                RetrievalAgent::Observer observer) {
  return std::make_unique<RetrievalAgent>(index, policy, std::move(observer));
}

}  // namespace arena
