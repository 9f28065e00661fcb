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

#include "arena/transcript.h"

#include "arena/error.h"

namespace arena {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Subject subject_field(const nlohmann::json& j) {
  const auto name = j.at("subject").get<std::string>();
  auto s = parse_subject(name);
  if (!s) throw Error("unknown subject \"" + name + "\"");
  return *s;
}

}  // namespace

std::string_view TranscriptEvent::kind() const {
  return std::visit(
      Overloaded{[](const event::MatchStart&) { return "MatchStart"; },
                 [](const event::RiddleStart&) { return "RiddleStart"; },
                 [](const event::ClueStart&) { return "ClueStart"; },
                 [](const event::Token&) { return "Token"; },
                 [](const event::ClueEnd&) { return "ClueEnd"; },
                 [](const event::Buzz&) { return "Buzz"; },
                 [](const event::AnswerGiven&) { return "AnswerGiven"; },
                 [](const event::Verdict&) { return "Verdict"; },
                 [](const event::RiddleEnd&) { return "RiddleEnd"; },
                 [](const event::ContestEnd&) { return "ContestEnd"; },
                 [](const event::InputRejected&) { return "InputRejected"; }},
      payload);
}

nlohmann::json event_to_json(const TranscriptEvent& e) {
  nlohmann::json j = {{"t_ms", e.t_ms}, {"kind", std::string(e.kind())}};
  std::visit(
      Overloaded{
          [&](const event::MatchStart& p) {
            j["clock"] = p.clock;
            j["teams"] = p.teams;
          },
          [&](const event::RiddleStart& p) {
            j["riddle_id"] = p.riddle_id;
            j["subject"] = std::string(to_string(p.subject));
          },
          [&](const event::ClueStart& p) { j["clue_index"] = p.clue_index; },
          [&](const event::Token& p) {
            j["clue_index"] = p.clue_index;
            j["text"] = p.text;
          },
          [&](const event::ClueEnd& p) { j["clue_index"] = p.clue_index; },
          [&](const event::Buzz& p) {
            j["team"] = p.team;
            j["seq"] = p.seq;
          },
          [&](const event::AnswerGiven& p) {
            j["team"] = p.team;
            j["text"] = p.text;
          },
          [&](const event::Verdict& p) {
            j["team"] = p.team;
            j["correct"] = p.correct;
            j["points"] = p.points;
          },
          [&](const event::RiddleEnd& p) {
            j["winner"] = p.winner ? nlohmann::json(*p.winner) : nlohmann::json(nullptr);
          },
          [&](const event::ContestEnd& p) { j["scores"] = p.scores; },
          [&](const event::InputRejected& p) {
            j["team"] = p.team;
            j["input"] = p.input;
            j["seq"] = p.seq;
            j["reason"] = p.reason;
            j["text"] = p.text;
          }},
      e.payload);
  return j;
}

TranscriptEvent event_from_json(const nlohmann::json& j) {
  TranscriptEvent e;
  try {
    e.t_ms = j.at("t_ms").get<std::int64_t>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "MatchStart") {
      e.payload = event::MatchStart{j.at("clock").get<std::string>(),
                                    j.at("teams").get<std::vector<std::string>>()};
    } else if (kind == "RiddleStart") {
      e.payload = event::RiddleStart{j.at("riddle_id").get<std::string>(), subject_field(j)};
    } else if (kind == "ClueStart") {
      e.payload = event::ClueStart{j.at("clue_index").get<int>()};
    } else if (kind == "Token") {
      e.payload = event::Token{j.at("clue_index").get<int>(), j.at("text").get<std::string>()};
    } else if (kind == "ClueEnd") {
      e.payload = event::ClueEnd{j.at("clue_index").get<int>()};
    } else if (kind == "Buzz") {
      e.payload = event::Buzz{j.at("team").get<std::string>(), j.at("seq").get<std::uint64_t>()};
    } else if (kind == "AnswerGiven") {
      e.payload = event::AnswerGiven{j.at("team").get<std::string>(),
                                     j.at("text").get<std::string>()};
    } else if (kind == "Verdict") {
      e.payload = event::Verdict{j.at("team").get<std::string>(), j.at("correct").get<bool>(),
                                 j.at("points").get<int>()};
    } else if (kind == "RiddleEnd") {
      event::RiddleEnd p;
      if (!j.at("winner").is_null()) p.winner = j.at("winner").get<std::string>();
      e.payload = p;
    } else if (kind == "ContestEnd") {
      e.payload = event::ContestEnd{j.at("scores").get<std::map<std::string, int>>()};
    } else if (kind == "InputRejected") {
      e.payload = event::InputRejected{
          j.at("team").get<std::string>(), j.at("input").get<std::string>(),
          j.at("seq").get<std::uint64_t>(), j.at("reason").get<std::string>(),
          j.value("text", std::string())};
    } else {
      throw Error("unknown transcript event kind \"" + kind + "\"");
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(std::string("malformed transcript event: ") + ex.what());
  }
  return e;
}

std::string event_to_line(const TranscriptEvent& e) { return event_to_json(e).dump(); }

void write_transcript(std::ostream& out, const std::vector<TranscriptEvent>& events) {
  for (const auto& e : events) out << event_to_line(e) << '\n';
}

std::vector<TranscriptEvent> read_transcript(std::istream& in) {
  std::vector<TranscriptEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      events.push_back(event_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError(line_no, std::string("bad transcript line: ") + ex.what());
    } catch (const Error& ex) {
      throw ParseError(line_no, ex.what());
    }
  }
  return events;
}

}  // namespace arena
