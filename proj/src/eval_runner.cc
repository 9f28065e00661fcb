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

#include "arena/eval_runner.h"

#include <chrono>
#include <sstream>

#include "arena/error.h"
#include "arena/match_runner.h"
#include "arena/storage.h"

namespace arena {

namespace {

constexpr const char* kEvalTeam = "agent";

nlohmann::json opt_int(const std::optional<int>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

MatchConfig live_config(const EvalSpec& spec) {
  MatchConfig c = spec.live;
  c.team_ids = {kEvalTeam};
  c.full_contest = false;
  c.clock = ClockKind::kVirtual;
  return c;
}

EvalItem judge(const Riddle& r, std::string prediction, double latency_s, double threshold) {
  EvalItem item;
  item.riddle_id = r.id;
  item.subject = r.subject;
  item.verdict = fuzzy_match(prediction, r.gold_answers, threshold);
  item.prediction = std::move(prediction);
  item.latency_s = latency_s;
  return item;
}

void require_connected(const Agent& agent) {
  if (const auto* remote = dynamic_cast<const RemoteAgent*>(&agent); remote && remote->silent()) {
    throw Error("remote agent connection lost");
  }
}

EvalItem batch_item(Agent& agent, const Riddle& r, const EvalSpec& spec) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  std::vector<AgentOutbound> out;
  agent.deliver(inbound::RiddleStart{r.id, r.subject}, out);
  for (std::size_t k = 0; k < r.clues.size(); ++k) {
    const int clue = static_cast<int>(k + 1);
    agent.deliver(inbound::Token{clue, r.clues[k], 0}, out);
    agent.deliver(inbound::ClueEnd{clue}, out);
  }
  out.clear();
  agent.deliver(inbound::BuzzGranted{spec.deadlines.answer_ms}, out);
  const double latency = std::chrono::duration<double>(Clock::now() - t0).count();
  require_connected(agent);
  std::string prediction;
  for (const auto& o : out) {
    if (const auto* a = std::get_if<outbound::AnswerSubmission>(&o)) {
      prediction = a->text;
      break;
    }
  }
  EvalItem item = judge(r, std::move(prediction), latency, spec.fuzzy_threshold);
  out.clear();
  agent.deliver(inbound::RiddleEnd{item.verdict.em ? std::optional<std::string>(kEvalTeam)
                                                   : std::nullopt,
                                   0},
                out);
  return item;
}

EvalItem live_item(Agent& agent, const Riddle& r, const EvalSpec& spec) {
  const auto run = run_match(live_config(spec), {r}, {{kEvalTeam, &agent}});
  require_connected(agent);
  std::int64_t start = 0;
  std::int64_t end = 0;
  int clue = 0;
  std::optional<std::string> prediction;
  std::optional<int> answered_on;
  for (const auto& e : run.transcript) {
    if (e.as<event::RiddleStart>()) start = e.t_ms;
    if (const auto* c = e.as<event::ClueStart>()) clue = c->clue_index;
    if (e.as<event::RiddleEnd>()) end = e.t_ms;
    if (const auto* a = e.as<event::AnswerGiven>()) {
      prediction = a->text;
      answered_on = clue;
      end = e.t_ms;
    }
  }
  EvalItem item = judge(r, prediction.value_or(""), static_cast<double>(end - start) / 1000.0,
                        spec.fuzzy_threshold);
  item.answered_on_clue = answered_on;
  return item;
}

}  // namespace

std::string_view to_string(EvalMode mode) { return mode == EvalMode::kBatch ? "batch" : "live"; }

EvalMode parse_eval_mode(std::string_view text) {
  if (text == "batch") return EvalMode::kBatch;
  if (text == "live") return EvalMode::kLive;
  throw Error("eval mode must be batch or live, got \"" + std::string(text) + "\"");
}

std::string_view to_string(JobStatus status) {
  switch (status) {
    case JobStatus::kPending: return "pending";
    case JobStatus::kRunning: return "running";
    case JobStatus::kFinished: return "finished";
    case JobStatus::kFailed: return "failed";
  }
  return "?";
}

nlohmann::json eval_spec_to_json(const EvalSpec& spec) {
  auto live = config_to_json(spec.live);
  live.erase("team_ids");
  live.erase("full_contest");
  live.erase("clock");
  return {{"split", spec.split},
          {"agent", to_string(spec.agent)},
          {"mode", std::string(to_string(spec.mode))},
          {"fuzzy_threshold", spec.fuzzy_threshold},
          {"buzz_forward_ms", spec.deadlines.buzz_forward_ms},
          {"answer_ms", spec.deadlines.answer_ms},
          {"live", live}};
}

EvalSpec eval_spec_from_json(const nlohmann::json& j) {
  EvalSpec spec;
  try {
    if (!j.is_object()) throw Error("eval request must be a JSON object");
    spec.split = j.value("split", spec.split);
    if (spec.split != "train" && spec.split != "test" && spec.split != "dev") {
      throw Error("split must be train, test or dev");
    }
    spec.agent = parse_agent_spec(j.at("agent").get<std::string>());
    if (spec.agent.kind == AgentSpec::Kind::kHuman) throw Error("evals need a non-human agent");
    spec.mode = parse_eval_mode(j.value("mode", std::string("batch")));
    spec.fuzzy_threshold = j.value("fuzzy_threshold", spec.fuzzy_threshold);
    if (!(spec.fuzzy_threshold > 0 && spec.fuzzy_threshold <= 1)) {
      throw Error("fuzzy_threshold must lie in (0, 1]");
    }
    spec.deadlines.buzz_forward_ms = j.value("buzz_forward_ms", spec.deadlines.buzz_forward_ms);
    spec.deadlines.answer_ms = j.value("answer_ms", spec.deadlines.answer_ms);
    if (spec.deadlines.buzz_forward_ms < 0 || spec.deadlines.answer_ms <= 0) {
      throw Error("remote deadlines out of range");
    }
    nlohmann::json live = j.value("live", nlohmann::json::object());
    live["team_ids"] = {kEvalTeam};
    spec.live = config_from_json(live);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(std::string("malformed eval request: ") + ex.what());
  }
  return spec;
}

nlohmann::json eval_item_to_json(const EvalItem& item) {
  return {{"riddle_id", item.riddle_id},
          {"subject", std::string(to_string(item.subject))},
          {"prediction", item.prediction},
          {"latency_s", item.latency_s},
          {"em", item.verdict.em},
          {"fm", item.verdict.fm},
          {"best_f1", item.verdict.best_f1},
          {"answered_on_clue", opt_int(item.answered_on_clue)}};
}

EvalItem eval_item_from_json(const nlohmann::json& j) {
  EvalItem item;
  try {
    item.riddle_id = j.at("riddle_id").get<std::string>();
    const auto subject = j.at("subject").get<std::string>();
    auto s = parse_subject(subject);
    if (!s) throw Error("unknown subject \"" + subject + "\"");
    item.subject = *s;
    item.prediction = j.at("prediction").get<std::string>();
    item.latency_s = j.at("latency_s").get<double>();
    item.verdict.em = j.at("em").get<bool>();
    item.verdict.fm = j.at("fm").get<bool>();
    item.verdict.best_f1 = j.at("best_f1").get<double>();
    if (j.contains("answered_on_clue") && !j["answered_on_clue"].is_null()) {
      item.answered_on_clue = j["answered_on_clue"].get<int>();
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(std::string("malformed eval item: ") + ex.what());
  }
  return item;
}

EvalReport report_from_items(std::span<const EvalItem> items) {
  std::vector<EvalRecord> records;
  records.reserve(items.size());
  for (const auto& i : items) records.push_back({i.subject, i.verdict, i.latency_s});
  return aggregate_report(records);
}

nlohmann::json job_to_json(const EvalJob& job) {
  nlohmann::json j = {{"job_id", job.job_id},
                      {"created_at", job.created_at},
                      {"status", std::string(to_string(job.status))},
                      {"spec", eval_spec_to_json(job.spec)},
                      {"progress", {{"done", job.items.size()}, {"total", job.total}}}};
  if (!job.error.empty()) j["error"] = job.error;
  if (job.report) j["report"] = report_to_json(*job.report);
  return j;
}

nlohmann::json job_report_json(const EvalJob& job) {
  if (!job.report) throw Error("job " + job.job_id + " has no report");
  return {{"job_id", job.job_id},
          {"split", job.spec.split},
          {"agent", to_string(job.spec.agent)},
          {"mode", std::string(to_string(job.spec.mode))},
          {"fuzzy_threshold", job.spec.fuzzy_threshold},
          {"report", report_to_json(*job.report)}};
}

void run_eval(EvalJob& job, std::span<const Riddle> riddles, const CorpusIndex* index,
              const EvalHooks& hooks) {
  job.status = JobStatus::kRunning;
  job.total = riddles.size();
  job.items.clear();
  job.report.reset();
  job.error.clear();
  const EvalSpec& spec = job.spec;
  AgentContext context{riddles, index, spec.deadlines, hooks.log};
  try {
    if (riddles.empty()) throw Error("split \"" + spec.split + "\" is empty");
    std::unique_ptr<Agent> batch_agent;
    if (spec.mode == EvalMode::kBatch) {
      context.deadlines.buzz_forward_ms = 0;
      batch_agent = make_agent(spec.agent, context);
      batch_agent->start(kEvalTeam);
    }
    for (const auto& r : riddles) {
      if (hooks.cancel && hooks.cancel->load()) throw Error("cancelled");
      EvalItem item;
      if (spec.mode == EvalMode::kBatch) {
        item = batch_item(*batch_agent, r, spec);
      } else {
        auto agent = make_agent(spec.agent, context);
        item = live_item(*agent, r, spec);
      }
      job.items.push_back(item);
      if (hooks.on_item) hooks.on_item(item);
    }
    if (batch_agent) batch_agent->finish();
    job.report = report_from_items(job.items);
    job.status = JobStatus::kFinished;
  } catch (const std::exception& ex) {
    job.status = JobStatus::kFailed;
    job.error = ex.what();
    if (hooks.log) hooks.log("eval " + job.job_id + " failed: " + job.error);
  }
}

void append_job_header(const std::filesystem::path& path, const EvalJob& job) {
  append_line(path, nlohmann::json{{"type", "job"},
                                   {"job_id", job.job_id},
                                   {"created_at", job.created_at},
                                   {"total", job.total},
                                   {"spec", eval_spec_to_json(job.spec)}}
                        .dump());
}

void append_job_item(const std::filesystem::path& path, const EvalItem& item) {
  auto j = eval_item_to_json(item);
  j["type"] = "item";
  append_line(path, j.dump());
}

void append_job_end(const std::filesystem::path& path, const EvalJob& job) {
  nlohmann::json j = {{"type", "end"}, {"status", std::string(to_string(job.status))}};
  if (!job.error.empty()) j["error"] = job.error;
  append_line(path, j.dump());
}

EvalJob load_job_log(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  EvalJob job;
  bool header = false;
  bool ended = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ParseError(line_no, "bad job log line");
    const auto type = j.value("type", std::string());
    if (type == "job") {
      job.job_id = j.at("job_id").get<std::string>();
      job.created_at = j.value("created_at", std::string());
      job.total = j.value("total", std::size_t{0});
      job.spec = eval_spec_from_json(j.at("spec"));
      header = true;
    } else if (type == "item") {
      job.items.push_back(eval_item_from_json(j));
    } else if (type == "end") {
      ended = true;
      job.status = j.at("status").get<std::string>() == "finished" ? JobStatus::kFinished
                                                                   : JobStatus::kFailed;
      job.error = j.value("error", std::string());
    } else {
      throw ParseError(line_no, "unknown job log entry \"" + type + "\"");
    }
  }
  if (!header) throw Error("job log " + path.string() + " has no header");
  if (!ended) {
    job.status = JobStatus::kFailed;
    job.error = "interrupted";
  }
  if (job.status == JobStatus::kFinished) job.report = report_from_items(job.items);
  return job;
}

}  // namespace arena
