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

#include "arena/arena_service.h"

#include <condition_variable>
#include <ctime>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "arena/error.h"

namespace arena {

namespace fs = std::filesystem;

namespace {

std::string now_iso() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

MatchStatus parse_match_status(std::string_view s) {
  if (s == "pending") return MatchStatus::kPending;
  if (s == "running") return MatchStatus::kRunning;
  if (s == "finished") return MatchStatus::kFinished;
  return MatchStatus::kFailed;
}

ContestResult result_from_json(const nlohmann::json& j) {
  ContestResult r;
  r.points = j.at("points").get<std::map<std::string, int>>();
  for (const auto& o : j.at("riddles")) {
    RiddleOutcome out;
    out.riddle_id = o.at("riddle_id").get<std::string>();
    if (!o.at("winner").is_null()) out.winner = o["winner"].get<std::string>();
    if (!o.at("answered_on_clue").is_null()) out.answered_on_clue = o["answered_on_clue"].get<int>();
    out.points_awarded = o.at("points_awarded").get<int>();
    r.riddles.push_back(std::move(out));
  }
  return r;
}

}  // namespace

std::string_view to_string(MatchStatus status) {
  switch (status) {
    case MatchStatus::kPending: return "pending";
    case MatchStatus::kRunning: return "running";
    case MatchStatus::kFinished: return "finished";
    case MatchStatus::kFailed: return "failed";
  }
  return "?";
}

MatchRequest match_request_from_json(const nlohmann::json& j) {
  MatchRequest req;
  try {
    if (!j.is_object()) throw Error("match request must be a JSON object");
    const auto& agents = j.at("agents");
    if (!agents.is_object()) throw Error("\"agents\" must map team ids to agent specs");
    for (const auto& [team, spec] : agents.items()) {
      req.slots[team] = parse_agent_spec(spec.get<std::string>());
    }
    nlohmann::json config = j.value("config", nlohmann::json::object());
    if (!config.contains("team_ids")) {
      std::vector<std::string> teams;
      for (const auto& [team, spec] : req.slots) teams.push_back(team);
      config["team_ids"] = teams;
    }
    req.config = config_from_json(config);
    req.riddle_ids = j.at("riddle_ids").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& ex) {
    throw Error(std::string("malformed match request: ") + ex.what());
  }
  for (const auto& team : req.config.team_ids) {
    if (!req.slots.count(team)) throw Error("team \"" + team + "\" has no agent or human slot");
  }
  if (req.slots.size() != req.config.team_ids.size()) {
    throw Error("agents given for teams that are not in the match");
  }
  return req;
}

struct ArenaService::MatchRecord {
  std::string id;
  std::string created_at;
  MatchConfig config;
  std::vector<Riddle> riddles;
  std::map<std::string, AgentSpec> slots;
  std::set<std::string> humans;

  mutable std::mutex mu;
  mutable std::condition_variable cv;
  std::set<std::string> joined;
  bool starting = false;
  MatchStatus status = MatchStatus::kPending;
  std::string error;
  std::vector<std::string> lines;
  std::optional<ContestResult> result;
  std::vector<std::unique_ptr<Agent>> agents;
  std::unique_ptr<MatchDriver> driver;
  std::thread thread;
};

struct ArenaService::JobRecord {
  mutable std::mutex mu;
  EvalJob job;
  std::atomic<bool> cancel{false};
  std::thread thread;
};

ArenaService::ArenaService(ServiceOptions options)
    : options_(std::move(options)), data_(options_.data_dir) {
  load_existing();
}

ArenaService::~ArenaService() { shutdown(); }

void ArenaService::log(const std::string& line) const {
  if (options_.log) options_.log(line);
}

std::string ArenaService::new_id(const char* prefix) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::random_device rd;
  for (;;) {
    std::string id = std::string(prefix) + "-";
    for (int i = 0; i < 10; ++i) id += kHex[rd() % 16];
    std::lock_guard lock(mu_);
    if (!matches_.count(id) && !jobs_.count(id) && !fs::exists(data_.matches_dir() / (id + ".json")) &&
        !fs::exists(data_.reports_dir() / (id + ".jsonl"))) {
      return id;
    }
  }
}

std::shared_ptr<const CorpusIndex> ArenaService::index() const {
  std::lock_guard lock(mu_);
  if (!index_) {
    if (!fs::exists(data_.index_path())) throw Error("no corpus index; run `index` first");
    index_ = std::make_shared<const CorpusIndex>(data_.load_index());
  }
  return index_;
}

void ArenaService::load_existing() {
  for (const auto& entry : fs::directory_iterator(data_.matches_dir())) {
    if (entry.path().extension() != ".json") continue;
    try {
      const auto meta = nlohmann::json::parse(read_file(entry.path()));
      auto rec = std::make_shared<MatchRecord>();
      rec->id = meta.at("match_id").get<std::string>();
      rec->created_at = meta.value("created_at", std::string());
      rec->config = config_from_json(meta.at("config"));
      for (const auto& r : meta.at("riddles")) rec->riddles.push_back(riddle_from_json(r));
      for (const auto& [team, spec] : meta.at("agents").items()) {
        rec->slots[team] = parse_agent_spec(spec.get<std::string>());
        if (rec->slots[team].kind == AgentSpec::Kind::kHuman) rec->humans.insert(team);
      }
      rec->status = parse_match_status(meta.value("status", std::string("failed")));
      rec->error = meta.value("error", std::string());
      if (meta.contains("result")) rec->result = result_from_json(meta["result"]);
      if (rec->status == MatchStatus::kPending || rec->status == MatchStatus::kRunning) {
        rec->status = MatchStatus::kFailed;
        rec->error = "interrupted";
      }
      const auto transcript = data_.matches_dir() / (rec->id + ".jsonl");
      if (fs::exists(transcript)) {
        std::istringstream in(read_file(transcript));
        for (std::string line; std::getline(in, line);) {
          if (!line.empty()) rec->lines.push_back(line);
        }
      }
      matches_[rec->id] = rec;
    } catch (const std::exception& ex) {
      log("skipping unreadable match " + entry.path().string() + ": " + ex.what());
    }
  }
  for (const auto& entry : fs::directory_iterator(data_.reports_dir())) {
    if (entry.path().extension() != ".jsonl") continue;
    try {
      auto rec = std::make_shared<JobRecord>();
      rec->job = load_job_log(entry.path());
      jobs_[rec->job.job_id] = rec;
    } catch (const std::exception& ex) {
      log("skipping unreadable job " + entry.path().string() + ": " + ex.what());
    }
  }
}

void ArenaService::persist_match(const MatchRecord& rec) const {
  nlohmann::json agents = nlohmann::json::object();
  for (const auto& [team, spec] : rec.slots) agents[team] = to_string(spec);
  nlohmann::json riddles = nlohmann::json::array();
  for (const auto& r : rec.riddles) riddles.push_back(riddle_to_json(r));
  nlohmann::json meta = {{"match_id", rec.id},
                         {"created_at", rec.created_at},
                         {"config", config_to_json(rec.config)},
                         {"agents", agents},
                         {"riddles", riddles}};
  {
    std::lock_guard lock(rec.mu);
    meta["status"] = std::string(to_string(rec.status));
    if (!rec.error.empty()) meta["error"] = rec.error;
    if (rec.result) meta["result"] = result_to_json(*rec.result);
  }
  write_file_atomic(data_.matches_dir() / (rec.id + ".json"), meta.dump(2) + "\n");
}

nlohmann::json ArenaService::create_match(const nlohmann::json& request) {
  MatchRequest req = match_request_from_json(request);
  std::vector<Riddle> all;
  try {
    all = data_.load_riddles();
  } catch (const NotFound&) {
    throw Error("no riddles ingested");
  }
  std::map<std::string, const Riddle*> by_id;
  for (const auto& r : all) by_id[r.id] = &r;

  auto rec = std::make_shared<MatchRecord>();
  for (const auto& id : req.riddle_ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw Error("unknown riddle id \"" + id + "\"");
    rec->riddles.push_back(*it->second);
  }
  for (const auto& [team, spec] : req.slots) {
    if (spec.kind == AgentSpec::Kind::kHuman) rec->humans.insert(team);
    if (spec.kind == AgentSpec::Kind::kRetrieval) index();
  }
  if (!rec->humans.empty()) req.config.clock = ClockKind::kWall;
  MatchEngine probe(req.config, rec->riddles);

  rec->id = new_id("m");
  rec->created_at = now_iso();
  rec->config = req.config;
  rec->slots = req.slots;
  {
    std::lock_guard lock(mu_);
    matches_[rec->id] = rec;
  }
  persist_match(*rec);
  log("match " + rec->id + " created");
  if (rec->humans.empty()) {
    {
      std::lock_guard lock(rec->mu);
      rec->starting = true;
    }
    start_match(rec);
  }
  return match_json(rec->id);
}

void ArenaService::start_match(const std::shared_ptr<MatchRecord>& rec) {
  AgentMap map;
  std::shared_ptr<const CorpusIndex> idx;
  try {
    AgentContext ctx{rec->riddles, nullptr, options_.deadlines,
                     [this](const std::string& l) { log(l); }};
    for (const auto& team : rec->config.team_ids) {
      const AgentSpec& spec = rec->slots.at(team);
      if (spec.kind == AgentSpec::Kind::kHuman) continue;
      if (spec.kind == AgentSpec::Kind::kRetrieval && !idx) idx = index();
      ctx.index = idx.get();
      rec->agents.push_back(make_agent(spec, ctx));
      map[team] = rec->agents.back().get();
    }
  } catch (const std::exception& ex) {
    {
      std::lock_guard lock(rec->mu);
      rec->status = MatchStatus::kFailed;
      rec->error = ex.what();
    }
    rec->cv.notify_all();
    persist_match(*rec);
    return;
  }
  const fs::path transcript = data_.matches_dir() / (rec->id + ".jsonl");
  MatchRecord* raw = rec.get();
  auto sink = [raw, transcript](const TranscriptEvent& e) {
    std::string line = event_to_line(e);
    append_line(transcript, line);
    {
      std::lock_guard lock(raw->mu);
      raw->lines.push_back(std::move(line));
    }
    raw->cv.notify_all();
  };
  {
    std::lock_guard lock(rec->mu);
    rec->driver = std::make_unique<MatchDriver>(MatchEngine(rec->config, rec->riddles), map, sink);
    rec->status = MatchStatus::kRunning;
  }
  persist_match(*rec);
  log("match " + rec->id + " running");
  std::thread worker([this, rec, idx] {
    try {
      MatchRun run = rec->driver->run();
      std::lock_guard lock(rec->mu);
      rec->result = run.result;
      const bool complete = !run.transcript.empty() && run.transcript.back().as<event::ContestEnd>();
      rec->status = complete ? MatchStatus::kFinished : MatchStatus::kFailed;
      if (!complete) rec->error = "cancelled";
    } catch (const std::exception& ex) {
      std::lock_guard lock(rec->mu);
      rec->status = MatchStatus::kFailed;
      rec->error = ex.what();
    }
    rec->cv.notify_all();
    persist_match(*rec);
    log("match " + rec->id + " " + std::string(to_string(rec->status)));
  });
  std::lock_guard lock(mu_);
  rec->thread = std::move(worker);
}

std::shared_ptr<ArenaService::MatchRecord> ArenaService::find_match(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = matches_.find(id);
  if (it == matches_.end()) throw NotFound("no match \"" + id + "\"");
  return it->second;
}

std::shared_ptr<ArenaService::JobRecord> ArenaService::find_job(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) throw NotFound("no eval job \"" + id + "\"");
  return it->second;
}

nlohmann::json ArenaService::match_json(const std::string& id) const {
  auto rec = find_match(id);
  nlohmann::json agents = nlohmann::json::object();
  for (const auto& [team, spec] : rec->slots) agents[team] = to_string(spec);
  std::vector<std::string> riddle_ids;
  for (const auto& r : rec->riddles) riddle_ids.push_back(r.id);
  std::lock_guard lock(rec->mu);
  nlohmann::json j = {{"match_id", rec->id},
                      {"created_at", rec->created_at},
                      {"status", std::string(to_string(rec->status))},
                      {"config", config_to_json(rec->config)},
                      {"riddle_ids", riddle_ids},
                      {"agents", agents},
                      {"human_slots", rec->humans},
                      {"joined", rec->joined},
                      {"event_count", rec->lines.size()}};
  if (!rec->error.empty()) j["error"] = rec->error;
  if (rec->result) j["result"] = result_to_json(*rec->result);
  return j;
}

nlohmann::json ArenaService::list_matches() const {
  std::vector<std::string> ids;
  {
    std::lock_guard lock(mu_);
    for (const auto& [id, rec] : matches_) ids.push_back(id);
  }
  nlohmann::json out = nlohmann::json::array();
  for (const auto& id : ids) out.push_back(match_json(id));
  return out;
}

InputAck ArenaService::submit_input(const std::string& id, const nlohmann::json& body) {
  auto rec = find_match(id);
  std::string team, type, text;
  try {
    team = body.at("team").get<std::string>();
    type = body.at("type").get<std::string>();
    if (type == "answer") text = body.at("text").get<std::string>();
  } catch (const nlohmann::json::exception& ex) {
    throw Error(std::string("malformed input: ") + ex.what());
  }
  if (type != "join" && type != "buzz" && type != "answer") {
    throw Error("input type must be join, buzz or answer");
  }
  if (!rec->humans.count(team)) return {false, 0, "not_a_human_slot"};

  if (type == "join") {
    bool start = false;
    {
      std::lock_guard lock(rec->mu);
      if (rec->status != MatchStatus::kPending) {
        return {rec->joined.count(team) > 0, 0, "already_started"};
      }
      rec->joined.insert(team);
      if (rec->joined == rec->humans && !rec->starting) {
        rec->starting = true;
        start = true;
      }
    }
    if (start) start_match(rec);
    return {true, 0, ""};
  }

  MatchDriver* driver = nullptr;
  {
    std::lock_guard lock(rec->mu);
    if (rec->status == MatchStatus::kPending) return {false, 0, "match_not_started"};
    if (rec->status != MatchStatus::kRunning) return {false, 0, "match_finished"};
    driver = rec->driver.get();
  }
  MatchAction action;
  if (type == "buzz") {
    action = input::Buzz{team};
  } else {
    action = input::Answer{team, text};
  }
  return driver->submit(team, std::move(action)).get();
}

bool ArenaService::read_events(const std::string& id, std::size_t from,
                               std::vector<std::string>& out,
                               std::chrono::milliseconds wait) const {
  auto rec = find_match(id);
  std::unique_lock lock(rec->mu);
  auto done = [&] {
    return rec->status == MatchStatus::kFinished || rec->status == MatchStatus::kFailed;
  };
  rec->cv.wait_for(lock, wait, [&] { return rec->lines.size() > from || done(); });
  for (std::size_t i = from; i < rec->lines.size(); ++i) out.push_back(rec->lines[i]);
  return done();
}

nlohmann::json ArenaService::start_eval(const nlohmann::json& request) {
  EvalSpec spec = eval_spec_from_json(request);
  std::vector<Riddle> riddles;
  try {
    riddles = data_.split_riddles(spec.split);
  } catch (const NotFound&) {
    throw Error("dataset split is not materialized; run `ingest` and `split` first");
  }
  std::shared_ptr<const CorpusIndex> idx;
  if (spec.agent.kind == AgentSpec::Kind::kRetrieval) idx = index();

  auto rec = std::make_shared<JobRecord>();
  rec->job.job_id = new_id("e");
  rec->job.created_at = now_iso();
  rec->job.spec = spec;
  rec->job.total = riddles.size();
  rec->job.status = JobStatus::kRunning;
  const fs::path path = data_.reports_dir() / (rec->job.job_id + ".jsonl");
  append_job_header(path, rec->job);
  {
    std::lock_guard lock(mu_);
    jobs_[rec->job.job_id] = rec;
  }
  log("eval " + rec->job.job_id + " started (" + to_string(spec.agent) + ", " +
      std::string(to_string(spec.mode)) + ", " + spec.split + ")");
  EvalJob local = rec->job;
  std::thread worker([this, rec, path, idx, local, riddles = std::move(riddles)]() mutable {
    EvalHooks hooks;
    hooks.cancel = &rec->cancel;
    hooks.log = [this](const std::string& l) { log(l); };
    hooks.on_item = [&](const EvalItem& item) {
      append_job_item(path, item);
      std::lock_guard lock(rec->mu);
      rec->job.items.push_back(item);
    };
    run_eval(local, riddles, idx.get(), hooks);
    append_job_end(path, local);
    {
      std::lock_guard lock(rec->mu);
      rec->job.status = local.status;
      rec->job.report = local.report;
      rec->job.error = local.error;
    }
    log("eval " + local.job_id + " " + std::string(to_string(local.status)));
  });
  {
    std::lock_guard lock(mu_);
    rec->thread = std::move(worker);
  }
  return eval_json(rec->job.job_id);
}

nlohmann::json ArenaService::eval_json(const std::string& id) const {
  auto rec = find_job(id);
  std::lock_guard lock(rec->mu);
  return job_to_json(rec->job);
}

nlohmann::json ArenaService::eval_report(const std::string& id) const {
  auto rec = find_job(id);
  std::lock_guard lock(rec->mu);
  if (rec->job.status != JobStatus::kFinished) {
    throw NotReady("eval job " + id + " is " + std::string(to_string(rec->job.status)));
  }
  return job_report_json(rec->job);
}

nlohmann::json ArenaService::list_evals() const {
  std::vector<std::shared_ptr<JobRecord>> recs;
  {
    std::lock_guard lock(mu_);
    for (const auto& [id, rec] : jobs_) recs.push_back(rec);
  }
  nlohmann::json out = nlohmann::json::array();
  for (const auto& rec : recs) {
    std::lock_guard lock(rec->mu);
    out.push_back(job_to_json(rec->job));
  }
  return out;
}

nlohmann::json ArenaService::datasets() const {
  nlohmann::json j;
  try {
    const auto riddles = data_.load_riddles();
    nlohmann::json subjects = nlohmann::json::object();
    for (Subject s : kAllSubjects) subjects[std::string(to_string(s))] = 0;
    std::vector<std::string> ids;
    for (const auto& r : riddles) {
      subjects[std::string(to_string(r.subject))] =
          subjects[std::string(to_string(r.subject))].get<int>() + 1;
      ids.push_back(r.id);
    }
    j["riddles"] = {{"count", riddles.size()}, {"per_subject", subjects}, {"ids", ids}};
  } catch (const NotFound&) {
    j["riddles"] = nullptr;
  }
  try {
    const auto split = data_.load_split();
    j["split"] = {{"seed", split.seed},
                  {"train", split.train.size()},
                  {"test", split.test.size()},
                  {"dev", split.dev.size()}};
  } catch (const NotFound&) {
    j["split"] = nullptr;
  }
  std::vector<std::string> books;
  for (const auto& entry : fs::directory_iterator(data_.books_dir())) {
    if (entry.path().extension() == ".jsonl") books.push_back(entry.path().stem().string());
  }
  std::sort(books.begin(), books.end());
  j["books"] = books;
  if (fs::exists(data_.index_path())) {
    const auto idx = index();
    j["index"] = {{"passages", idx->passage_count()}, {"vocabulary", idx->vocabulary_size()}};
  } else {
    j["index"] = nullptr;
  }
  return j;
}

void ArenaService::wait_idle() {
  for (;;) {
    std::vector<std::thread> threads;
    {
      std::lock_guard lock(mu_);
      for (auto& [id, rec] : matches_) {
        if (rec->thread.joinable()) threads.push_back(std::move(rec->thread));
      }
      for (auto& [id, rec] : jobs_) {
        if (rec->thread.joinable()) threads.push_back(std::move(rec->thread));
      }
    }
    if (threads.empty()) return;
    for (auto& t : threads) t.join();
  }
}

void ArenaService::shutdown() {
  stopping_ = true;
  {
    std::lock_guard lock(mu_);
    for (auto& [id, rec] : matches_) {
      std::lock_guard rlock(rec->mu);
      if (rec->driver) rec->driver->cancel();
    }
    for (auto& [id, rec] : jobs_) rec->cancel = true;
  }
  wait_idle();
}

}  // namespace arena
