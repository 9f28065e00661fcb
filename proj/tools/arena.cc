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

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "arena/arena_service.h"
#include "arena/error.h"
#include "arena/http_api.h"
#include "arena/transcript.h"

namespace {

using namespace arena;
namespace fs = std::filesystem;

void log_stderr(const std::string& line) { std::cerr << line << '\n'; }

nlohmann::json read_json_file(const fs::path& path) {
  auto j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw Error(path.string() + " is not valid JSON");
  return j;
}

std::vector<Passage> read_passages(const fs::path& path) {
  std::istringstream in(read_file(path));
  return read_passages_jsonl(in);
}

HttpApi* g_api = nullptr;

void on_signal(int) {
  if (g_api) g_api->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riddle arena: datasets, simulated matches, evaluation and the HTTP service"};
  app.require_subcommand(1);
  std::optional<std::string> data_flag;
  app.add_option("--data-dir", data_flag, "Data directory (ARENA_DATA_DIR overrides)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Load a riddle CSV into the data directory");
  std::string ingest_in;
  bool require_subject = false;
  ingest->add_option("--in", ingest_in, "Riddle CSV")->required()->check(CLI::ExistingFile);
  ingest->add_flag("--require-subject", require_subject, "Reject rows without a subject");

  // split
  auto* split = app.add_subcommand("split", "Materialize the train/test/dev split");
  std::uint64_t split_seed = 0;
  split->add_option("--seed", split_seed, "Shuffle seed")->required();

  // parse-book
  auto* parse = app.add_subcommand("parse-book", "Segment a book into passages");
  std::string book_in, book_name, book_out;
  std::size_t max_words = kDefaultMaxPassageWords;
  parse->add_option("--in", book_in, "Book markup")->required()->check(CLI::ExistingFile);
  parse->add_option("--name", book_name, "Book name")->required();
  parse->add_option("--max-words", max_words, "Passage size limit");
  parse->add_option("--out", book_out, "Passage JSONL (default: the data directory)");

  // index
  auto* index = app.add_subcommand("index", "Build the retrieval index");
  std::vector<std::string> index_in;
  std::string index_out;
  index->add_option("--passages", index_in, "Passage JSONL files (default: stored books)");
  index->add_option("--out", index_out, "Index file (default: the data directory)");

  // search
  auto* search_cmd = app.add_subcommand("search", "Query an index");
  std::string search_index, query;
  std::size_t k = 3;
  search_cmd->add_option("--index", search_index, "Index file (default: the data directory)");
  search_cmd->add_option("--query", query, "Query text")->required();
  search_cmd->add_option("-k", k, "Result count");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run one match offline on the virtual clock");
  std::string sim_config, sim_transcript;
  simulate->add_option("--config", sim_config, "Match request JSON")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--transcript", sim_transcript, "Write the transcript here");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate an agent over a split");
  std::string eval_split = "test", eval_agent, eval_mode = "batch";
  double eval_threshold = kDefaultFuzzyThreshold;
  RemoteDeadlines eval_deadlines;
  eval->add_option("--split", eval_split, "train, test or dev");
  eval->add_option("--agent", eval_agent, "oracle:K, retrieval:T[:clue_end], remote:HOST:PORT")
      ->required();
  eval->add_option("--mode", eval_mode, "batch or live");
  eval->add_option("--fuzzy-threshold", eval_threshold, "Token F1 threshold for FM");
  eval->add_option("--buzz-forward-ms", eval_deadlines.buzz_forward_ms,
                   "Remote buzz window per token");
  eval->add_option("--answer-ms", eval_deadlines.answer_ms, "Remote answer deadline");

  // report
  auto* report = app.add_subcommand("report", "Print finished eval reports");
  std::vector<std::string> report_jobs;
  bool report_json = false;
  report->add_option("--job", report_jobs, "Eval job id (repeatable)")->required();
  report->add_flag("--json", report_json, "Print JSON instead of a table");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve->add_option("--port", port, "Listen port (0 picks one)");
  serve->add_option("--host", host, "Listen address");

  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path root = resolve_data_dir(data_flag);

    if (*ingest) {
      std::ifstream in(ingest_in, std::ios::binary);
      LoadOptions opts;
      opts.require_subject = require_subject;
      std::vector<LoadWarning> warnings;
      auto riddles = load_riddle_csv(in, opts, &warnings);
      for (const auto& w : warnings) std::cerr << "line " << w.line << ": " << w.message << '\n';
      DataDir(root).save_riddles(riddles);
      std::cout << "ingested " << riddles.size() << " riddles into " << root.string() << '\n';
    } else if (*split) {
      DataDir data(root);
      const auto s = split_dataset(data.load_riddles(), split_seed);
      data.save_split(s);
      std::cout << "train " << s.train.size() << ", test " << s.test.size() << ", dev "
                << s.dev.size() << '\n';
    } else if (*parse) {
      const auto passages = segment_passages(parse_book(read_file(book_in), book_name), max_words);
      if (book_out.empty()) {
        DataDir(root).save_book(book_name, passages);
      } else {
        std::ostringstream out;
        write_passages_jsonl(out, passages);
        write_file_atomic(book_out, out.str());
      }
      std::cout << passages.size() << " passages\n";
    } else if (*index) {
      DataDir data(root);
      std::vector<Passage> passages;
      if (index_in.empty()) {
        passages = data.load_passages();
      } else {
        for (const auto& f : index_in) {
          auto part = read_passages(f);
          passages.insert(passages.end(), part.begin(), part.end());
        }
      }
      const CorpusIndex idx = CorpusIndex::build(std::move(passages));
      if (index_out.empty()) {
        data.save_index(idx);
      } else {
        write_file_atomic(index_out, idx.to_json().dump());
      }
      std::cout << idx.passage_count() << " passages, " << idx.vocabulary_size() << " terms\n";
    } else if (*search_cmd) {
      const CorpusIndex idx = search_index.empty()
                                  ? DataDir(root).load_index()
                                  : CorpusIndex::from_json(read_json_file(search_index));
      for (const auto& hit : idx.search(query, k)) {
        const Passage& p = idx.passage(hit.passage_id);
        std::cout << nlohmann::json{{"passage_id", hit.passage_id},
                                    {"score", hit.score},
                                    {"heading_path", p.heading_path}}
                         .dump()
                  << '\n';
      }
    } else if (*simulate) {
      DataDir data(root);
      MatchRequest req = match_request_from_json(read_json_file(sim_config));
      if (req.config.clock != ClockKind::kVirtual) throw Error("simulate runs on the virtual clock");
      std::map<std::string, Riddle> by_id;
      for (auto& r : data.load_riddles()) by_id.emplace(r.id, std::move(r));
      std::vector<Riddle> riddles;
      for (const auto& id : req.riddle_ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw Error("unknown riddle id \"" + id + "\"");
        riddles.push_back(it->second);
      }
      std::optional<CorpusIndex> idx;
      std::vector<std::unique_ptr<Agent>> owned;
      AgentMap agents;
      for (const auto& [team, spec] : req.slots) {
        if (spec.kind == AgentSpec::Kind::kRetrieval && !idx) idx = data.load_index();
        AgentContext ctx{riddles, idx ? &*idx : nullptr, {}, log_stderr};
        owned.push_back(make_agent(spec, ctx));
        agents[team] = owned.back().get();
      }
      MatchRun run = run_match(req.config, riddles, agents);
      if (!sim_transcript.empty()) {
        std::ostringstream out;
        write_transcript(out, run.transcript);
        write_file_atomic(sim_transcript, out.str());
      }
      std::cout << result_to_json(run.result).dump(2) << '\n';
    } else if (*eval) {
      ServiceOptions opts{root, eval_deadlines, log_stderr};
      ArenaService svc(opts);
      nlohmann::json request = {{"split", eval_split},
                                {"agent", eval_agent},
                                {"mode", eval_mode},
                                {"fuzzy_threshold", eval_threshold},
                                {"buzz_forward_ms", eval_deadlines.buzz_forward_ms},
                                {"answer_ms", eval_deadlines.answer_ms}};
      const std::string id = svc.start_eval(request)["job_id"];
      svc.wait_idle();
      const nlohmann::json job = svc.eval_json(id);
      std::cout << "job " << id << ": " << job["status"].get<std::string>() << '\n';
      if (job["status"] != "finished") {
        std::cerr << job.value("error", std::string()) << '\n';
        return 1;
      }
      const std::vector<std::pair<std::string, EvalReport>> rows = {
          {job["spec"]["agent"].get<std::string>(), report_from_json(job["report"])}};
      std::cout << format_report_table(rows);
    } else if (*report) {
      DataDir data(root);
      std::vector<std::pair<std::string, EvalReport>> rows;
      nlohmann::json out = nlohmann::json::array();
      for (const auto& id : report_jobs) {
        EvalJob job = load_job_log(data.reports_dir() / (id + ".jsonl"));
        if (job.status != JobStatus::kFinished) {
          throw Error("eval job " + id + " is " + std::string(to_string(job.status)));
        }
        rows.emplace_back(to_string(job.spec.agent), *job.report);
        out.push_back(job_report_json(job));
      }
      if (report_json) {
        std::cout << (out.size() == 1 ? out[0] : out).dump(2) << '\n';
      } else {
        std::cout << format_report_table(rows);
      }
    } else if (*serve) {
      ServiceOptions opts{root, {}, log_stderr};
      ArenaService svc(opts);
      HttpApi api(svc);
      const int bound = api.bind(host, port);
      std::cerr << "serving " << root.string() << " on http://" << host << ':' << bound << '\n';
      g_api = &api;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      api.serve();
      g_api = nullptr;
      svc.shutdown();
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
