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

#include "arena/riddle_data.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "arena/csv.h"
#include "arena/error.h"
#include "arena/random.h"

namespace arena {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Maps lowercase header names to column positions.
class Header {
 public:
  explicit Header(const csv::Record& rec) {
    for (std::size_t i = 0; i < rec.fields.size(); ++i)
      columns_.emplace(lower(trim(rec.fields[i])), i);
  }

  std::optional<std::size_t> find(std::string_view name) const {
    auto it = columns_.find(std::string(name));
    if (it == columns_.end()) return std::nullopt;
    return it->second;
  }

  bool has(std::string_view name) const { return find(name).has_value(); }

  // Trimmed cell value, or empty when the column or cell is absent.
  std::string cell(const csv::Record& rec, std::string_view name) const {
    auto col = find(name);
    if (!col || *col >= rec.fields.size()) return {};
    return trim(rec.fields[*col]);
  }

 private:
  std::unordered_map<std::string, std::size_t> columns_;
};

void warn(std::vector<LoadWarning>* sink, std::size_t line, std::string msg) {
  if (sink) sink->push_back({line, std::move(msg)});
}

std::vector<csv::Record> read_with_header(std::istream& in,
                                          std::initializer_list<const char*> required,
                                          std::optional<Header>& header) {
  auto records = csv::read(in);
  if (records.empty()) throw ParseError(1, "CSV has no header row");
  header.emplace(records.front());
  for (const char* col : required) {
    if (!header->has(col))
      throw ParseError(records.front().line,
                       std::string("missing required column \"") + col + "\"");
  }
  records.erase(records.begin());
  return records;
}

}  // namespace

const std::vector<std::string>& DatasetSplit::part(std::string_view name) const {
  if (name == "train") return train;
  if (name == "test") return test;
  if (name == "dev") return dev;
  throw Error("unknown split \"" + std::string(name) + "\"");
}

std::vector<Riddle> load_riddle_csv(std::istream& in, const LoadOptions& options,
                                    std::vector<LoadWarning>* warnings) {
  std::optional<Header> header;
  auto rows = read_with_header(in, {"clue 1", "answer"}, header);

  std::vector<Riddle> riddles;
  std::unordered_set<std::string> seen_ids;
  std::size_t data_row = 0;
  for (const auto& row : rows) {
    ++data_row;
    Riddle r;

    r.id = header->cell(row, "id");
    if (r.id.empty()) r.id = "row-" + std::to_string(data_row);
    if (!seen_ids.insert(r.id).second)
      throw RowError(row.line, "duplicate riddle id \"" + r.id + "\"");

    bool gap = false;
    for (std::size_t k = 1; k <= kMaxClues; ++k) {
      std::string clue = header->cell(row, "clue " + std::to_string(k));
      if (clue.empty()) {
        gap = true;
      } else if (gap) {
        warn(warnings, row.line,
             "clue " + std::to_string(k) + " follows a blank clue; ignored");
      } else {
        r.clues.push_back(std::move(clue));
      }
    }
    if (r.clues.empty()) throw RowError(row.line, "no clue text (\"Clue 1\" is blank)");
    if (r.clues.size() < 3)
      warn(warnings, row.line,
           "only " + std::to_string(r.clues.size()) + " clue(s); live riddles read at least 3");

    std::string answer = header->cell(row, "answer");
    if (answer.empty()) throw RowError(row.line, "missing \"Answer\" value");
    r.gold_answers.push_back(std::move(answer));
    for (std::size_t k = 1; k < kMaxGoldAnswers; ++k) {
      std::string alt = header->cell(row, "answer " + std::to_string(k));
      if (!alt.empty()) r.gold_answers.push_back(std::move(alt));
    }

    const std::string subject = header->cell(row, "subject");
    if (subject.empty()) {
      if (options.require_subject)
        throw RowError(row.line, "missing \"Subject\" (required for contests)");
      warn(warnings, row.line, "no subject; defaulting to Physics");
    } else if (auto s = parse_subject(subject)) {
      r.subject = *s;
    } else {
      throw RowError(row.line, "unknown subject \"" + subject + "\"");
    }

    if (std::string c = header->cell(row, "contest"); !c.empty()) {
      auto v = parse_int(c);
      if (!v || *v < 1) throw RowError(row.line, "bad contest number \"" + c + "\"");
      r.contest_no = v;
    }
    if (std::string y = header->cell(row, "year"); !y.empty()) {
      auto v = parse_int(y);
      if (!v || *v < 1000 || *v > 9999)
        throw RowError(row.line, "bad year \"" + y + "\"");
      r.year = v;
    }
    riddles.push_back(std::move(r));
  }
  return riddles;
}

void write_riddle_csv(std::ostream& out, std::span<const Riddle> riddles) {
  std::vector<std::string> head = {"Id", "Subject", "Contest", "Year"};
  for (std::size_t k = 1; k <= kMaxClues; ++k) head.push_back("Clue " + std::to_string(k));
  head.push_back("Answer");
  for (std::size_t k = 1; k < kMaxGoldAnswers; ++k)
    head.push_back("Answer " + std::to_string(k));
  csv::write_row(out, head);

  for (const auto& r : riddles) {
    std::vector<std::string> row = {
        r.id, std::string(to_string(r.subject)),
        r.contest_no ? std::to_string(*r.contest_no) : "",
        r.year ? std::to_string(*r.year) : ""};
    for (std::size_t k = 0; k < kMaxClues; ++k)
      row.push_back(k < r.clues.size() ? r.clues[k] : "");
    for (std::size_t k = 0; k < kMaxGoldAnswers; ++k)
      row.push_back(k < r.gold_answers.size() ? r.gold_answers[k] : "");
    csv::write_row(out, row);
  }
}

DatasetSplit split_dataset(std::span<const Riddle> riddles, std::uint64_t seed) {
  if (riddles.empty()) throw Error("cannot split an empty dataset");
  std::vector<std::string> ids;
  ids.reserve(riddles.size());
  for (const auto& r : riddles) ids.push_back(r.id);
  std::mt19937_64 rng(seed);
  seeded_shuffle(std::span<std::string>(ids), rng);

  const std::size_t n = ids.size();
  const std::size_t n_train = (6 * n) / 10;
  const std::size_t rest = n - n_train;
  const std::size_t n_test = (rest + 1) / 2;

  DatasetSplit split;
  split.seed = seed;
  auto it = ids.begin();
  split.train.assign(it, it + static_cast<std::ptrdiff_t>(n_train));
  it += static_cast<std::ptrdiff_t>(n_train);
  split.test.assign(it, it + static_cast<std::ptrdiff_t>(n_test));
  it += static_cast<std::ptrdiff_t>(n_test);
  split.dev.assign(it, ids.end());
  return split;
}

nlohmann::json split_to_json(const DatasetSplit& split) {
  return {{"seed", split.seed},
          {"train", split.train},
          {"test", split.test},
          {"dev", split.dev}};
}

DatasetSplit split_from_json(const nlohmann::json& j) {
  DatasetSplit s;
  s.seed = j.at("seed").get<std::uint64_t>();
  s.train = j.at("train").get<std::vector<std::string>>();
  s.test = j.at("test").get<std::vector<std::string>>();
  s.dev = j.at("dev").get<std::vector<std::string>>();
  return s;
}

std::vector<HumanRecord> load_human_records_csv(std::istream& in) {
  std::optional<Header> header;
  auto rows = read_with_header(in, {"riddle id"}, header);
  std::vector<HumanRecord> records;
  for (const auto& row : rows) {
    HumanRecord rec;
    rec.riddle_id = header->cell(row, "riddle id");
    if (rec.riddle_id.empty()) throw RowError(row.line, "missing riddle id");
    std::string winner = header->cell(row, "winner");
    std::string clue = header->cell(row, "clue");
    if (winner.empty() != clue.empty())
      throw RowError(row.line, "winner and clue must be given together");
    if (!winner.empty()) {
      auto k = parse_int(clue);
      if (!k || *k < 1) throw RowError(row.line, "bad clue index \"" + clue + "\"");
      rec.winning_team = std::move(winner);
      rec.answered_on_clue = k;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

namespace {

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(';', start);
    if (end == std::string_view::npos) end = s.size();
    std::string item = trim(s.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = end + 1;
  }
  return out;
}

}  // namespace

std::vector<LedgerEntry> load_ledger_csv(std::istream& in) {
  std::optional<Header> header;
  auto rows = read_with_header(in, {"year", "contest"}, header);
  std::vector<LedgerEntry> entries;
  for (const auto& row : rows) {
    LedgerEntry e;
    auto year = parse_int(header->cell(row, "year"));
    auto contest = parse_int(header->cell(row, "contest"));
    if (!year || !contest) throw RowError(row.line, "bad year or contest number");
    e.year = *year;
    e.contest_no = *contest;
    e.schools = split_list(header->cell(row, "schools"));
    for (const auto& s : split_list(header->cell(row, "scores"))) {
      auto v = parse_int(s);
      if (!v) throw RowError(row.line, "bad score \"" + s + "\"");
      e.final_scores.push_back(*v);
    }
    if (e.schools.size() != e.final_scores.size())
      throw RowError(row.line, "schools and scores differ in length");
    const std::string video = lower(header->cell(row, "video complete"));
    e.video_complete = video == "yes" || video == "true" || video == "1";
    if (std::string n = header->cell(row, "riddles"); !n.empty()) {
      auto v = parse_int(n);
      if (!v || *v < 0) throw RowError(row.line, "bad riddle count \"" + n + "\"");
      e.riddle_count = static_cast<std::size_t>(*v);
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::map<int, YearSummary> ledger_summary(std::span<const LedgerEntry> entries) {
  std::map<int, YearSummary> out;
  for (const auto& e : entries) {
    auto& s = out[e.year];
    ++s.contests;
    if (e.video_complete) ++s.complete_videos;
    s.riddles += e.riddle_count;
  }
  return out;
}

nlohmann::json riddle_to_json(const Riddle& r) {
  auto opt = [](const std::optional<int>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {{"id", r.id},
          {"subject", std::string(to_string(r.subject))},
          {"contest_no", opt(r.contest_no)},
          {"year", opt(r.year)},
          {"clues", r.clues},
          {"gold_answers", r.gold_answers}};
}

Riddle riddle_from_json(const nlohmann::json& j) {
  Riddle r;
  try {
    r.id = j.at("id").get<std::string>();
    const auto subject = j.at("subject").get<std::string>();
    auto s = parse_subject(subject);
    if (!s) throw Error("unknown subject \"" + subject + "\"");
    r.subject = *s;
    if (j.contains("contest_no") && !j["contest_no"].is_null()) r.contest_no = j["contest_no"].get<int>();
    if (j.contains("year") && !j["year"].is_null()) r.year = j["year"].get<int>();
    r.clues = j.at("clues").get<std::vector<std::string>>();
    r.gold_answers = j.at("gold_answers").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& ex) {
    throw Error(std::string("malformed riddle: ") + ex.what());
  }
  if (r.clues.empty() || r.clues.size() > kMaxClues) throw Error("riddle needs 1 to 9 clues");
  if (r.gold_answers.empty()) throw Error("riddle needs a gold answer");
  return r;
}

}  // namespace arena
