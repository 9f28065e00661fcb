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

#ifndef ARENA_RIDDLE_DATA_H_
#define ARENA_RIDDLE_DATA_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arena/subject.h"

namespace arena {

inline constexpr std::size_t kMaxClues = 9;
inline constexpr std::size_t kMaxGoldAnswers = 5;

struct Riddle {
  std::string id;
  Subject subject = Subject::kPhysics;
  std::optional<int> contest_no;
  std::optional<int> year;
  std::vector<std::string> clues;         // 1..9, read in order
  std::vector<std::string> gold_answers;  // primary answer first

  friend bool operator==(const Riddle&, const Riddle&) = default;
};

struct LoadWarning {
  std::size_t line = 0;
  std::string message;
};

struct LoadOptions {
  // Contest simulation needs a real subject per riddle. When false, a missing
  // or blank subject defaults to Physics with a warning.
  bool require_subject = false;
};

// Columns (header names matched case-insensitively): "Clue 1".."Clue 9",
// "Answer", "Answer 1".."Answer 4", and optional "Id", "Subject", "Contest",
// "Year". Unknown columns are ignored. Rows without an Id get "row-<n>".
//
// Throws ParseError for broken CSV framing and RowError for schema
// violations (missing answer, no clue, duplicate id, bad subject or year).
std::vector<Riddle> load_riddle_csv(std::istream& in,
                                    const LoadOptions& options = {},
                                    std::vector<LoadWarning>* warnings = nullptr);

// Writes every column load_riddle_csv understands; the output reloads to
// equal riddles.
void write_riddle_csv(std::ostream& out, std::span<const Riddle> riddles);

nlohmann::json riddle_to_json(const Riddle& riddle);
Riddle riddle_from_json(const nlohmann::json& j);

struct DatasetSplit {
  std::uint64_t seed = 0;
  std::vector<std::string> train;
  std::vector<std::string> test;
  std::vector<std::string> dev;

  const std::vector<std::string>& part(std::string_view name) const;
};

// Seeded uniform shuffle, then |train| = floor(0.6 n); the remainder is halved
// with test taking the odd element. Throws Error on empty input.
DatasetSplit split_dataset(std::span<const Riddle> riddles, std::uint64_t seed);

nlohmann::json split_to_json(const DatasetSplit& split);
DatasetSplit split_from_json(const nlohmann::json& j);

struct HumanRecord {
  std::string riddle_id;
  std::optional<std::string> winning_team;
  std::optional<int> answered_on_clue;  // present iff winning_team is
};

// Columns "Riddle Id", "Winner", "Clue".
std::vector<HumanRecord> load_human_records_csv(std::istream& in);

struct LedgerEntry {
  int year = 0;
  int contest_no = 0;
  std::vector<std::string> schools;
  std::vector<int> final_scores;  // aligned with schools
  bool video_complete = false;
  std::size_t riddle_count = 0;
};

// Columns "Year", "Contest", "Schools" and "Scores" (';'-separated),
// "Video Complete" (yes/no/true/false/1/0), "Riddles".
std::vector<LedgerEntry> load_ledger_csv(std::istream& in);

struct YearSummary {
  std::size_t contests = 0;
  std::size_t complete_videos = 0;
  std::size_t riddles = 0;

  friend bool operator==(const YearSummary&, const YearSummary&) = default;
};

std::map<int, YearSummary> ledger_summary(std::span<const LedgerEntry> entries);

}  // namespace arena

#endif  // ARENA_RIDDLE_DATA_H_
