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

#ifndef ARENA_STORAGE_H_
#define ARENA_STORAGE_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arena/corpus_parser.h"
#include "arena/retrieval.h"
#include "arena/riddle_data.h"

namespace arena {

// $ARENA_DATA_DIR when set, else `flag`, else "./arena-data".
std::filesystem::path resolve_data_dir(const std::optional<std::string>& flag);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
// Appends `line` plus '\n' and flushes.
void append_line(const std::filesystem::path& path, std::string_view line);

// On-disk layout under one root:
//   datasets/riddles.csv, datasets/split.json, datasets/books/*.jsonl,
//   datasets/index.json, matches/, reports/
class DataDir {
 public:
  // Creates the directories when missing.
  explicit DataDir(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path datasets_dir() const { return root_ / "datasets"; }
  std::filesystem::path matches_dir() const { return root_ / "matches"; }
  std::filesystem::path reports_dir() const { return root_ / "reports"; }
  std::filesystem::path books_dir() const { return datasets_dir() / "books"; }
  std::filesystem::path riddles_path() const { return datasets_dir() / "riddles.csv"; }
  std::filesystem::path split_path() const { return datasets_dir() / "split.json"; }
  std::filesystem::path index_path() const { return datasets_dir() / "index.json"; }

  // The load_* calls throw NotFound when the file does not exist.
  std::vector<Riddle> load_riddles() const;
  void save_riddles(std::span<const Riddle> riddles) const;

  DatasetSplit load_split() const;
  void save_split(const DatasetSplit& split) const;

  // Riddles of one split part ("train", "test", "dev"), in split order.
  std::vector<Riddle> split_riddles(std::string_view part) const;

  void save_book(std::string_view name, const std::vector<Passage>& passages) const;
  // Every stored book, ordered by book name then passage order.
  std::vector<Passage> load_passages() const;

  CorpusIndex load_index() const;
  void save_index(const CorpusIndex& index) const;

 private:
  std::filesystem::path root_;
};

}  // namespace arena

#endif  // ARENA_STORAGE_H_
