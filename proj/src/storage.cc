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

#include "arena/storage.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "arena/error.h"

namespace arena {

namespace fs = std::filesystem;

fs::path resolve_data_dir(const std::optional<std::string>& flag) {
  if (const char* env = std::getenv("ARENA_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return flag.value_or("arena-data");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::random_device rd;
  const fs::path tmp = path.string() + ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

void append_line(const fs::path& path, std::string_view line) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot append to " + path.string());
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.put('\n');
  out.flush();
}

DataDir::DataDir(fs::path root) : root_(std::move(root)) {
  fs::create_directories(books_dir());
  fs::create_directories(matches_dir());
  fs::create_directories(reports_dir());
}

std::vector<Riddle> DataDir::load_riddles() const {
  std::istringstream in(read_file(riddles_path()));
  return load_riddle_csv(in);
}

void DataDir::save_riddles(std::span<const Riddle> riddles) const {
  std::ostringstream out;
  write_riddle_csv(out, riddles);
  write_file_atomic(riddles_path(), out.str());
}

DatasetSplit DataDir::load_split() const {
  return split_from_json(nlohmann::json::parse(read_file(split_path())));
}

void DataDir::save_split(const DatasetSplit& split) const {
  write_file_atomic(split_path(), split_to_json(split).dump(2) + "\n");
}

std::vector<Riddle> DataDir::split_riddles(std::string_view part) const {
  if (part != "train" && part != "test" && part != "dev") {
    throw Error("split part must be train, test or dev, got \"" + std::string(part) + "\"");
  }
  const auto riddles = load_riddles();
  const auto split = load_split();
  std::map<std::string, const Riddle*> by_id;
  for (const auto& r : riddles) by_id[r.id] = &r;
  std::vector<Riddle> out;
  for (const auto& id : split.part(part)) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw Error("split refers to unknown riddle \"" + id + "\"");
    out.push_back(*it->second);
  }
  return out;
}

void DataDir::save_book(std::string_view name, const std::vector<Passage>& passages) const {
  if (name.empty() || name.find('/') != std::string_view::npos || name.front() == '.') {
    throw Error("bad book name \"" + std::string(name) + "\"");
  }
  std::ostringstream out;
  write_passages_jsonl(out, passages);
  write_file_atomic(books_dir() / (std::string(name) + ".jsonl"), out.str());
}

std::vector<Passage> DataDir::load_passages() const {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(books_dir())) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<Passage> out;
  for (const auto& f : files) {
    std::istringstream in(read_file(f));
    auto book = read_passages_jsonl(in);
    out.insert(out.end(), std::make_move_iterator(book.begin()),
               std::make_move_iterator(book.end()));
  }
  return out;
}

CorpusIndex DataDir::load_index() const {
  return CorpusIndex::from_json(nlohmann::json::parse(read_file(index_path())));
}

void DataDir::save_index(const CorpusIndex& index) const {
  write_file_atomic(index_path(), index.to_json().dump() + "\n");
}

}  // namespace arena
