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

#ifndef ARENA_RETRIEVAL_H_
#define ARENA_RETRIEVAL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "arena/corpus_parser.h"

namespace arena {

struct Retrieval {
  std::string passage_id;
  double score = 0.0;  // cosine similarity, in [0, 1]
};

struct ContextBundle {
  std::string context_text;  // passage texts joined by '\n', retrieval order
  double confidence = 0.0;   // mean retrieval score
  std::vector<Retrieval> retrievals;
};

// Sparse vector entry: (term dimension, weight). Entries are sorted by
// dimension.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

// TF-IDF index over passages. Terms are normalize_text tokens, tf is the raw
// count, idf(t) = ln(1 + N / df(t)), and every passage vector has unit L2
// norm. Immutable once built; concurrent searches are safe.
class CorpusIndex {
 public:
  // Throws Error on an empty corpus or duplicate ids. Passages without any
  // indexable term are left out.
  static CorpusIndex build(std::vector<Passage> passages);

  // Top-k passages by cosine score, descending, ties broken by ascending
  // passage id. Throws Error if the query normalizes to nothing or k == 0.
  std::vector<Retrieval> search(std::string_view query, std::size_t k = 3) const;

  // Throws Error on an empty list or an unknown passage id.
  ContextBundle make_context(std::span<const Retrieval> retrievals) const;

  const Passage& passage(std::string_view id) const;
  std::size_t passage_count() const { return passages_.size(); }
  std::size_t vocabulary_size() const { return vocabulary_.size(); }
  // 0 for terms outside the vocabulary.
  double idf(std::string_view term) const;
  const SparseVector& vector(std::size_t passage_index) const { return vectors_[passage_index]; }
  const std::vector<Passage>& passages() const { return passages_; }

  nlohmann::json to_json() const;
  // Validates ids, dimensions and unit norms. Throws Error on violations.
  static CorpusIndex from_json(const nlohmann::json& j);

 private:
  CorpusIndex() = default;
  SparseVector vectorize(std::string_view text) const;
  void build_postings();

  std::vector<std::string> vocabulary_;  // sorted; position = dimension
  std::unordered_map<std::string, std::uint32_t> term_ids_;
  std::vector<double> idf_;
  std::vector<Passage> passages_;
  std::vector<SparseVector> vectors_;
  std::unordered_map<std::string, std::size_t> passage_ids_;
  // dimension -> (passage index, weight), passage indices ascending
  std::vector<std::vector<std::pair<std::uint32_t, double>>> postings_;
};

inline CorpusIndex build_index(std::vector<Passage> passages) {
  return CorpusIndex::build(std::move(passages));
}

inline std::vector<Retrieval> search(const CorpusIndex& index, std::string_view query,
                                     std::size_t k = 3) {
  return index.search(query, k);
}

inline ContextBundle make_context(const CorpusIndex& index,
                                  std::span<const Retrieval> retrievals) {
  return index.make_context(retrievals);
}

}  // namespace arena

#endif  // ARENA_RETRIEVAL_H_
