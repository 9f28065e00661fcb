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

#include "arena/retrieval.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "arena/error.h"
#include "arena/text_norm.h"

namespace arena {

namespace {

constexpr double kNormTolerance = 1e-9;

double l2_norm(const SparseVector& v) {
  double sum = 0.0;
  for (const auto& [_, w] : v) sum += w * w;
  return std::sqrt(sum);
}

}  // namespace

CorpusIndex CorpusIndex::build(std::vector<Passage> passages) {
  if (passages.empty()) throw Error("cannot index an empty corpus");

  CorpusIndex index;
  std::vector<std::map<std::string, std::size_t>> term_counts;
  std::map<std::string, std::size_t> document_frequency;
  for (auto& p : passages) {
    std::map<std::string, std::size_t> counts;
    for (auto& tok : normalize_text(p.text).tokens()) ++counts[tok];
    if (index.passage_ids_.count(p.id))
      throw Error("duplicate passage id \"" + p.id + "\"");
    if (counts.empty()) continue;
    index.passage_ids_.emplace(p.id, index.passages_.size());
    for (const auto& [term, _] : counts) ++document_frequency[term];
    term_counts.push_back(std::move(counts));
    index.passages_.push_back(std::move(p));
  }
  if (index.passages_.empty()) throw Error("no passage has indexable text");

  const double n = static_cast<double>(index.passages_.size());
  for (const auto& [term, df] : document_frequency) {
    index.term_ids_.emplace(term, static_cast<std::uint32_t>(index.vocabulary_.size()));
    index.vocabulary_.push_back(term);
    index.idf_.push_back(std::log(1.0 + n / static_cast<double>(df)));
  }

  for (const auto& counts : term_counts) {
    SparseVector v;
    for (const auto& [term, tf] : counts) {
      const auto dim = index.term_ids_.at(term);
      v.emplace_back(dim, static_cast<double>(tf) * index.idf_[dim]);
    }
    const double norm = l2_norm(v);
    for (auto& [_, w] : v) w /= norm;
    index.vectors_.push_back(std::move(v));
  }
  index.build_postings();
  return index;
}

void CorpusIndex::build_postings() {
  postings_.assign(vocabulary_.size(), {});
  for (std::size_t p = 0; p < vectors_.size(); ++p)
    for (const auto& [dim, w] : vectors_[p])
      postings_[dim].emplace_back(static_cast<std::uint32_t>(p), w);
}

SparseVector CorpusIndex::vectorize(std::string_view text) const {
  std::map<std::uint32_t, std::size_t> counts;
  for (const auto& tok : normalize_text(text).tokens()) {
    auto it = term_ids_.find(tok);
    if (it != term_ids_.end()) ++counts[it->second];
  }
  SparseVector v;
  for (const auto& [dim, tf] : counts) v.emplace_back(dim, static_cast<double>(tf) * idf_[dim]);
  const double norm = l2_norm(v);
  if (norm > 0.0)
    for (auto& [_, w] : v) w /= norm;
  return v;
}

std::vector<Retrieval> CorpusIndex::search(std::string_view query, std::size_t k) const {
  if (k == 0) throw Error("search needs k >= 1");
  if (normalize_text(query).empty()) throw Error("query is empty after normalization");

  // Postings are summed in ascending dimension order.
  std::vector<double> scores(passages_.size(), 0.0);
  for (const auto& [dim, qw] : vectorize(query))
    for (const auto& [p, w] : postings_[dim]) scores[p] += qw * w;

  std::vector<std::size_t> order(passages_.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t top = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return passages_[a].id < passages_[b].id;
                    });
  std::vector<Retrieval> out;
  out.reserve(top);
  for (std::size_t i = 0; i < top; ++i) {
    const std::size_t p = order[i];
    out.push_back({passages_[p].id, std::clamp(scores[p], 0.0, 1.0)});
  }
  return out;
}

ContextBundle CorpusIndex::make_context(std::span<const Retrieval> retrievals) const {
  if (retrievals.empty()) throw Error("make_context needs at least one retrieval");
  ContextBundle bundle;
  double sum = 0.0;
  for (const auto& r : retrievals) {
    const Passage& p = passage(r.passage_id);
    if (!bundle.context_text.empty()) bundle.context_text.push_back('\n');
    bundle.context_text += p.text;
    sum += r.score;
    bundle.retrievals.push_back(r);
  }
  bundle.confidence = sum / static_cast<double>(retrievals.size());
  return bundle;
}

const Passage& CorpusIndex::passage(std::string_view id) const {
  auto it = passage_ids_.find(std::string(id));
  if (it == passage_ids_.end()) throw Error("unknown passage id \"" + std::string(id) + "\"");
  return passages_[it->second];
}

double CorpusIndex::idf(std::string_view term) const {
  auto it = term_ids_.find(std::string(term));
  return it == term_ids_.end() ? 0.0 : idf_[it->second];
}

nlohmann::json CorpusIndex::to_json() const {
  nlohmann::json passages = nlohmann::json::array();
  for (std::size_t i = 0; i < passages_.size(); ++i) {
    nlohmann::json p = passage_to_json(passages_[i]);
    nlohmann::json vec = nlohmann::json::array();
    for (const auto& [dim, w] : vectors_[i]) vec.push_back({dim, w});
    p["vector"] = std::move(vec);
    passages.push_back(std::move(p));
  }
  return {{"passage_count", passages_.size()},
          {"vocabulary", vocabulary_},
          {"idf", idf_},
          {"passages", std::move(passages)}};
}

CorpusIndex CorpusIndex::from_json(const nlohmann::json& j) {
  CorpusIndex index;
  try {
    index.vocabulary_ = j.at("vocabulary").get<std::vector<std::string>>();
    index.idf_ = j.at("idf").get<std::vector<double>>();
    if (index.idf_.size() != index.vocabulary_.size())
      throw Error("idf and vocabulary sizes differ");
    for (std::size_t d = 0; d < index.vocabulary_.size(); ++d) {
      if (!(index.idf_[d] > 0.0)) throw Error("non-positive idf for " + index.vocabulary_[d]);
      if (!index.term_ids_.emplace(index.vocabulary_[d], static_cast<std::uint32_t>(d)).second)
        throw Error("duplicate vocabulary term " + index.vocabulary_[d]);
    }
    for (const auto& pj : j.at("passages")) {
      Passage p = passage_from_json(pj);
      SparseVector v;
      for (const auto& entry : pj.at("vector")) {
        const auto dim = entry.at(0).get<std::uint32_t>();
        if (dim >= index.vocabulary_.size()) throw Error("vector dimension out of range");
        if (!v.empty() && dim <= v.back().first) throw Error("vector dimensions not ascending");
        v.emplace_back(dim, entry.at(1).get<double>());
      }
      if (std::abs(l2_norm(v) - 1.0) > kNormTolerance)
        throw Error("passage " + p.id + " vector is not unit length");
      if (!index.passage_ids_.emplace(p.id, index.passages_.size()).second)
        throw Error("duplicate passage id \"" + p.id + "\"");
      index.passages_.push_back(std::move(p));
      index.vectors_.push_back(std::move(v));
    }
    if (j.at("passage_count").get<std::size_t>() != index.passages_.size())
      throw Error("passage_count does not match the stored passages");
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed index: ") + e.what());
  }
  if (index.passages_.empty()) throw Error("index has no passages");
  index.build_postings();
  return index;
}

}  // namespace arena
