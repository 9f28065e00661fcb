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

#ifndef ARENA_METRICS_H_
#define ARENA_METRICS_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "arena/subject.h"

namespace arena {

struct MatchVerdict {
  bool em = false;
  bool fm = false;
  double best_f1 = 0.0;  // in [0, 1]; 1 whenever em
};

inline constexpr double kDefaultFuzzyThreshold = 0.5;

// True iff the normalized prediction is non-empty and equals some normalized
// gold answer. Throws Error if `golds` is empty.
bool exact_match(std::string_view pred, std::span<const std::string> golds);

// Bag-of-tokens F1 between normalize_answer outputs; 0 if either is empty.
double token_f1(std::string_view pred, std::string_view gold);

// best_f1 is the max token_f1 over golds; fm = best_f1 >= threshold.
// Throws Error on empty golds or threshold outside (0, 1].
MatchVerdict fuzzy_match(std::string_view pred,
                         std::span<const std::string> golds,
                         double threshold = kDefaultFuzzyThreshold);

struct WerResult {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t ref_words = 0;
  double wer = 0.0;

  std::size_t errors() const { return substitutions + insertions + deletions; }
};

// Unit-cost word edit distance between normalize_text token sequences.
// Throws Error when the normalized reference is empty.
WerResult word_error_rate(std::string_view ref, std::string_view hyp);

struct LatencyStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
};

// Percentiles use the nearest-rank definition. Throws Error on empty input.
LatencyStats latency_stats(std::span<const double> samples);

// Nearest-rank percentile (p in (0, 100]) of an unsorted sample.
double nearest_rank(std::span<const double> samples, double p);

// One scored prediction, the input to report aggregation.
struct EvalRecord {
  Subject subject = Subject::kPhysics;
  MatchVerdict verdict;
  double latency_s = 0.0;
};

struct ReportStats {
  std::size_t n = 0;
  std::size_t em_count = 0;
  std::size_t fm_count = 0;
  double em_pct = 0.0;  // 100 * em_count / n, half-up to 2 decimals
  double fm_pct = 0.0;
  double mean_latency_s = 0.0;
};

struct EvalReport {
  ReportStats overall;
  std::map<Subject, ReportStats> per_subject;
};

// Rounds 100 * count / n half-up to two decimals, exactly (integer math).
double rounded_percent(std::size_t count, std::size_t n);

// Order-free aggregation. Throws Error on empty input.
EvalReport aggregate_report(std::span<const EvalRecord> records);

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

// Plain-text table with the columns Model | Exact Match | Fuzzy Match.
std::string format_report_table(
    std::span<const std::pair<std::string, EvalReport>> rows);

}  // namespace arena

#endif  // ARENA_METRICS_H_
