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

#include "arena/metrics.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "arena/error.h"
#include "arena/text_norm.h"

namespace arena {

namespace {

void require_golds(std::span<const std::string> golds) {
  if (golds.empty()) throw Error("at least one gold answer is required");
}

}  // namespace

bool exact_match(std::string_view pred, std::span<const std::string> golds) {
  require_golds(golds);
  const NormalizedText p = normalize_answer(pred);
  if (p.empty()) return false;
  return std::any_of(golds.begin(), golds.end(), [&](const std::string& g) {
    return normalize_answer(g) == p;
  });
}

double token_f1(std::string_view pred, std::string_view gold) {
  const auto pred_tokens = normalize_answer(pred).tokens();
  const auto gold_tokens = normalize_answer(gold).tokens();
  if (pred_tokens.empty() || gold_tokens.empty()) return 0.0;

  std::unordered_map<std::string, int> gold_bag;
  for (const auto& t : gold_tokens) ++gold_bag[t];
  std::size_t common = 0;
  for (const auto& t : pred_tokens) {
    auto it = gold_bag.find(t);
    if (it != gold_bag.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / pred_tokens.size();
  const double recall = static_cast<double>(common) / gold_tokens.size();
  return 2.0 * precision * recall / (precision + recall);
}

MatchVerdict fuzzy_match(std::string_view pred,
                         std::span<const std::string> golds,
                         double threshold) {
  require_golds(golds);
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw Error("fuzzy threshold must lie in (0, 1]");
  MatchVerdict v;
  v.em = exact_match(pred, golds);
  for (const auto& g : golds) v.best_f1 = std::max(v.best_f1, token_f1(pred, g));
  if (v.em) v.best_f1 = 1.0;
  v.fm = v.best_f1 >= threshold;
  return v;
}

WerResult word_error_rate(std::string_view ref, std::string_view hyp) {
  const auto r = normalize_text(ref).tokens();
  const auto h = normalize_text(hyp).tokens();
  if (r.empty()) throw Error("WER reference is empty after normalization");

  const std::size_t m = r.size(), n = h.size();
  std::vector<std::vector<std::size_t>> d(m + 1, std::vector<std::size_t>(n + 1));
  for (std::size_t i = 0; i <= m; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= n; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t sub = d[i - 1][j - 1] + (r[i - 1] == h[j - 1] ? 0 : 1);
      d[i][j] = std::min({sub, d[i - 1][j] + 1, d[i][j - 1] + 1});
    }
  }

  WerResult res;
  res.ref_words = m;
  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        d[i][j] == d[i - 1][j - 1] + (r[i - 1] == h[j - 1] ? 0 : 1)) {
      if (r[i - 1] != h[j - 1]) ++res.substitutions;
      --i;
      --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++res.deletions;
      --i;
    } else {
      ++res.insertions;
      --j;
    }
  }
  res.wer = static_cast<double>(res.errors()) / static_cast<double>(m);
  return res;
}

double nearest_rank(std::span<const double> samples, double p) {
  if (samples.empty()) throw Error("percentile of an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  // A tiny epsilon keeps e.g. 0.95 * 100 from rounding up to rank 96.
  auto rank = static_cast<std::size_t>(
      std::ceil(p / 100.0 * static_cast<double>(sorted.size()) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

LatencyStats latency_stats(std::span<const double> samples) {
  if (samples.empty()) throw Error("latency_stats needs at least one sample");
  LatencyStats s;
  double sum = 0.0;
  s.min = s.max = samples.front();
  for (double x : samples) {
    sum += x;
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean = sum / static_cast<double>(samples.size());
  s.p50 = nearest_rank(samples, 50.0);
  s.p95 = nearest_rank(samples, 95.0);
  return s;
}

double rounded_percent(std::size_t count, std::size_t n) {
  if (n == 0) throw Error("percentage of an empty set");
  // round_half_up(10000 * count / n) hundredths of a percent.
  const unsigned long long hundredths =
      (20000ULL * count + n) / (2ULL * n);
  return static_cast<double>(hundredths) / 100.0;
}

namespace {

struct Tally {
  std::size_t n = 0, em = 0, fm = 0;
  double latency_sum = 0.0;

  void add(const EvalRecord& r) {
    ++n;
    em += r.verdict.em ? 1 : 0;
    fm += r.verdict.fm ? 1 : 0;
    latency_sum += r.latency_s;
  }
  ReportStats stats() const {
    ReportStats s;
    s.n = n;
    s.em_count = em;
    s.fm_count = fm;
    s.em_pct = rounded_percent(em, n);
    s.fm_pct = rounded_percent(fm, n);
    s.mean_latency_s = latency_sum / static_cast<double>(n);
    return s;
  }
};

}  // namespace

EvalReport aggregate_report(std::span<const EvalRecord> records) {
  if (records.empty()) throw Error("cannot aggregate an empty verdict list");
  // Latencies are summed in sorted order so the mean does not depend on the
  // order records arrive in.
  std::vector<const EvalRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const EvalRecord* a, const EvalRecord* b) {
              return a->latency_s < b->latency_s;
            });
  Tally all;
  std::map<Subject, Tally> by_subject;
  for (const EvalRecord* r : sorted) {
    all.add(*r);
    by_subject[r->subject].add(*r);
  }
  EvalReport report;
  report.overall = all.stats();
  for (const auto& [subject, tally] : by_subject)
    report.per_subject[subject] = tally.stats();
  return report;
}

namespace {

nlohmann::json stats_to_json(const ReportStats& s) {
  return {{"n", s.n},
          {"em_count", s.em_count},
          {"fm_count", s.fm_count},
          {"em_pct", s.em_pct},
          {"fm_pct", s.fm_pct},
          {"mean_latency_s", s.mean_latency_s}};
}

ReportStats stats_from_json(const nlohmann::json& j) {
  ReportStats s;
  s.n = j.at("n").get<std::size_t>();
  s.em_count = j.at("em_count").get<std::size_t>();
  s.fm_count = j.at("fm_count").get<std::size_t>();
  s.em_pct = j.at("em_pct").get<double>();
  s.fm_pct = j.at("fm_pct").get<double>();
  s.mean_latency_s = j.at("mean_latency_s").get<double>();
  return s;
}

}  // namespace

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json j = stats_to_json(report.overall);
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [subject, stats] : report.per_subject)
    per[std::string(to_string(subject))] = stats_to_json(stats);
  j["per_subject"] = std::move(per);
  return j;
}

EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport r;
  r.overall = stats_from_json(j);
  if (j.contains("per_subject")) {
    for (const auto& [name, stats] : j.at("per_subject").items()) {
      auto subject = parse_subject(name);
      if (!subject) throw Error("unknown subject in report: " + name);
      r.per_subject[*subject] = stats_from_json(stats);
    }
  }
  return r;
}

std::string format_report_table(
    std::span<const std::pair<std::string, EvalReport>> rows) {
  std::size_t model_width = 5;
  for (const auto& [name, _] : rows) model_width = std::max(model_width, name.size());

  auto pct = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << v << '%';
    return s.str();
  };
  std::ostringstream out;
  const std::string sep = "+" + std::string(model_width + 2, '-') + "+" +
                          std::string(13, '-') + "+" + std::string(13, '-') + "+\n";
  out << sep << "| " << std::left << std::setw(static_cast<int>(model_width))
      << "Model" << " | Exact Match | Fuzzy Match |\n"
      << sep;
  for (const auto& [name, report] : rows) {
    out << "| " << std::left << std::setw(static_cast<int>(model_width)) << name
        << " | " << std::right << std::setw(11) << pct(report.overall.em_pct)
        << " | " << std::setw(11) << pct(report.overall.fm_pct) << " |\n";
  }
  out << sep;
  return out.str();
}

}  // namespace arena
