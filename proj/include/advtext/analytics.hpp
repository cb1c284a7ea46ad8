// Copyright 2026 The advtext Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "advtext/core.hpp"

namespace advtext {

/// Location statistics of a confidence sample on the percent scale.
struct ConfidenceStats {
  double mean = 0.0;
  double median = 0.0;
  double mode = 0.0;

  friend bool operator==(const ConfidenceStats&, const ConfidenceStats&) = default;
};

/// Mean, median (central-pair average for even n) and mode. The mode is
/// taken over values rounded to 2 decimals, ties broken by the smallest
/// value; confidence scores are continuous, so some binning convention is
/// required for a mode to exist at all.
inline ConfidenceStats confidence_stats(std::vector<double> sample) {
  if (sample.empty()) {
    throw MetricError("confidence_stats: empty sample");
  }
  ConfidenceStats stats;

  double sum = 0.0;
  for (double v : sample) sum += v;
  stats.mean = sum / static_cast<double>(sample.size());

  std::sort(sample.begin(), sample.end());
  const std::size_t n = sample.size();
  stats.median = (n % 2 == 1) ? sample[n / 2] : (sample[n / 2 - 1] + sample[n / 2]) / 2.0;

  std::map<double, std::size_t> bins;
  for (double v : sample) {
    const double rounded = std::round(v * 100.0) / 100.0;
    ++bins[rounded];
  }
  std::size_t best_count = 0;
  double best_value = 0.0;
  for (const auto& [value, count] : bins) {  // ascending keys: first max wins = smallest
    if (count > best_count) {
      best_count = count;
      best_value = value;
    }
  }
  stats.mode = best_value;
  return stats;
}

/// Unweighted mean of per-label F1 over the declared label set. A label
/// with P + R = 0 (including labels absent from the sample) contributes 0.
inline double f1_macro(const std::vector<std::pair<Label, Label>>& pairs,
                       const std::vector<Label>& label_set) {
  if (pairs.empty()) {
    throw MetricError("f1_macro: empty pair list");
  }
  if (label_set.empty()) {
    throw MetricError("f1_macro: empty label set");
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < label_set.size(); ++i) index[label_set[i].value] = i;

  const std::size_t k = label_set.size();
  std::vector<std::size_t> tp(k, 0), fp(k, 0), fn(k, 0);
  for (const auto& [gold, predicted] : pairs) {
    auto g = index.find(gold.value);
    auto p = index.find(predicted.value);
    if (g == index.end()) {
      throw MetricError("f1_macro: gold label '" + gold.value + "' outside the label set");
    }
    if (p == index.end()) {
      throw MetricError("f1_macro: predicted label '" + predicted.value +
                        "' outside the label set");
    }
    if (g->second == p->second) {
      ++tp[g->second];
    } else {
      ++fn[g->second];
      ++fp[p->second];
    }
  }

  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double denom_p = static_cast<double>(tp[i] + fp[i]);
    const double denom_r = static_cast<double>(tp[i] + fn[i]);
    const double precision = denom_p > 0.0 ? tp[i] / denom_p : 0.0;
    const double recall = denom_r > 0.0 ? tp[i] / denom_r : 0.0;
    sum += (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  }
  return sum / static_cast<double>(k);
}

/// Campaign-level aggregates. Confidence statistics are absent for verdict
/// groups with no records.
struct AttackReport {
  std::size_t datapoints_attacked = 0;
  double percent_successful = 0.0;
  /// Same ratio but counting mispredicted points as successes (the model
  /// was already wrong without any augmentation spend).
  double percent_successful_inclusive = 0.0;
  double f1_initial = 0.0;
  double f1_after = 0.0;
  double f1_difference = 0.0;
  std::optional<ConfidenceStats> stats_pass;         // attacked confidence of Pass records
  std::optional<ConfidenceStats> stats_fail;         // attacked confidence of Fail records
  std::optional<ConfidenceStats> stats_fail_before;  // initial confidence of Fail records
  std::optional<ConfidenceStats> stats_mispredict;   // initial confidence of Misprediction records

  friend bool operator==(const AttackReport&, const AttackReport&) = default;
};

/// Builds the before/after robustness report from one campaign's records.
///
/// Data points are keyed by id: the one-hot recipe emits several records
/// per attacked point, which count once for the F1 and success figures
/// (represented by the highest-confidence Pass record) while the
/// confidence statistics use every record. Skipped and Error records are
/// excluded from all statistics.
inline AttackReport build_attack_report(const std::vector<AttackRecord>& records,
                                        const std::vector<Label>& label_set) {
  if (records.empty()) {
    throw MetricError("build_attack_report: no records");
  }

  struct PointState {
    Label gold;
    Label init;
    bool attacked = false;
    const AttackRecord* best_pass = nullptr;
  };
  std::vector<std::string> order;
  std::map<std::string, PointState> points;
  std::size_t mispredicted_points = 0;

  std::vector<double> pass_scores, fail_scores, fail_before_scores, mispredict_scores;

  auto require = [](const AttackRecord& r, bool ok) -> const AttackRecord& {
    if (!ok) {
      throw MetricError("build_attack_report: record '" + r.id +
                        "' is missing predictions required by verdict " + to_string(r.verdict));
    }
    return r;
  };

  for (const AttackRecord& record : records) {
    const AttackRecord& r = require(
        record, record.verdict == Verdict::Skipped || record.verdict == Verdict::Error ||
                    (record.init_pred.has_value() &&
                     (record.verdict == Verdict::Misprediction || record.attack_pred.has_value())));
    switch (r.verdict) {
      case Verdict::Skipped:
      case Verdict::Error:
        continue;
      case Verdict::Misprediction:
        ++mispredicted_points;
        mispredict_scores.push_back(r.init_pred->score * 100.0);
        continue;
      case Verdict::Pass:
        pass_scores.push_back(r.attack_pred->score * 100.0);
        break;
      case Verdict::Fail:
        fail_scores.push_back(r.attack_pred->score * 100.0);
        fail_before_scores.push_back(r.init_pred->score * 100.0);
        break;
    }
    auto [it, inserted] = points.try_emplace(r.id);
    if (inserted) {
      order.push_back(r.id);
      it->second.gold = r.gold_label;
      it->second.init = r.init_pred->label;
    }
    it->second.attacked = true;
    if (r.verdict == Verdict::Pass) {
      const AttackRecord*& best = it->second.best_pass;
      if (best == nullptr || r.attack_pred->score > best->attack_pred->score) {
        best = &r;
      }
    }
  }

  AttackReport report;
  report.datapoints_attacked = points.size();

  std::size_t passed_points = 0;
  std::vector<std::pair<Label, Label>> initial_pairs;
  std::vector<std::pair<Label, Label>> after_pairs;
  for (const std::string& id : order) {
    const PointState& state = points.at(id);
    initial_pairs.emplace_back(state.gold, state.init);
    if (state.best_pass != nullptr) {
      ++passed_points;
      after_pairs.emplace_back(state.gold, state.best_pass->attack_pred->label);
    } else {
      after_pairs.emplace_back(state.gold, state.init);
    }
  }

  if (report.datapoints_attacked > 0) {
    report.percent_successful =
        100.0 * static_cast<double>(passed_points) / static_cast<double>(report.datapoints_attacked);
    report.f1_initial = f1_macro(initial_pairs, label_set);
    report.f1_after = f1_macro(after_pairs, label_set);
  }
  const std::size_t inclusive_denominator = report.datapoints_attacked + mispredicted_points;
  if (inclusive_denominator > 0) {
    report.percent_successful_inclusive = 100.0 *
                                          static_cast<double>(passed_points + mispredicted_points) /
                                          static_cast<double>(inclusive_denominator);
  }
  report.f1_difference = report.f1_initial - report.f1_after;

  if (!pass_scores.empty()) report.stats_pass = confidence_stats(std::move(pass_scores));
  if (!fail_scores.empty()) report.stats_fail = confidence_stats(std::move(fail_scores));
  if (!fail_before_scores.empty()) {
    report.stats_fail_before = confidence_stats(std::move(fail_before_scores));
  }
  if (!mispredict_scores.empty()) {
    report.stats_mispredict = confidence_stats(std::move(mispredict_scores));
  }
  return report;
}

namespace detail {

inline std::string fixed2(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

inline void append_stats_row(std::string& out, const char* name,
                             const std::optional<ConfidenceStats>& stats) {
  char buf[128];
  if (stats) {
    std::snprintf(buf, sizeof(buf), "%-26s %10s %10s %10s\n", name, fixed2(stats->mean).c_str(),
                  fixed2(stats->median).c_str(), fixed2(stats->mode).c_str());
  } else {
    std::snprintf(buf, sizeof(buf), "%-26s %10s %10s %10s\n", name, "-", "-", "-");
  }
  out += buf;
}

}  // namespace detail

/// Plain-text rendering: headline figures, then the per-verdict
/// mean/median/mode table.
inline std::string render_report_text(const AttackReport& report) {
  std::string out;
  char buf[160];
  out += "Attack report\n";
  out += "=============\n";
  std::snprintf(buf, sizeof(buf), "%-34s %zu\n", "Datapoints attacked", report.datapoints_attacked);
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-34s %s%%\n", "Successful",
                detail::fixed2(report.percent_successful).c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-34s %s%%\n", "Successful (incl. mispredictions)",
                detail::fixed2(report.percent_successful_inclusive).c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-34s %s%%\n", "F1 score macro, initial",
                detail::fixed2(report.f1_initial * 100.0).c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-34s %s%%\n", "F1 score macro, after attack",
                detail::fixed2(report.f1_after * 100.0).c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-34s %s%%\n", "F1 score difference",
                detail::fixed2(report.f1_difference * 100.0).c_str());
  out += buf;
  out += "\n";
  std::snprintf(buf, sizeof(buf), "%-26s %10s %10s %10s\n", "Confidence (%)", "Mean", "Median",
                "Mode");
  out += buf;
  detail::append_stats_row(out, "Pass (after attack)", report.stats_pass);
  detail::append_stats_row(out, "Fail (after attack)", report.stats_fail);
  detail::append_stats_row(out, "Fail (before attack)", report.stats_fail_before);
  detail::append_stats_row(out, "Misprediction (initial)", report.stats_mispredict);
  return out;
}

inline nlohmann::json report_to_json(const AttackReport& report) {
  auto stats_json = [](const std::optional<ConfidenceStats>& stats) -> nlohmann::json {
    if (!stats) return nullptr;
    return {{"mean", stats->mean}, {"median", stats->median}, {"mode", stats->mode}};
  };
  return {
      {"datapoints_attacked", report.datapoints_attacked},
      {"percent_successful", report.percent_successful},
      {"percent_successful_inclusive", report.percent_successful_inclusive},
      {"f1_initial", report.f1_initial},
      {"f1_after", report.f1_after},
      {"f1_difference", report.f1_difference},
      {"stats_pass", stats_json(report.stats_pass)},
      {"stats_fail", stats_json(report.stats_fail)},
      {"stats_fail_before", stats_json(report.stats_fail_before)},
      {"stats_mispredict", stats_json(report.stats_mispredict)},
  };
}

}  // namespace advtext
