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

#include <atomic>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <iostream>
#include <limits>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "advtext/analytics.hpp"
#include "advtext/core.hpp"
#include "advtext/modelio.hpp"
#include "advtext/results_csv.hpp"
#include "advtext/tokenize.hpp"

namespace advtext {

/// Knobs shared by the three attack recipes.
struct AttackConfig {
  /// Stop attacking new data points once this many reached Pass (one-hot
  /// recipe). Remaining points are recorded as Skipped. With several
  /// workers this is a soft cap: points already in flight may complete.
  std::optional<std::size_t> max_pass;
  std::size_t top_k_unmask = 5;
  std::size_t max_adversaries_per_point = 10;
  /// Stop the fill phase at the first label flip instead of exhausting
  /// every candidate. Off by default: the full sweep finds the
  /// highest-confidence adversaries, not just the first.
  bool early_exit = false;
  std::size_t workers = 1;
  std::optional<std::filesystem::path> csv_path;
  bool generate_report = false;
};

inline void validate_attack_config(const AttackConfig& config) {
  if (config.max_pass && *config.max_pass == 0) {
    throw ContractViolation("attack config: max_pass must be positive when set");
  }
  if (config.top_k_unmask == 0) {
    throw ContractViolation("attack config: top_k_unmask must be positive");
  }
  if (config.max_adversaries_per_point == 0) {
    throw ContractViolation("attack config: max_adversaries_per_point must be positive");
  }
  if (config.workers == 0) {
    throw ContractViolation("attack config: workers must be positive");
  }
}

enum class AttackStatus { Pass, Fail };

inline const char* to_string(AttackStatus s) { return s == AttackStatus::Pass ? "Pass" : "Fail"; }

/// A token position worth perturbing, found by leave-one-out probing.
/// priority is +infinity when removing the token already flips the label,
/// otherwise round((init_score - loo_score) * 100) for a strict score
/// drop. Positions that neither flip nor drop are not candidates.
struct SaliencyCandidate {
  std::size_t token_index = 0;
  std::string masked_text;
  Prediction loo_pred;
  double priority = 0.0;

  friend bool operator==(const SaliencyCandidate&, const SaliencyCandidate&) = default;
};

/// One filled sentence and how the classifier reacted to it.
struct CandidateAttack {
  std::string text;
  Prediction pred;
  AttackStatus verdict_flag = AttackStatus::Fail;

  friend bool operator==(const CandidateAttack&, const CandidateAttack&) = default;
};

struct OnehotSentenceResult {
  AttackStatus status = AttackStatus::Fail;
  std::vector<CandidateAttack> attacks;  // successful only, confidence-descending
};

/// Instrumentation sink for the single-sentence attack; tests use it to
/// audit the saliency phase.
struct OnehotTrace {
  std::vector<SaliencyCandidate> candidates;  // in visit order
};

namespace detail {

// Banker's rounding, independent of the ambient FP rounding mode.
inline double round_half_even(double value) {
  const double floor_value = std::floor(value);
  const double fraction = value - floor_value;
  if (fraction > 0.5) return floor_value + 1.0;
  if (fraction < 0.5) return floor_value;
  return std::fmod(floor_value, 2.0) == 0.0 ? floor_value : floor_value + 1.0;
}

// Fixed-size worker pool over indices [0, count). Exceptions other than
// the per-point handled ones surface after join.
template <typename Fn>
void run_indexed(std::size_t count, std::size_t workers, Fn&& fn) {
  if (workers > count) workers = count;
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline void note_point_error(const std::string& id, const std::exception& e) {
  static std::mutex log_mutex;
  std::lock_guard lock(log_mutex);
  std::cerr << "advtext: point '" << id << "' recorded as Error: " << e.what() << "\n";
}

}  // namespace detail

/// One-hot word swap against a single tokenized sentence.
///
/// Phase 1 ranks token positions by leave-one-out saliency; phase 2 walks
/// them in priority order, asks the fill-mask model for substitutes and
/// classifies every distinct filled sentence. Returns Pass iff any fill
/// flipped the initial label, together with the successful attacks sorted
/// by attacked confidence (descending), truncated to
/// config.max_adversaries_per_point.
inline OnehotSentenceResult attack_sentence_onehot(const ClassifierClient& model,
                                                   const FillMaskClient& unmasker,
                                                   const TokenList& tokens, const Prediction& init,
                                                   const LabelMap* label_map,
                                                   const AttackConfig& config,
                                                   OnehotTrace* trace = nullptr) {
  if (tokens.empty()) {
    throw ContractViolation("attack_sentence_onehot: empty token list");
  }
  validate_attack_config(config);

  std::vector<SaliencyCandidate> candidates;
  if (tokens.size() >= 2) {  // a single token leaves no sentence to probe
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const Prediction loo = classify(model, join_tokens_except(tokens, i), label_map);
      if (loo.label != init.label) {
        candidates.push_back(SaliencyCandidate{i, replace_with_mask(tokens, i, unmasker.mask_token()),
                                               loo, std::numeric_limits<double>::infinity()});
      } else if (loo.score < init.score) {
        candidates.push_back(
            SaliencyCandidate{i, replace_with_mask(tokens, i, unmasker.mask_token()), loo,
                              detail::round_half_even((init.score - loo.score) * 100.0)});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const SaliencyCandidate& a, const SaliencyCandidate& b) {
              if (a.priority != b.priority) return a.priority > b.priority;
              return a.token_index < b.token_index;
            });
  if (trace != nullptr) trace->candidates = candidates;

  OnehotSentenceResult result;
  std::vector<CandidateAttack> collected;
  std::set<std::string> seen_texts;  // identical fills from different masks count once
  bool stop = false;
  for (const SaliencyCandidate& candidate : candidates) {
    if (stop) break;
    for (const FillResult& fill : unmask(unmasker, candidate.masked_text, config.top_k_unmask)) {
      if (!seen_texts.insert(fill.text).second) continue;
      const Prediction pred = classify(model, fill.text, label_map);
      const bool flipped = pred.label != init.label;
      if (flipped) result.status = AttackStatus::Pass;
      collected.push_back(
          CandidateAttack{fill.text, pred, flipped ? AttackStatus::Pass : AttackStatus::Fail});
      if (flipped && config.early_exit) {
        stop = true;
        break;
      }
    }
  }

  for (CandidateAttack& attack : collected) {
    if (attack.verdict_flag == AttackStatus::Pass) {
      result.attacks.push_back(std::move(attack));
    }
  }
  std::stable_sort(result.attacks.begin(), result.attacks.end(),
                   [](const CandidateAttack& a, const CandidateAttack& b) {
                     return a.pred.score > b.pred.score;
                   });
  if (result.attacks.size() > config.max_adversaries_per_point) {
    result.attacks.resize(config.max_adversaries_per_point);
  }
  return result;
}

namespace detail {

inline void finish_campaign(const std::vector<AttackRecord>& records,
                            const std::vector<Label>& label_set, const AttackConfig& config) {
  if (config.csv_path) {
    save_results(records, *config.csv_path);
  }
  if (config.generate_report) {
    std::cout << render_report_text(build_attack_report(records, label_set));
  }
}

// Shared control flow of the two sentence-level recipes (they differ only
// in the augmenter).
template <typename AugmentFn>
std::vector<AttackRecord> run_sentence_attack(const ClassifierClient& model,
                                              const std::vector<DataPoint>& dataset,
                                              const AttackConfig& config, AugmentFn&& augment) {
  if (dataset.empty()) {
    throw ContractViolation("attack campaign: dataset is empty");
  }
  validate_attack_config(config);

  std::vector<AttackRecord> records(dataset.size());
  run_indexed(dataset.size(), config.workers, [&](std::size_t i) {
    const DataPoint& dp = dataset[i];
    std::optional<Prediction> init;
    try {
      init = classify(model, dp.text);
      if (init->label != dp.label) {
        records[i] = make_misprediction_record(dp, *init);
        return;
      }
      std::string augmented = augment(dp.text);
      if (augmented.empty()) {
        throw MalformedResponse("augmenter returned empty text");
      }
      Prediction attacked = classify(model, augmented);
      records[i] = make_attempt_record(dp, *init, std::move(augmented), std::move(attacked));
    } catch (const ClientError& e) {
      note_point_error(dp.id, e);
      records[i] = make_error_record(dp, std::move(init));
    }
  });

  finish_campaign(records, model.label_set(), config);
  return records;
}

}  // namespace detail

/// Sentence-level attack: paraphrase each attackable point once and keep
/// or flip the verdict on the classifier's reaction. One record per data
/// point; mispredicted points cost a single classifier call.
inline std::vector<AttackRecord> run_paraphrase_attack(const ClassifierClient& model,
                                                       const ParaphraserClient& paraphraser,
                                                       const std::vector<DataPoint>& dataset,
                                                       const AttackConfig& config = {}) {
  return detail::run_sentence_attack(
      model, dataset, config, [&](const std::string& text) { return paraphraser.paraphrase(text); });
}

/// Same control flow with the pivot-language round trip as the augmenter.
/// An identity round trip is a legal outcome, recorded as Fail with
/// delta = 0 and no_op = true.
inline std::vector<AttackRecord> run_backtranslation_attack(const ClassifierClient& model,
                                                            const TranslatorClient& fwd,
                                                            const TranslatorClient& bwd,
                                                            const std::vector<DataPoint>& dataset,
                                                            const AttackConfig& config = {}) {
  if (fwd.target_lang() != bwd.source_lang()) {
    throw ConfigError("back-translation attack: pivot mismatch, forward targets '" +
                      fwd.target_lang() + "' but backward reads '" + bwd.source_lang() + "'");
  }
  return detail::run_sentence_attack(
      model, dataset, config, [&](const std::string& text) { return back_translate(fwd, bwd, text); });
}

/// Word-level attack (one-to-many): each attackable data point yields one
/// record per successful adversary, mispredicted points one placeholder
/// row, and points after budget exhaustion one Skipped row. An attacked
/// point with no successful fill yields no rows.
inline std::vector<AttackRecord> run_onehot_attack(const ClassifierClient& model,
                                                   const FillMaskClient& unmasker,
                                                   const std::vector<DataPoint>& dataset,
                                                   const AttackConfig& config = {}) {
  if (dataset.empty()) {
    throw ContractViolation("attack campaign: dataset is empty");
  }
  validate_attack_config(config);

  std::vector<std::vector<AttackRecord>> slots(dataset.size());
  std::atomic<std::size_t> successes{0};
  detail::run_indexed(dataset.size(), config.workers, [&](std::size_t i) {
    const DataPoint& dp = dataset[i];
    if (config.max_pass && successes.load() >= *config.max_pass) {
      slots[i].push_back(make_skipped_record(dp));
      return;
    }
    std::optional<Prediction> init;
    try {
      init = classify(model, dp.text);
      if (init->label != dp.label) {
        slots[i].push_back(make_misprediction_record(dp, *init));
        return;
      }
      const TokenList tokens = tokenize(dp.text);
      OnehotSentenceResult sentence =
          attack_sentence_onehot(model, unmasker, tokens, *init, nullptr, config);
      if (sentence.status == AttackStatus::Pass) {
        successes.fetch_add(1);
      }
      for (CandidateAttack& attack : sentence.attacks) {
        slots[i].push_back(
            make_attempt_record(dp, *init, std::move(attack.text), std::move(attack.pred)));
      }
    } catch (const ClientError& e) {
      detail::note_point_error(dp.id, e);
      slots[i] = {make_error_record(dp, std::move(init))};
    } catch (const TokenizeError& e) {
      detail::note_point_error(dp.id, e);
      slots[i] = {make_error_record(dp, std::move(init))};
    } catch (const ContractViolation& e) {
      // A text containing the mask sentinel itself breaks the single-mask
      // precondition of unmask; fault the point, not the campaign.
      detail::note_point_error(dp.id, e);
      slots[i] = {make_error_record(dp, std::move(init))};
    }
  });

  std::vector<AttackRecord> records;
  for (auto& slot : slots) {
    for (auto& record : slot) records.push_back(std::move(record));
  }
  detail::finish_campaign(records, model.label_set(), config);
  return records;
}

}  // namespace advtext
