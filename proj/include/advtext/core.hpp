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

#include <compare>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "advtext/errors.hpp"

namespace advtext {

/// Categorical class identifier. Opaque string drawn from the campaign's
/// declared label set (e.g. a ternary {Negative, Neutral, Positive}).
struct Label {
  std::string value;

  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label&, const Label&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Label& label) {
  return os << label.value;
}

/// Bijective mapping from raw model output labels (e.g. "LABEL_0") to the
/// canonical labels of the dataset. Insertion rejects any pair that would
/// break the bijection.
class LabelMap {
 public:
  LabelMap() = default;

  LabelMap(std::initializer_list<std::pair<std::string, std::string>> pairs) {
    for (const auto& [raw, canonical] : pairs) add(raw, Label{canonical});
  }

  void add(std::string raw, Label canonical) {
    if (raw_to_canonical_.count(raw) != 0) {
      throw ContractViolation("label map already contains raw label '" + raw + "'");
    }
    if (canonical_seen_.count(canonical.value) != 0) {
      throw ContractViolation("label map would not be bijective: two raw labels map to '" +
                              canonical.value + "'");
    }
    canonical_seen_.insert(canonical.value);
    raw_to_canonical_.emplace(std::move(raw), std::move(canonical));
  }

  [[nodiscard]] bool contains(const std::string& raw) const {
    return raw_to_canonical_.count(raw) != 0;
  }

  [[nodiscard]] Label canonicalize(const std::string& raw) const {
    auto it = raw_to_canonical_.find(raw);
    if (it == raw_to_canonical_.end()) {
      throw MappingError("raw label '" + raw + "' has no entry in the label map");
    }
    return it->second;
  }

  [[nodiscard]] std::size_t size() const { return raw_to_canonical_.size(); }
  [[nodiscard]] bool empty() const { return raw_to_canonical_.empty(); }

  [[nodiscard]] const std::map<std::string, Label>& entries() const { return raw_to_canonical_; }

 private:
  std::map<std::string, Label> raw_to_canonical_;
  std::set<std::string> canonical_seen_;
};

/// One labeled text instance under attack.
struct DataPoint {
  std::string id;
  std::string text;
  Label label;

  friend bool operator==(const DataPoint&, const DataPoint&) = default;
};

/// Classifier output: top-1 label plus its confidence in [0, 1].
struct Prediction {
  Label label;
  double score = 0.0;

  Prediction() = default;
  Prediction(Label l, double s) : label(std::move(l)), score(s) {
    if (!(score >= 0.0 && score <= 1.0)) {
      throw ContractViolation("prediction score " + std::to_string(s) + " outside [0, 1]");
    }
  }

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Prediction& p) {
  return os << "(" << p.label.value << ", " << p.score << ")";
}

/// Per-data-point attack outcome. Pass/Fail/Misprediction are the three
/// analysed outcomes; Skipped (budget exhausted before the point was
/// reached) and Error (client fault mid-campaign) are bookkeeping states
/// excluded from all report statistics.
enum class Verdict { Pass, Fail, Misprediction, Skipped, Error };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Misprediction: return "Misprediction";
    case Verdict::Skipped: return "Skipped";
    case Verdict::Error: return "Error";
  }
  return "?";
}

inline std::optional<Verdict> verdict_from_string(const std::string& s) {
  if (s == "Pass") return Verdict::Pass;
  if (s == "Fail") return Verdict::Fail;
  if (s == "Misprediction") return Verdict::Misprediction;
  if (s == "Skipped") return Verdict::Skipped;
  if (s == "Error") return Verdict::Error;
  return std::nullopt;
}

inline std::ostream& operator<<(std::ostream& os, Verdict v) { return os << to_string(v); }

/// One adversarial attempt against one data point.
///
/// Field presence follows the verdict:
///   Misprediction  -> attacked_text, attack_pred, delta all absent
///   Pass           -> attacked_text/attack_pred present, delta absent
///   Fail           -> everything present, delta = (init - attacked) * 100
///   Skipped        -> only id/text/gold populated
///   Error          -> init_pred present when the initial classify succeeded
///
/// `no_op` marks an attempted augmentation that returned the original text
/// verbatim; it is derived (attacked_text == original_text), never stored
/// in the CSV schema.
struct AttackRecord {
  std::string id;
  std::string original_text;
  Label gold_label;
  std::optional<Prediction> init_pred;
  std::optional<std::string> attacked_text;
  std::optional<Prediction> attack_pred;
  Verdict verdict = Verdict::Error;
  std::optional<double> delta;
  bool no_op = false;

  friend bool operator==(const AttackRecord&, const AttackRecord&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const AttackRecord& r) {
  os << "{id=" << r.id << " verdict=" << r.verdict;
  if (r.init_pred) os << " init=" << *r.init_pred;
  if (r.attacked_text) os << " atck_text='" << *r.attacked_text << "'";
  if (r.attack_pred) os << " atck=" << *r.attack_pred;
  if (r.delta) os << " delta=" << *r.delta;
  if (r.no_op) os << " no_op";
  return os << "}";
}

/// delta = (initial confidence - post-attack confidence) * 100.
/// Negative means the model gained confidence after the attack.
inline double compute_delta(double init_score, double attack_score) {
  if (!(init_score >= 0.0 && init_score <= 1.0)) {
    throw ContractViolation("compute_delta: init_score outside [0, 1]");
  }
  if (!(attack_score >= 0.0 && attack_score <= 1.0)) {
    throw ContractViolation("compute_delta: attack_score outside [0, 1]");
  }
  return (init_score - attack_score) * 100.0;
}

/// Verdict assignment. `attacked` must be absent exactly when the initial
/// prediction already disagrees with the gold label (mispredicted points
/// are never augmented).
inline Verdict assign_verdict(const Label& gold, const Prediction& init,
                              const std::optional<Prediction>& attacked) {
  const bool mispredicted = init.label != gold;
  if (mispredicted && attacked.has_value()) {
    throw ContractViolation("assign_verdict: attacked prediction supplied for a mispredicted point");
  }
  if (!mispredicted && !attacked.has_value()) {
    throw ContractViolation("assign_verdict: attacked prediction missing for an attackable point");
  }
  if (mispredicted) return Verdict::Misprediction;
  return attacked->label != init.label ? Verdict::Pass : Verdict::Fail;
}

// --- record constructors -----------------------------------------------
// Every attack recipe builds records through these, so the field-presence
// invariants hold by construction.

inline AttackRecord make_misprediction_record(const DataPoint& dp, Prediction init) {
  AttackRecord r;
  r.id = dp.id;
  r.original_text = dp.text;
  r.gold_label = dp.label;
  r.init_pred = std::move(init);
  r.verdict = Verdict::Misprediction;
  return r;
}

inline AttackRecord make_attempt_record(const DataPoint& dp, Prediction init,
                                        std::string attacked_text, Prediction attacked) {
  AttackRecord r;
  r.id = dp.id;
  r.original_text = dp.text;
  r.gold_label = dp.label;
  r.verdict = assign_verdict(dp.label, init, attacked);
  if (r.verdict == Verdict::Fail) {
    r.delta = compute_delta(init.score, attacked.score);
  }
  r.no_op = attacked_text == dp.text;
  r.init_pred = std::move(init);
  r.attacked_text = std::move(attacked_text);
  r.attack_pred = std::move(attacked);
  return r;
}

inline AttackRecord make_skipped_record(const DataPoint& dp) {
  AttackRecord r;
  r.id = dp.id;
  r.original_text = dp.text;
  r.gold_label = dp.label;
  r.verdict = Verdict::Skipped;
  return r;
}

inline AttackRecord make_error_record(const DataPoint& dp, std::optional<Prediction> init) {
  AttackRecord r;
  r.id = dp.id;
  r.original_text = dp.text;
  r.gold_label = dp.label;
  r.init_pred = std::move(init);
  r.verdict = Verdict::Error;
  return r;
}

}  // namespace advtext
