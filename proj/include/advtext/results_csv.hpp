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

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "advtext/core.hpp"
#include "advtext/detail/csv.hpp"
#include "advtext/detail/io.hpp"

namespace advtext {

// Attack results persist as UTF-8 CSV with this exact header. Absent
// fields (mispredicted, skipped or errored points) serialize as '-'.
// delta and no_op are derived on ingestion, never stored.
inline constexpr const char* kResultsHeader =
    "id,text,label,initPred,initScore,atckPred,atckScore,atckSuccess,atckSent";

inline std::string render_results_csv(const std::vector<AttackRecord>& records) {
  std::string out = kResultsHeader;
  out += '\n';
  for (const AttackRecord& r : records) {
    std::vector<std::string> row;
    row.reserve(9);
    row.push_back(r.id);
    row.push_back(r.original_text);
    row.push_back(r.gold_label.value);
    row.push_back(r.init_pred ? r.init_pred->label.value : "-");
    row.push_back(r.init_pred ? detail::format_double(r.init_pred->score) : "-");
    row.push_back(r.attack_pred ? r.attack_pred->label.value : "-");
    row.push_back(r.attack_pred ? detail::format_double(r.attack_pred->score) : "-");
    row.push_back(to_string(r.verdict));
    row.push_back(r.attacked_text ? *r.attacked_text : "-");
    detail::csv_append_row(out, row);
  }
  return out;
}

inline void save_results(const std::vector<AttackRecord>& records,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw WriteError("cannot open results file for writing: " + path.string());
  }
  out << render_results_csv(records);
  if (!out) {
    throw WriteError("failed writing results file: " + path.string());
  }
}

/// Parses a results document back into records. Accepts both the canonical
/// `atck*` column spelling and the `atk*` variant. delta is recomputed for
/// Fail rows; no_op is recomputed from text equality.
inline std::vector<AttackRecord> parse_results(const std::string& csv_text,
                                               const std::string& where = "<string>") {
  auto table = detail::csv_parse(detail::strip_bom(csv_text));
  if (table.empty()) {
    throw LoadError(where + ": empty results document");
  }
  const auto& header = table.front();
  auto column_of = [&](std::initializer_list<const char*> names) -> std::ptrdiff_t {
    for (const char* name : names) {
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<std::ptrdiff_t>(i);
      }
    }
    return -1;
  };
  const std::ptrdiff_t id_col = column_of({"id"});
  const std::ptrdiff_t text_col = column_of({"text"});
  const std::ptrdiff_t label_col = column_of({"label"});
  const std::ptrdiff_t init_pred_col = column_of({"initPred"});
  const std::ptrdiff_t init_score_col = column_of({"initScore"});
  const std::ptrdiff_t atck_pred_col = column_of({"atckPred", "atkPred"});
  const std::ptrdiff_t atck_score_col = column_of({"atckScore", "atkScore"});
  const std::ptrdiff_t atck_success_col = column_of({"atckSuccess", "atkSuccess"});
  const std::ptrdiff_t atck_sent_col = column_of({"atckSent", "atkSent"});
  for (auto [col, name] : {std::pair{id_col, "id"}, {text_col, "text"}, {label_col, "label"},
                           {init_pred_col, "initPred"}, {init_score_col, "initScore"},
                           {atck_pred_col, "atckPred"}, {atck_score_col, "atckScore"},
                           {atck_success_col, "atckSuccess"}, {atck_sent_col, "atckSent"}}) {
    if (col < 0) {
      throw LoadError(where + ": missing column '" + std::string(name) + "'");
    }
  }

  std::vector<AttackRecord> records;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& cells = table[i];
    if (cells.size() == 1 && cells[0].empty()) continue;
    if (cells.size() < header.size()) {
      throw LoadError(where + ": row " + std::to_string(i) + " has " +
                      std::to_string(cells.size()) + " fields, expected " +
                      std::to_string(header.size()));
    }
    auto cell = [&](std::ptrdiff_t col) -> const std::string& {
      return cells[static_cast<std::size_t>(col)];
    };
    auto parse_score = [&](std::ptrdiff_t col, const char* what) {
      auto value = detail::parse_double(cell(col));
      if (!value || *value < 0.0 || *value > 1.0) {
        throw LoadError(where + ": row " + std::to_string(i) + " has invalid " + what + " '" +
                        cell(col) + "'");
      }
      return *value;
    };

    AttackRecord r;
    r.id = cell(id_col);
    r.original_text = cell(text_col);
    r.gold_label = Label{cell(label_col)};
    auto verdict = verdict_from_string(cell(atck_success_col));
    if (!verdict) {
      throw LoadError(where + ": row " + std::to_string(i) + " has unknown verdict '" +
                      cell(atck_success_col) + "'");
    }
    r.verdict = *verdict;
    if (cell(init_pred_col) != "-") {
      r.init_pred = Prediction(Label{cell(init_pred_col)}, parse_score(init_score_col, "initScore"));
    }
    if (cell(atck_pred_col) != "-") {
      r.attack_pred =
          Prediction(Label{cell(atck_pred_col)}, parse_score(atck_score_col, "atckScore"));
    }
    if (cell(atck_sent_col) != "-") {
      r.attacked_text = cell(atck_sent_col);
      r.no_op = *r.attacked_text == r.original_text;
    }
    if (r.verdict == Verdict::Fail && r.init_pred && r.attack_pred) {
      r.delta = compute_delta(r.init_pred->score, r.attack_pred->score);
    }
    records.push_back(std::move(r));
  }
  return records;
}

inline std::vector<AttackRecord> load_results(const std::filesystem::path& path) {
  return parse_results(detail::read_file(path), path.string());
}

}  // namespace advtext
