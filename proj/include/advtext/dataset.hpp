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
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "advtext/core.hpp"
#include "advtext/detail/csv.hpp"
#include "advtext/detail/io.hpp"
#include "advtext/detail/unicode.hpp"

namespace advtext {

struct Dataset {
  std::string name;
  std::vector<DataPoint> points;
  std::vector<Label> label_set;  // declared order is the tie-break order

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

enum class DatasetFormat { Csv, Jsonl };

inline const char* to_string(DatasetFormat f) {
  return f == DatasetFormat::Csv ? "csv" : "jsonl";
}

/// Maps our field names onto the file's column/key names. An empty id
/// column means "synthesize ids from the row index".
struct ColumnSchema {
  std::string id = "id";
  std::string text = "text";
  std::string label = "label";
};

struct LoadOptions {
  std::vector<Label> label_set;       // empty = infer in order of first appearance
  const LabelMap* label_map = nullptr;  // canonicalize raw file labels when set
  std::string name;                   // default: file stem
};

namespace detail {

inline std::string trim_whitespace(std::string_view text) {
  // Unicode-aware trim so "text non-empty" means non-empty after trimming.
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end) {
    auto [cp, len] = decode_utf8(text, begin);
    if (!is_whitespace(cp)) break;
    begin += len;
  }
  std::size_t last_visible_end = begin;
  std::size_t pos = begin;
  while (pos < end) {
    auto [cp, len] = decode_utf8(text, pos);
    pos += len;
    if (!is_whitespace(cp)) last_visible_end = pos;
  }
  return std::string(text.substr(begin, last_visible_end - begin));
}

struct RawRow {
  std::string id;       // empty = absent
  std::string text;
  std::string label;
  std::size_t row_number;  // 1-based data row, for error messages
};

inline Dataset assemble_dataset(std::vector<RawRow> rows, const LoadOptions& options,
                                const std::filesystem::path& path) {
  Dataset dataset;
  dataset.name = options.name.empty() ? path.stem().string() : options.name;
  dataset.label_set = options.label_set;
  const bool infer_labels = dataset.label_set.empty();

  std::set<std::string> seen_ids;
  for (auto& row : rows) {
    DataPoint point;
    point.id = row.id.empty() ? std::to_string(row.row_number - 1) : std::move(row.id);
    if (!seen_ids.insert(point.id).second) {
      throw LoadError(path.string() + ": duplicate id '" + point.id + "' at row " +
                      std::to_string(row.row_number));
    }
    if (trim_whitespace(row.text).empty()) {
      throw LoadError(path.string() + ": empty text at row " + std::to_string(row.row_number));
    }
    point.text = std::move(row.text);
    point.label = options.label_map != nullptr && options.label_map->contains(row.label)
                      ? options.label_map->canonicalize(row.label)
                      : Label{std::move(row.label)};
    if (infer_labels) {
      if (std::find(dataset.label_set.begin(), dataset.label_set.end(), point.label) ==
          dataset.label_set.end()) {
        dataset.label_set.push_back(point.label);
      }
    } else if (std::find(dataset.label_set.begin(), dataset.label_set.end(), point.label) ==
               dataset.label_set.end()) {
      throw LoadError(path.string() + ": label '" + point.label.value +
                      "' outside the declared label set at row " + std::to_string(row.row_number));
    }
    dataset.points.push_back(std::move(point));
  }
  return dataset;
}

}  // namespace detail

/// Loads a labeled dataset from CSV or JSONL. Ids are synthesized from the
/// data row index when the id column is absent or unmapped; every load
/// failure names the offending row.
inline Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format,
                            const ColumnSchema& schema = {}, const LoadOptions& options = {}) {
  const std::string content{detail::strip_bom(detail::read_file(path))};
  std::vector<detail::RawRow> rows;

  if (format == DatasetFormat::Csv) {
    auto table = detail::csv_parse(content);
    if (table.empty()) {
      throw LoadError(path.string() + ": no header row");
    }
    const auto& header = table.front();
    auto column_of = [&](const std::string& name) -> std::ptrdiff_t {
      auto it = std::find(header.begin(), header.end(), name);
      return it == header.end() ? -1 : it - header.begin();
    };
    const std::ptrdiff_t id_col = schema.id.empty() ? -1 : column_of(schema.id);
    const std::ptrdiff_t text_col = column_of(schema.text);
    const std::ptrdiff_t label_col = column_of(schema.label);
    if (text_col < 0) {
      throw LoadError(path.string() + ": missing column '" + schema.text + "'");
    }
    if (label_col < 0) {
      throw LoadError(path.string() + ": missing column '" + schema.label + "'");
    }
    for (std::size_t i = 1; i < table.size(); ++i) {
      const auto& cells = table[i];
      if (cells.size() == 1 && cells[0].empty()) continue;  // trailing blank line
      const std::size_t needed = static_cast<std::size_t>(
          std::max({id_col, text_col, label_col}) + 1);
      if (cells.size() < needed) {
        throw LoadError(path.string() + ": row " + std::to_string(i) + " has " +
                        std::to_string(cells.size()) + " fields, expected at least " +
                        std::to_string(needed));
      }
      detail::RawRow row;
      row.row_number = i;
      if (id_col >= 0) row.id = cells[static_cast<std::size_t>(id_col)];
      row.text = cells[static_cast<std::size_t>(text_col)];
      row.label = cells[static_cast<std::size_t>(label_col)];
      rows.push_back(std::move(row));
    }
  } else {
    std::istringstream lines(content);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(lines, line)) {
      ++line_number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (detail::trim_whitespace(line).empty()) continue;
      nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
      if (obj.is_discarded() || !obj.is_object()) {
        throw LoadError(path.string() + ": invalid JSON object at line " +
                        std::to_string(line_number));
      }
      detail::RawRow row;
      row.row_number = line_number;
      const std::string id_key = schema.id.empty() ? "id" : schema.id;
      if (obj.contains(id_key)) {
        const auto& id = obj.at(id_key);
        row.id = id.is_string() ? id.get<std::string>() : id.dump();
      }
      auto string_key = [&](const std::string& key) {
        if (!obj.contains(key) || !obj.at(key).is_string()) {
          throw LoadError(path.string() + ": missing string key '" + key + "' at line " +
                          std::to_string(line_number));
        }
        return obj.at(key).get<std::string>();
      };
      row.text = string_key(schema.text);
      row.label = string_key(schema.label);
      rows.push_back(std::move(row));
    }
  }

  return detail::assemble_dataset(std::move(rows), options, path);
}

}  // namespace advtext
