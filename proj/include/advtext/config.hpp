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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "advtext/attacks.hpp"
#include "advtext/dataset.hpp"
#include "advtext/http_clients.hpp"

namespace advtext {

enum class Recipe { Paraphrase, Backtranslate, Onehot };

inline const char* to_string(Recipe r) {
  switch (r) {
    case Recipe::Paraphrase: return "paraphrase";
    case Recipe::Backtranslate: return "backtranslate";
    case Recipe::Onehot: return "onehot";
  }
  return "?";
}

inline std::optional<Recipe> recipe_from_string(const std::string& s) {
  if (s == "paraphrase") return Recipe::Paraphrase;
  if (s == "backtranslate") return Recipe::Backtranslate;
  if (s == "onehot") return Recipe::Onehot;
  return std::nullopt;
}

/// One model role: either a mock-table file or a remote endpoint.
struct ClientSpec {
  std::optional<std::filesystem::path> mock_path;
  std::optional<RemoteEndpoint> endpoint;
  // Endpoint-only extras (mock tables carry these inside the table file).
  std::vector<Label> labels;            // classifier
  std::string mask_token = "<mask>";    // fill-mask
  std::string source_lang;              // translator
  std::string target_lang;              // translator
};

struct CampaignOutput {
  std::optional<std::filesystem::path> results_csv;
  std::optional<std::filesystem::path> report_text;
  std::optional<std::filesystem::path> report_json;
  bool print_report = false;
};

/// Everything a campaign run needs, parsed from one declarative JSON file
/// plus command-line overrides.
struct CampaignConfig {
  Recipe recipe = Recipe::Paraphrase;

  std::filesystem::path dataset_path;
  DatasetFormat dataset_format = DatasetFormat::Csv;
  ColumnSchema columns;
  std::vector<Label> labels;  // declared dataset label set; empty = infer
  std::string dataset_name;

  std::optional<ClientSpec> classifier;
  std::optional<ClientSpec> fill_mask;
  std::optional<ClientSpec> paraphraser;
  std::optional<ClientSpec> translator_fwd;
  std::optional<ClientSpec> translator_bwd;

  std::optional<LabelMap> label_map;
  AttackConfig attack;  // workers included
  /// Reject option combinations whose outputs can vary between reruns
  /// (a success budget raced by several workers).
  bool deterministic = true;
  /// Refuse remote endpoints entirely (the --mock flag).
  bool mock_only = false;

  CampaignOutput output;
  std::filesystem::path base_dir;  // directory of the config file
};

struct ConfigValidation {
  std::optional<CampaignConfig> config;
  std::vector<std::string> errors;

  [[nodiscard]] bool ok() const { return errors.empty(); }
};

namespace detail {

class ConfigReader {
 public:
  explicit ConfigReader(std::vector<std::string>& errors) : errors_(errors) {}

  std::string get_string(const nlohmann::json& obj, const std::string& where,
                         const std::string& key, const std::string& fallback,
                         bool required = false) {
    if (!obj.contains(key)) {
      if (required) errors_.push_back(where + "." + key + ": required field missing");
      return fallback;
    }
    if (!obj.at(key).is_string()) {
      errors_.push_back(where + "." + key + ": expected a string");
      return fallback;
    }
    return obj.at(key).get<std::string>();
  }

  std::optional<std::size_t> get_count(const nlohmann::json& obj, const std::string& where,
                                       const std::string& key) {
    if (!obj.contains(key)) return std::nullopt;
    if (!obj.at(key).is_number_unsigned()) {
      errors_.push_back(where + "." + key + ": expected a non-negative integer");
      return std::nullopt;
    }
    return obj.at(key).get<std::size_t>();
  }

  bool get_bool(const nlohmann::json& obj, const std::string& where, const std::string& key,
                bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) {
      errors_.push_back(where + "." + key + ": expected a boolean");
      return fallback;
    }
    return obj.at(key).get<bool>();
  }

  const nlohmann::json* get_object(const nlohmann::json& obj, const std::string& where,
                                   const std::string& key, bool required = false) {
    if (!obj.contains(key)) {
      if (required) errors_.push_back(where + "." + key + ": required object missing");
      return nullptr;
    }
    if (!obj.at(key).is_object()) {
      errors_.push_back(where + "." + key + ": expected an object");
      return nullptr;
    }
    return &obj.at(key);
  }

  std::vector<Label> get_labels(const nlohmann::json& obj, const std::string& where,
                                const std::string& key) {
    std::vector<Label> labels;
    if (!obj.contains(key)) return labels;
    if (!obj.at(key).is_array()) {
      errors_.push_back(where + "." + key + ": expected an array of strings");
      return labels;
    }
    for (const auto& item : obj.at(key)) {
      if (!item.is_string()) {
        errors_.push_back(where + "." + key + ": expected an array of strings");
        labels.clear();
        return labels;
      }
      labels.push_back(Label{item.get<std::string>()});
    }
    return labels;
  }

 private:
  std::vector<std::string>& errors_;
};

inline std::optional<ClientSpec> parse_client_spec(ConfigReader& reader, const nlohmann::json& obj,
                                                   const std::string& where,
                                                   const std::filesystem::path& base_dir,
                                                   std::vector<std::string>& errors) {
  ClientSpec spec;
  const bool has_mock = obj.contains("mock");
  const bool has_endpoint = obj.contains("endpoint");
  if (has_mock == has_endpoint) {
    errors.push_back(where + ": exactly one of 'mock' or 'endpoint' is required");
    return std::nullopt;
  }
  if (has_mock) {
    const std::string path = reader.get_string(obj, where, "mock", "", true);
    if (path.empty()) return std::nullopt;
    std::filesystem::path p = path;
    spec.mock_path = p.is_absolute() ? p : base_dir / p;
  } else {
    const auto* ep = reader.get_object(obj, where, "endpoint", true);
    if (ep == nullptr) return std::nullopt;
    RemoteEndpoint endpoint;
    endpoint.url = reader.get_string(*ep, where + ".endpoint", "url", "", true);
    if (auto t = reader.get_count(*ep, where + ".endpoint", "timeout_s")) {
      endpoint.timeout_s = static_cast<int>(*t);
    }
    if (auto r = reader.get_count(*ep, where + ".endpoint", "retries")) {
      endpoint.retries = static_cast<int>(*r);
    }
    if (auto b = reader.get_count(*ep, where + ".endpoint", "retry_backoff_ms")) {
      endpoint.retry_backoff_ms = static_cast<int>(*b);
    }
    spec.endpoint = std::move(endpoint);
    spec.labels = reader.get_labels(obj, where, "labels");
    spec.mask_token = reader.get_string(obj, where, "mask_token", spec.mask_token);
    spec.source_lang = reader.get_string(obj, where, "source_lang", "");
    spec.target_lang = reader.get_string(obj, where, "target_lang", "");
  }
  return spec;
}

}  // namespace detail

/// Parses the campaign file, collecting every field-level problem instead
/// of stopping at the first. A syntactically broken document yields a
/// single error carrying the parser's location information.
inline ConfigValidation load_campaign_config(const std::filesystem::path& path) {
  ConfigValidation result;
  std::string content;
  try {
    content = detail::read_file(path);
  } catch (const Error& e) {
    result.errors.push_back(e.what());
    return result;
  }

  nlohmann::json root;
  try {
    root = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    result.errors.push_back(path.string() + ": " + e.what());
    return result;
  }
  if (!root.is_object()) {
    result.errors.push_back(path.string() + ": top-level value must be an object");
    return result;
  }

  CampaignConfig config;
  config.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::vector<std::string>& errors = result.errors;
  detail::ConfigReader reader(errors);

  static const std::vector<std::string> known_keys = {
      "recipe", "dataset", "clients", "label_map", "attack", "workers", "deterministic", "output"};
  for (const auto& [key, value] : root.items()) {
    (void)value;
    if (std::find(known_keys.begin(), known_keys.end(), key) == known_keys.end()) {
      errors.push_back("unknown top-level key '" + key + "'");
    }
  }

  const std::string recipe = reader.get_string(root, "config", "recipe", "", true);
  if (!recipe.empty()) {
    if (auto parsed = recipe_from_string(recipe)) {
      config.recipe = *parsed;
    } else {
      errors.push_back("recipe: '" + recipe + "' is not one of paraphrase/backtranslate/onehot");
    }
  }

  if (const auto* dataset = reader.get_object(root, "config", "dataset", true)) {
    const std::string ds_path = reader.get_string(*dataset, "dataset", "path", "", true);
    if (!ds_path.empty()) {
      std::filesystem::path p = ds_path;
      config.dataset_path = p.is_absolute() ? p : config.base_dir / p;
    }
    const std::string format = reader.get_string(*dataset, "dataset", "format", "csv");
    if (format == "csv") {
      config.dataset_format = DatasetFormat::Csv;
    } else if (format == "jsonl") {
      config.dataset_format = DatasetFormat::Jsonl;
    } else {
      errors.push_back("dataset.format: '" + format + "' is not one of csv/jsonl");
    }
    config.dataset_name = reader.get_string(*dataset, "dataset", "name", "");
    config.labels = reader.get_labels(*dataset, "dataset", "labels");
    if (const auto* columns = reader.get_object(*dataset, "dataset", "columns")) {
      config.columns.id = reader.get_string(*columns, "dataset.columns", "id", config.columns.id);
      config.columns.text =
          reader.get_string(*columns, "dataset.columns", "text", config.columns.text);
      config.columns.label =
          reader.get_string(*columns, "dataset.columns", "label", config.columns.label);
    }
  }

  if (const auto* clients = reader.get_object(root, "config", "clients", true)) {
    auto parse_role = [&](const char* role) -> std::optional<ClientSpec> {
      if (!clients->contains(role)) return std::nullopt;
      const auto* obj = reader.get_object(*clients, "clients", role);
      if (obj == nullptr) return std::nullopt;
      return detail::parse_client_spec(reader, *obj, std::string("clients.") + role,
                                       config.base_dir, errors);
    };
    config.classifier = parse_role("classifier");
    config.fill_mask = parse_role("fill_mask");
    config.paraphraser = parse_role("paraphraser");
    config.translator_fwd = parse_role("translator_fwd");
    config.translator_bwd = parse_role("translator_bwd");
  }

  if (root.contains("label_map")) {
    if (!root.at("label_map").is_object()) {
      errors.push_back("label_map: expected an object of raw -> canonical strings");
    } else {
      LabelMap map;
      bool map_ok = true;
      for (const auto& [raw, canonical] : root.at("label_map").items()) {
        if (!canonical.is_string()) {
          errors.push_back("label_map." + raw + ": expected a string");
          map_ok = false;
          continue;
        }
        try {
          map.add(raw, Label{canonical.get<std::string>()});
        } catch (const ContractViolation& e) {
          errors.push_back(std::string("label_map: ") + e.what());
          map_ok = false;
        }
      }
      if (map_ok) config.label_map = std::move(map);
    }
  }

  if (const auto* attack = reader.get_object(root, "config", "attack")) {
    config.attack.max_pass = reader.get_count(*attack, "attack", "max_pass");
    if (auto k = reader.get_count(*attack, "attack", "top_k_unmask")) {
      config.attack.top_k_unmask = *k;
    }
    if (auto m = reader.get_count(*attack, "attack", "max_adversaries_per_point")) {
      config.attack.max_adversaries_per_point = *m;
    }
    config.attack.early_exit = reader.get_bool(*attack, "attack", "early_exit", false);
  }
  if (auto workers = reader.get_count(root, "config", "workers")) {
    config.attack.workers = *workers;
  }
  config.deterministic = reader.get_bool(root, "config", "deterministic", true);

  if (const auto* output = reader.get_object(root, "config", "output")) {
    auto optional_path = [&](const char* key) -> std::optional<std::filesystem::path> {
      const std::string value = reader.get_string(*output, "output", key, "");
      if (value.empty()) return std::nullopt;
      return std::filesystem::path(value);
    };
    config.output.results_csv = optional_path("results_csv");
    config.output.report_text = optional_path("report_text");
    config.output.report_json = optional_path("report_json");
    config.output.print_report = reader.get_bool(*output, "output", "print_report", false);
  }

  if (result.errors.empty()) {
    result.config = std::move(config);
  }
  return result;
}

/// Cross-field checks, run after parsing and after any flag overrides.
/// Returns the complete list of violations.
inline std::vector<std::string> validate_campaign(const CampaignConfig& config) {
  std::vector<std::string> errors;

  if (config.dataset_path.empty()) {
    errors.push_back("dataset.path: required field missing");
  }

  auto check_role = [&](const std::optional<ClientSpec>& spec, const char* role, bool required) {
    if (!spec.has_value()) {
      if (required) {
        errors.push_back(std::string("clients.") + role + ": required for recipe '" +
                         to_string(config.recipe) + "'");
      }
      return;
    }
    if (config.mock_only && spec->endpoint.has_value()) {
      errors.push_back(std::string("clients.") + role +
                       ": remote endpoint configured but mock-only mode requested");
    }
    if (spec->endpoint.has_value()) {
      try {
        detail::parse_http_url(spec->endpoint->url);
      } catch (const ConfigError& e) {
        errors.push_back(std::string("clients.") + role + ": " + e.what());
      }
    }
  };

  check_role(config.classifier, "classifier", true);
  check_role(config.paraphraser, "paraphraser", config.recipe == Recipe::Paraphrase);
  check_role(config.translator_fwd, "translator_fwd", config.recipe == Recipe::Backtranslate);
  check_role(config.translator_bwd, "translator_bwd", config.recipe == Recipe::Backtranslate);
  check_role(config.fill_mask, "fill_mask", config.recipe == Recipe::Onehot);

  if (config.classifier && config.classifier->endpoint && config.classifier->labels.empty()) {
    errors.push_back("clients.classifier.labels: required for an endpoint classifier");
  }
  if (config.recipe == Recipe::Backtranslate && config.translator_fwd && config.translator_bwd) {
    const ClientSpec& fwd = *config.translator_fwd;
    const ClientSpec& bwd = *config.translator_bwd;
    if (fwd.endpoint && bwd.endpoint && fwd.target_lang != bwd.source_lang) {
      errors.push_back("clients.translator_bwd.source_lang: pivot mismatch, forward targets '" +
                       fwd.target_lang + "' but backward reads '" + bwd.source_lang + "'");
    }
  }

  if (config.attack.max_pass && *config.attack.max_pass == 0) {
    errors.push_back("attack.max_pass: must be positive when set");
  }
  if (config.attack.top_k_unmask == 0) {
    errors.push_back("attack.top_k_unmask: must be positive");
  }
  if (config.attack.max_adversaries_per_point == 0) {
    errors.push_back("attack.max_adversaries_per_point: must be positive");
  }
  if (config.attack.workers == 0) {
    errors.push_back("workers: must be positive");
  }
  if (config.deterministic && config.attack.workers > 1 && config.attack.max_pass.has_value()) {
    errors.push_back(
        "workers: a success budget raced by several workers is not reproducible; "
        "set deterministic=false to accept the soft cap or use workers=1");
  }
  return errors;
}

/// Parse + validate in one step: either a usable config or the complete
/// list of violations.
inline ConfigValidation validate_config(const std::filesystem::path& path) {
  ConfigValidation result = load_campaign_config(path);
  if (result.config.has_value()) {
    auto more = validate_campaign(*result.config);
    result.errors.insert(result.errors.end(), more.begin(), more.end());
    if (!result.errors.empty()) result.config.reset();
  }
  return result;
}

}  // namespace advtext
