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
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "advtext/modelio.hpp"
#include "advtext/tokenize.hpp"

// Deterministic table-driven clients. Every attack recipe is traceable by
// hand against these, which is what the offline test suites rely on.

namespace advtext {

/// Keyword-table classifier: an ordered list of (substring, label, score)
/// rules; the first rule whose substring occurs in the text wins; a
/// configurable default applies when none match.
class MockClassifier final : public ClassifierClient {
 public:
  struct Rule {
    std::string contains;
    Label label;
    double score = 0.0;
  };

  MockClassifier(std::vector<Label> label_set, std::vector<Rule> rules, Prediction fallback)
      : labels_(std::move(label_set)), rules_(std::move(rules)), fallback_(std::move(fallback)) {
    for (const Rule& rule : rules_) {
      Prediction check(rule.label, rule.score);  // validates the score range
      (void)check;
    }
  }

  const std::vector<Label>& label_set() const override { return labels_; }

  RawPrediction classify_raw(const std::string& text) const override {
    for (const Rule& rule : rules_) {
      if (text.find(rule.contains) != std::string::npos) {
        return {rule.label.value, rule.score};
      }
    }
    return {fallback_.label.value, fallback_.score};
  }

  // Table schema:
  // {"labels": ["neg","neu","pos"],
  //  "rules": [{"contains": "good", "label": "pos", "score": 0.7}, ...],
  //  "default": {"label": "neu", "score": 0.5}}
  static MockClassifier from_json(const nlohmann::json& spec) {
    std::vector<Label> labels;
    for (const auto& l : spec.at("labels")) labels.push_back(Label{l.get<std::string>()});
    std::vector<Rule> rules;
    if (spec.contains("rules")) {
      for (const auto& r : spec.at("rules")) {
        rules.push_back(Rule{r.at("contains").get<std::string>(),
                             Label{r.at("label").get<std::string>()},
                             r.at("score").get<double>()});
      }
    }
    const auto& d = spec.at("default");
    Prediction fallback(Label{d.at("label").get<std::string>()}, d.at("score").get<double>());
    return MockClassifier(std::move(labels), std::move(rules), std::move(fallback));
  }

 private:
  std::vector<Label> labels_;
  std::vector<Rule> rules_;
  Prediction fallback_;
};

/// Fill-mask mock driven by a context table. Rules key on the word to the
/// left and/or right of the mask (empty string = wildcard); the first
/// matching rule supplies the fill words. A flat fallback list applies
/// when no rule matches. Output is the full sentence with the mask token
/// substituted, ranked by descending fill score.
class MockFillMask final : public FillMaskClient {
 public:
  struct Fill {
    std::string token;
    double score = 0.0;
  };
  struct Rule {
    std::string left;   // "" matches anything, including sentence start
    std::string right;  // "" matches anything, including sentence end
    std::vector<Fill> fills;
  };

  MockFillMask(std::string mask_token, std::vector<Rule> rules, std::vector<Fill> fallback = {})
      : mask_token_(std::move(mask_token)),
        rules_(std::move(rules)),
        fallback_(std::move(fallback)) {}

  const std::string& mask_token() const override { return mask_token_; }

  std::vector<FillResult> unmask_raw(const std::string& masked_text,
                                     std::size_t top_k) const override {
    // Masked inputs are single-space joins (replace_with_mask), so a plain
    // space split keeps multi-character mask sentinels like "[MASK]" whole.
    const TokenList tokens = split_spaces(masked_text);
    std::size_t mask_index = tokens.size();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i] == mask_token_) {
        mask_index = i;
        break;
      }
    }
    if (mask_index == tokens.size()) {
      throw ContractViolation("mock fill-mask: no mask token in input");
    }
    const std::string left = mask_index > 0 ? tokens[mask_index - 1] : std::string();
    const std::string right = mask_index + 1 < tokens.size() ? tokens[mask_index + 1] : std::string();

    const std::vector<Fill>* fills = &fallback_;
    for (const Rule& rule : rules_) {
      const bool left_ok = rule.left.empty() || rule.left == left;
      const bool right_ok = rule.right.empty() || rule.right == right;
      if (left_ok && right_ok) {
        fills = &rule.fills;
        break;
      }
    }

    std::vector<FillResult> out;
    out.reserve(fills->size());
    for (const Fill& fill : *fills) {
      TokenList filled = tokens;
      filled[mask_index] = fill.token;
      out.push_back(FillResult{join_tokens(filled), fill.score});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const FillResult& a, const FillResult& b) { return a.score > b.score; });
    if (out.size() > top_k) out.resize(top_k);
    return out;
  }

  // {"mask_token": "<mask>",
  //  "rules": [{"left": "a", "right": "day", "fills": [{"token": "bad", "score": 0.9}]}],
  //  "fallback": [{"token": "thing", "score": 0.1}]}
  static MockFillMask from_json(const nlohmann::json& spec) {
    auto parse_fills = [](const nlohmann::json& arr) {
      std::vector<Fill> fills;
      for (const auto& f : arr) {
        fills.push_back(Fill{f.at("token").get<std::string>(), f.at("score").get<double>()});
      }
      return fills;
    };
    std::vector<Rule> rules;
    if (spec.contains("rules")) {
      for (const auto& r : spec.at("rules")) {
        rules.push_back(Rule{r.value("left", ""), r.value("right", ""),
                             parse_fills(r.at("fills"))});
      }
    }
    std::vector<Fill> fallback;
    if (spec.contains("fallback")) fallback = parse_fills(spec.at("fallback"));
    return MockFillMask(spec.value("mask_token", "<mask>"), std::move(rules), std::move(fallback));
  }

 private:
  static TokenList split_spaces(const std::string& text) {
    TokenList tokens;
    std::string current;
    for (char c : text) {
      if (c == ' ') {
        if (!current.empty()) tokens.push_back(std::move(current)), current.clear();
      } else {
        current += c;
      }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
  }

  std::string mask_token_;
  std::vector<Rule> rules_;
  std::vector<Fill> fallback_;
};

/// Exact-text substitution table; identity for texts without an entry.
class MockParaphraser final : public ParaphraserClient {
 public:
  explicit MockParaphraser(std::unordered_map<std::string, std::string> table = {})
      : table_(std::move(table)) {}

  std::string paraphrase(const std::string& text) const override {
    auto it = table_.find(text);
    return it != table_.end() ? it->second : text;
  }

  // {"map": {"original sentence": "paraphrased sentence", ...}}
  static MockParaphraser from_json(const nlohmann::json& spec) {
    std::unordered_map<std::string, std::string> table;
    if (spec.contains("map")) {
      for (const auto& [key, value] : spec.at("map").items()) {
        table.emplace(key, value.get<std::string>());
      }
    }
    return MockParaphraser(std::move(table));
  }

 private:
  std::unordered_map<std::string, std::string> table_;
};

/// Exact-text substitution table with language tags; identity fallback.
class MockTranslator final : public TranslatorClient {
 public:
  MockTranslator(std::string source_lang, std::string target_lang,
                 std::unordered_map<std::string, std::string> table = {})
      : source_lang_(std::move(source_lang)),
        target_lang_(std::move(target_lang)),
        table_(std::move(table)) {}

  const std::string& source_lang() const override { return source_lang_; }
  const std::string& target_lang() const override { return target_lang_; }

  std::string translate(const std::string& text) const override {
    auto it = table_.find(text);
    return it != table_.end() ? it->second : text;
  }

  // {"source_lang": "bn", "target_lang": "en", "map": {...}}
  static MockTranslator from_json(const nlohmann::json& spec) {
    std::unordered_map<std::string, std::string> table;
    if (spec.contains("map")) {
      for (const auto& [key, value] : spec.at("map").items()) {
        table.emplace(key, value.get<std::string>());
      }
    }
    return MockTranslator(spec.at("source_lang").get<std::string>(),
                          spec.at("target_lang").get<std::string>(), std::move(table));
  }

 private:
  std::string source_lang_;
  std::string target_lang_;
  std::unordered_map<std::string, std::string> table_;
};

}  // namespace advtext
