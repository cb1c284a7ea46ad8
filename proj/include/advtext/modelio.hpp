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
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "advtext/core.hpp"

namespace advtext {

/// Raw classifier output before label canonicalization.
struct RawPrediction {
  std::string label;
  double score = 0.0;
};

/// A filled sentence proposed by a fill-mask model, with its fill score.
struct FillResult {
  std::string text;
  double score = 0.0;

  friend bool operator==(const FillResult&, const FillResult&) = default;
};

// --- client interfaces ---------------------------------------------------
// All four roles are black boxes: text in, text/label out. Implementations
// must be deterministic for a fixed configuration. `concurrent_safe()`
// declares whether the instance may be invoked from several workers at
// once; the framework serializes the ones that say no.

class ClassifierClient {
 public:
  virtual ~ClassifierClient() = default;
  [[nodiscard]] virtual const std::vector<Label>& label_set() const = 0;
  [[nodiscard]] virtual RawPrediction classify_raw(const std::string& text) const = 0;
  [[nodiscard]] virtual bool concurrent_safe() const { return true; }
};

class FillMaskClient {
 public:
  virtual ~FillMaskClient() = default;
  [[nodiscard]] virtual const std::string& mask_token() const = 0;
  [[nodiscard]] virtual std::vector<FillResult> unmask_raw(const std::string& masked_text,
                                                           std::size_t top_k) const = 0;
  [[nodiscard]] virtual bool concurrent_safe() const { return true; }
};

class ParaphraserClient {
 public:
  virtual ~ParaphraserClient() = default;
  [[nodiscard]] virtual std::string paraphrase(const std::string& text) const = 0;
  [[nodiscard]] virtual bool concurrent_safe() const { return true; }
};

class TranslatorClient {
 public:
  virtual ~TranslatorClient() = default;
  [[nodiscard]] virtual const std::string& source_lang() const = 0;
  [[nodiscard]] virtual const std::string& target_lang() const = 0;
  [[nodiscard]] virtual std::string translate(const std::string& text) const = 0;
  [[nodiscard]] virtual bool concurrent_safe() const { return true; }
};

// --- operations -----------------------------------------------------------

/// Top-1 classification, canonicalized through `label_map` when given.
/// Raw labels without a map entry raise MappingError.
inline Prediction classify(const ClassifierClient& client, const std::string& text,
                           const LabelMap* label_map = nullptr) {
  if (text.empty()) {
    throw ContractViolation("classify: empty text");
  }
  RawPrediction raw = client.classify_raw(text);
  if (!(raw.score >= 0.0 && raw.score <= 1.0)) {
    throw MalformedResponse("classifier returned score outside [0, 1]: " +
                            std::to_string(raw.score));
  }
  Label label = label_map != nullptr ? label_map->canonicalize(raw.label)
                                     : Label{std::move(raw.label)};
  return Prediction(std::move(label), raw.score);
}

inline std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  if (needle.empty()) return 0;
  std::size_t count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

/// Queries the fill-mask model. `masked_text` must contain exactly one
/// mask token. Results come back sorted by descending fill score, at most
/// `top_k` of them, none with a residual mask.
inline std::vector<FillResult> unmask(const FillMaskClient& client, const std::string& masked_text,
                                      std::size_t top_k) {
  const std::size_t masks = count_occurrences(masked_text, client.mask_token());
  if (masks != 1) {
    throw ContractViolation("unmask: expected exactly one '" + client.mask_token() +
                            "' in input, found " + std::to_string(masks));
  }
  if (top_k == 0) return {};
  std::vector<FillResult> results = client.unmask_raw(masked_text, top_k);
  for (const auto& r : results) {
    if (r.text.empty()) {
      throw MalformedResponse("fill-mask returned an empty candidate");
    }
    if (r.text.find(client.mask_token()) != std::string::npos) {
      throw MalformedResponse("fill-mask candidate still contains the mask token: " + r.text);
    }
  }
  std::stable_sort(results.begin(), results.end(),
                   [](const FillResult& a, const FillResult& b) { return a.score > b.score; });
  if (results.size() > top_k) results.resize(top_k);
  return results;
}

/// Round-trips text through the pivot language: fwd then bwd. The output
/// may legally equal the input; downstream flags that as a no-op
/// augmentation.
inline std::string back_translate(const TranslatorClient& fwd, const TranslatorClient& bwd,
                                  const std::string& text) {
  if (fwd.target_lang() != bwd.source_lang()) {
    throw ConfigError("back_translate: pivot mismatch, forward targets '" + fwd.target_lang() +
                      "' but backward reads '" + bwd.source_lang() + "'");
  }
  const std::string pivot = fwd.translate(text);
  if (!text.empty() && pivot.empty()) {
    throw MalformedResponse("forward translation returned empty text");
  }
  std::string back = bwd.translate(pivot);
  if (!pivot.empty() && back.empty()) {
    throw MalformedResponse("backward translation returned empty text");
  }
  return back;
}

// --- decorators -----------------------------------------------------------

/// Presents a raw-label classifier as one speaking canonical labels.
/// Construction checks the map is total over the client's declared label
/// set, so canonicalization can never fail later.
class LabelMappedClassifier final : public ClassifierClient {
 public:
  LabelMappedClassifier(std::shared_ptr<const ClassifierClient> inner, LabelMap map)
      : inner_(std::move(inner)), map_(std::move(map)) {
    canonical_labels_.reserve(inner_->label_set().size());
    for (const Label& raw : inner_->label_set()) {
      canonical_labels_.push_back(map_.canonicalize(raw.value));
    }
  }

  const std::vector<Label>& label_set() const override { return canonical_labels_; }

  RawPrediction classify_raw(const std::string& text) const override {
    RawPrediction raw = inner_->classify_raw(text);
    raw.label = map_.canonicalize(raw.label).value;
    return raw;
  }

  bool concurrent_safe() const override { return inner_->concurrent_safe(); }

 private:
  std::shared_ptr<const ClassifierClient> inner_;
  LabelMap map_;
  std::vector<Label> canonical_labels_;
};

// Serializing guards: wrap a client that declared itself non-concurrent so
// a worker pool can still share it.

class SerialClassifier final : public ClassifierClient {
 public:
  explicit SerialClassifier(std::shared_ptr<const ClassifierClient> inner)
      : inner_(std::move(inner)) {}
  const std::vector<Label>& label_set() const override { return inner_->label_set(); }
  RawPrediction classify_raw(const std::string& text) const override {
    std::lock_guard lock(mutex_);
    return inner_->classify_raw(text);
  }
  bool concurrent_safe() const override { return true; }

 private:
  std::shared_ptr<const ClassifierClient> inner_;
  mutable std::mutex mutex_;
};

class SerialFillMask final : public FillMaskClient {
 public:
  explicit SerialFillMask(std::shared_ptr<const FillMaskClient> inner) : inner_(std::move(inner)) {}
  const std::string& mask_token() const override { return inner_->mask_token(); }
  std::vector<FillResult> unmask_raw(const std::string& masked_text,
                                     std::size_t top_k) const override {
    std::lock_guard lock(mutex_);
    return inner_->unmask_raw(masked_text, top_k);
  }
  bool concurrent_safe() const override { return true; }

 private:
  std::shared_ptr<const FillMaskClient> inner_;
  mutable std::mutex mutex_;
};

class SerialParaphraser final : public ParaphraserClient {
 public:
  explicit SerialParaphraser(std::shared_ptr<const ParaphraserClient> inner)
      : inner_(std::move(inner)) {}
  std::string paraphrase(const std::string& text) const override {
    std::lock_guard lock(mutex_);
    return inner_->paraphrase(text);
  }
  bool concurrent_safe() const override { return true; }

 private:
  std::shared_ptr<const ParaphraserClient> inner_;
  mutable std::mutex mutex_;
};

class SerialTranslator final : public TranslatorClient {
 public:
  explicit SerialTranslator(std::shared_ptr<const TranslatorClient> inner)
      : inner_(std::move(inner)) {}
  const std::string& source_lang() const override { return inner_->source_lang(); }
  const std::string& target_lang() const override { return inner_->target_lang(); }
  std::string translate(const std::string& text) const override {
    std::lock_guard lock(mutex_);
    return inner_->translate(text);
  }
  bool concurrent_safe() const override { return true; }

 private:
  std::shared_ptr<const TranslatorClient> inner_;
  mutable std::mutex mutex_;
};

inline std::shared_ptr<const ClassifierClient> ensure_concurrent(
    std::shared_ptr<const ClassifierClient> client) {
  if (client->concurrent_safe()) return client;
  return std::make_shared<SerialClassifier>(std::move(client));
}

inline std::shared_ptr<const FillMaskClient> ensure_concurrent(
    std::shared_ptr<const FillMaskClient> client) {
  if (client->concurrent_safe()) return client;
  return std::make_shared<SerialFillMask>(std::move(client));
}

inline std::shared_ptr<const ParaphraserClient> ensure_concurrent(
    std::shared_ptr<const ParaphraserClient> client) {
  if (client->concurrent_safe()) return client;
  return std::make_shared<SerialParaphraser>(std::move(client));
}

inline std::shared_ptr<const TranslatorClient> ensure_concurrent(
    std::shared_ptr<const TranslatorClient> client) {
  if (client->concurrent_safe()) return client;
  return std::make_shared<SerialTranslator>(std::move(client));
}

}  // namespace advtext
