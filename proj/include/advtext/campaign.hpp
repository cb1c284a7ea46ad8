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

#include <cstdlib>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "advtext/config.hpp"
#include "advtext/http_clients.hpp"
#include "advtext/mock_clients.hpp"

namespace advtext {

/// Exit codes of run_campaign and the CLI.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitDataset = 2,
  kExitConnectivity = 3,
};

/// Name of the environment variable holding the bearer token sent to
/// remote endpoints.
inline constexpr const char* kAuthTokenEnvVar = "ADVTEXT_API_TOKEN";

namespace detail {

inline RemoteEndpoint with_auth_token(RemoteEndpoint endpoint) {
  if (endpoint.auth_token.empty()) {
    if (const char* token = std::getenv(kAuthTokenEnvVar)) {
      endpoint.auth_token = token;
    }
  }
  return endpoint;
}

inline nlohmann::json load_mock_table(const std::filesystem::path& path, const char* role) {
  nlohmann::json table;
  try {
    table = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string(role) + " mock table " + path.string() + ": " + e.what());
  } catch (const LoadError& e) {
    throw ConfigError(std::string(role) + " mock table: " + e.what());
  }
  return table;
}

/// Constructed model clients plus the startup probes for the remote ones.
struct CampaignClients {
  std::shared_ptr<const ClassifierClient> classifier;
  std::shared_ptr<const FillMaskClient> fill_mask;
  std::shared_ptr<const ParaphraserClient> paraphraser;
  std::shared_ptr<const TranslatorClient> translator_fwd;
  std::shared_ptr<const TranslatorClient> translator_bwd;
  std::vector<std::pair<std::string, std::function<bool()>>> probes;
};

inline CampaignClients build_clients(const CampaignConfig& config) {
  CampaignClients clients;

  if (config.classifier) {
    const ClientSpec& spec = *config.classifier;
    if (spec.mock_path) {
      clients.classifier = std::make_shared<MockClassifier>(
          MockClassifier::from_json(load_mock_table(*spec.mock_path, "classifier")));
    } else {
      auto http = std::make_shared<HttpClassifier>(with_auth_token(*spec.endpoint), spec.labels);
      clients.probes.emplace_back(spec.endpoint->url, [http] { return http->reachable(); });
      clients.classifier = http;
    }
    if (config.label_map) {
      try {
        clients.classifier =
            std::make_shared<LabelMappedClassifier>(clients.classifier, *config.label_map);
      } catch (const MappingError& e) {
        throw ConfigError(std::string("label_map: ") + e.what());
      }
    }
  }

  if (config.fill_mask) {
    const ClientSpec& spec = *config.fill_mask;
    if (spec.mock_path) {
      clients.fill_mask = std::make_shared<MockFillMask>(
          MockFillMask::from_json(load_mock_table(*spec.mock_path, "fill_mask")));
    } else {
      auto http = std::make_shared<HttpFillMask>(with_auth_token(*spec.endpoint), spec.mask_token);
      clients.probes.emplace_back(spec.endpoint->url, [http] { return http->reachable(); });
      clients.fill_mask = http;
    }
  }

  if (config.paraphraser) {
    const ClientSpec& spec = *config.paraphraser;
    if (spec.mock_path) {
      clients.paraphraser = std::make_shared<MockParaphraser>(
          MockParaphraser::from_json(load_mock_table(*spec.mock_path, "paraphraser")));
    } else {
      auto http = std::make_shared<HttpParaphraser>(with_auth_token(*spec.endpoint));
      clients.probes.emplace_back(spec.endpoint->url, [http] { return http->reachable(); });
      clients.paraphraser = http;
    }
  }

  auto build_translator = [&](const ClientSpec& spec,
                              const char* role) -> std::shared_ptr<const TranslatorClient> {
    if (spec.mock_path) {
      return std::make_shared<MockTranslator>(
          MockTranslator::from_json(load_mock_table(*spec.mock_path, role)));
    }
    auto http = std::make_shared<HttpTranslator>(with_auth_token(*spec.endpoint), spec.source_lang,
                                                 spec.target_lang);
    clients.probes.emplace_back(spec.endpoint->url, [http] { return http->reachable(); });
    return http;
  };
  if (config.translator_fwd) {
    clients.translator_fwd = build_translator(*config.translator_fwd, "translator_fwd");
  }
  if (config.translator_bwd) {
    clients.translator_bwd = build_translator(*config.translator_bwd, "translator_bwd");
  }

  if (config.attack.workers > 1) {
    if (clients.classifier) clients.classifier = ensure_concurrent(clients.classifier);
    if (clients.fill_mask) clients.fill_mask = ensure_concurrent(clients.fill_mask);
    if (clients.paraphraser) clients.paraphraser = ensure_concurrent(clients.paraphraser);
    if (clients.translator_fwd) clients.translator_fwd = ensure_concurrent(clients.translator_fwd);
    if (clients.translator_bwd) clients.translator_bwd = ensure_concurrent(clients.translator_bwd);
  }
  return clients;
}

// Report F1 needs every label the records can mention: the declared
// dataset set plus any canonical model label outside it.
inline std::vector<Label> report_label_set(const Dataset& dataset,
                                           const ClassifierClient& classifier) {
  std::vector<Label> labels = dataset.label_set;
  for (const Label& label : classifier.label_set()) {
    if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
      labels.push_back(label);
    }
  }
  return labels;
}

}  // namespace detail

/// Runs one campaign end to end: dataset in, records + reports out.
/// Returns a process exit code instead of throwing; every failure prints a
/// diagnostic to stderr. Per-point Error annotations do not fail the run.
inline int run_campaign(const CampaignConfig& config) {
  try {
    // Fail before any output file is created: config, dataset, clients,
    // connectivity, in that order.
    auto violations = validate_campaign(config);
    if (!violations.empty()) {
      for (const auto& v : violations) std::cerr << "advtext: config error: " << v << "\n";
      return kExitConfig;
    }

    Dataset dataset;
    try {
      LoadOptions options;
      options.label_set = config.labels;
      options.name = config.dataset_name;
      dataset = load_dataset(config.dataset_path, config.dataset_format, config.columns, options);
    } catch (const LoadError& e) {
      std::cerr << "advtext: dataset error: " << e.what() << "\n";
      return kExitDataset;
    }
    if (dataset.points.empty()) {
      std::cerr << "advtext: dataset error: " << config.dataset_path.string()
                << " contains no data points\n";
      return kExitDataset;
    }

    detail::CampaignClients clients = detail::build_clients(config);
    for (const auto& [url, probe] : clients.probes) {
      if (!probe()) {
        std::cerr << "advtext: connectivity error: endpoint " << url
                  << " failed the startup probe\n";
        return kExitConnectivity;
      }
    }

    AttackConfig attack = config.attack;
    attack.csv_path.reset();        // the campaign writes outputs itself
    attack.generate_report = false;

    std::vector<AttackRecord> records;
    switch (config.recipe) {
      case Recipe::Paraphrase:
        records = run_paraphrase_attack(*clients.classifier, *clients.paraphraser, dataset.points,
                                        attack);
        break;
      case Recipe::Backtranslate:
        records = run_backtranslation_attack(*clients.classifier, *clients.translator_fwd,
                                             *clients.translator_bwd, dataset.points, attack);
        break;
      case Recipe::Onehot:
        records = run_onehot_attack(*clients.classifier, *clients.fill_mask, dataset.points, attack);
        break;
    }

    if (config.output.results_csv) {
      save_results(records, *config.output.results_csv);
    }

    const bool want_report = config.output.report_text.has_value() ||
                             config.output.report_json.has_value() || config.output.print_report;
    if (want_report) {
      if (records.empty()) {
        // Possible for a one-hot campaign where no point produced an
        // adversary; there is nothing to aggregate.
        std::cerr << "advtext: no reportable records; report skipped\n";
      } else {
        AttackReport report =
            build_attack_report(records, detail::report_label_set(dataset, *clients.classifier));
        const std::string text = render_report_text(report);
        if (config.output.print_report) {
          std::cout << text;
        }
        if (config.output.report_text) {
          detail::write_file(*config.output.report_text, text);
        }
        if (config.output.report_json) {
          detail::write_file(*config.output.report_json, report_to_json(report).dump(2) + "\n");
        }
      }
    }
    return kExitOk;
  } catch (const ConnectivityError& e) {
    std::cerr << "advtext: connectivity error: " << e.what() << "\n";
    return kExitConnectivity;
  } catch (const LoadError& e) {
    std::cerr << "advtext: dataset error: " << e.what() << "\n";
    return kExitDataset;
  } catch (const WriteError& e) {
    std::cerr << "advtext: i/o error: " << e.what() << "\n";
    return kExitDataset;
  } catch (const Error& e) {
    std::cerr << "advtext: error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace advtext
