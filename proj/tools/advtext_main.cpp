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

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "advtext/campaign.hpp"

namespace {

struct RunFlags {
  std::string config_path;
  std::string recipe;
  std::string dataset;
  std::string out_csv;
  std::string report;
  std::optional<std::size_t> max_pass;
  std::optional<std::size_t> workers;
  bool mock = false;
};

int run_command(const RunFlags& flags) {
  advtext::ConfigValidation loaded = advtext::load_campaign_config(flags.config_path);
  if (!loaded.config.has_value()) {
    for (const auto& error : loaded.errors) {
      std::cerr << "advtext: config error: " << error << "\n";
    }
    return advtext::kExitConfig;
  }
  advtext::CampaignConfig config = std::move(*loaded.config);

  if (!flags.recipe.empty()) {
    auto recipe = advtext::recipe_from_string(flags.recipe);
    if (!recipe) {
      std::cerr << "advtext: config error: --recipe '" << flags.recipe
                << "' is not one of paraphrase/backtranslate/onehot\n";
      return advtext::kExitConfig;
    }
    config.recipe = *recipe;
  }
  if (!flags.dataset.empty()) config.dataset_path = flags.dataset;
  if (!flags.out_csv.empty()) config.output.results_csv = flags.out_csv;
  if (!flags.report.empty()) {
    config.output.report_text = flags.report;
    config.output.print_report = true;
  }
  if (flags.max_pass) config.attack.max_pass = *flags.max_pass;
  if (flags.workers) config.attack.workers = *flags.workers;
  if (flags.mock) config.mock_only = true;

  // run_campaign re-validates, so flag overrides cannot bypass the
  // recipe-role closure.
  return advtext::run_campaign(config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"advtext: black-box adversarial robustness evaluation for text classifiers"};
  app.require_subcommand(1);

  RunFlags flags;
  CLI::App* run = app.add_subcommand("run", "Run an attack campaign described by a config file");
  run->add_option("config", flags.config_path, "Campaign config file (JSON)")->required();
  run->add_option("--recipe", flags.recipe, "Override the recipe: paraphrase|backtranslate|onehot");
  run->add_option("--dataset", flags.dataset, "Override the dataset path");
  run->add_option("--out-csv", flags.out_csv, "Override the results CSV path");
  run->add_option("--report", flags.report,
                  "Write the text report to this path and print it to stdout");
  run->add_option("--max-pass", flags.max_pass, "Stop attacking new points after this many passes");
  run->add_option("--workers", flags.workers, "Worker pool size (default 1: exact budget)");
  run->add_flag("--mock", flags.mock, "Refuse remote endpoints; mock tables only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "advtext: usage error: " << e.what() << "\n";
    return advtext::kExitConfig;
  }

  return run_command(flags);
}
