// Copyright 2026 The SceneMix Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <iostream>
#include <optional>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "scenemix/error.hpp"
#include "scenemix/io.hpp"
#include "scenemix/pipeline/config.hpp"
#include "scenemix/pipeline/runner.hpp"
#include "scenemix/pipeline/stats.hpp"

namespace {

namespace sp = scenemix::pipeline;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("scenemix");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::level::level_enum level = spdlog::level::info;
  if (const char* env = std::getenv("SCENEMIX_LOG")) {
    const std::string value = env;
    level = spdlog::level::from_str(value);
    // from_str maps anything unknown to "off".
    if (level == spdlog::level::off && value != "off") {
      level = spdlog::level::info;
      spdlog::warn("unknown SCENEMIX_LOG level '{}', using info", value);
    }
  }
  spdlog::set_level(level);
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Point-cloud scene mixing and augmentation"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> workers;
  auto* run = app.add_subcommand("run", "Augment, mix and write a dataset");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--seed", seed, "Override master_seed");
  run->add_option("--epochs", epochs, "Override epochs")->check(CLI::PositiveNumber);
  run->add_option("--workers", workers, "Override workers")->check(CLI::PositiveNumber);

  std::size_t preview_count = 0;
  auto* preview = app.add_subcommand("preview", "Write provenance-colored PLY previews");
  preview->add_option("--config", config_path, "Config file")->required();
  preview->add_option("-n", preview_count, "Number of mixed samples (default: output.preview_count)");

  std::string manifest_path;
  auto* stats = app.add_subcommand("stats", "Summarize a manifest as JSON");
  stats->add_option("manifest", manifest_path, "manifest.jsonl")->required();

  auto* validate = app.add_subcommand("validate", "Check a config and print it with defaults filled");
  validate->add_option("--config", config_path, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*stats) {
      const scenemix::io::Bytes bytes = scenemix::io::read_file(manifest_path);
      const auto report = sp::stats(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
      std::cout << report.dump(2) << '\n';
      return 0;
    }

    sp::PipelineConfig config = sp::load_config(config_path);
    if (*validate) {
      std::cout << sp::serialize_config(config);
      return 0;
    }
    if (*preview) {
      const std::size_t n = preview_count > 0 ? preview_count : config.output.preview_count;
      for (const auto& path : sp::preview(config, n)) std::cout << path.string() << '\n';
      return 0;
    }

    if (seed) config.master_seed = *seed;
    if (epochs) config.epochs = *epochs;
    if (workers) config.workers = *workers;
    const sp::RunSummary summary = sp::run(config);
    std::cout << "samples " << summary.samples << "\n"
              << "total_points " << summary.total_points << "\n"
              << "supervised_points " << summary.supervised_points << "\n"
              << "scenes_per_epoch " << summary.scenes_per_epoch << "\n"
              << "skipped " << summary.skipped << "\n"
              << "budget_dropped " << summary.budget_dropped << "\n"
              << "manifest " << summary.manifest.string() << "\n";
    for (const auto& [op, seconds] : summary.op_seconds) std::cout << "time " << op << " " << seconds << "s\n";
    return 0;
  } catch (const scenemix::ConfigError& e) {
    spdlog::error("config: {}", e.what());
  } catch (const scenemix::Error& e) {
    spdlog::error("{}", e.what());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
  }
  return 1;
}
