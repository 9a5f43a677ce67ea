// SPDX-License-Identifier: Apache-2.0
//
// isbs - link-level simulator for base stations with integrated intelligent surfaces
// Copyright (C) 2026 The isbs authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// isbs command-line front end.
//
//   isbs gen-config [-o config.json]
//   isbs run -c config.json -o results.csv [--summary summary.json] [--threads N]
//   isbs codebook build --kind {dft|random|robust} --arch <kind> -o cb.json [-c config.json] [--seed S]
//   isbs channels --arch <kind> --seed S -o dir/ [-c config.json]
//   isbs validate [-c config.json]

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <omp.h>

#include "isbs/config.hpp"
#include "isbs/designs.hpp"
#include "isbs/harness.hpp"
#include "isbs/io.hpp"
#include "isbs/random.hpp"
#include "isbs/validate.hpp"

namespace {

isbs::ExperimentConfig config_or_default(const std::string& path) {
  return path.empty() ? isbs::ExperimentConfig{} : isbs::load_config(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link-level simulator for base stations with integrated intelligent surfaces"};
  app.require_subcommand(1);

  std::string out_path, config_path, summary_path, arch_name, kind_name;
  int threads = 0;
  std::uint64_t seed = 1;
  std::size_t size = 0;

  auto* gen = app.add_subcommand("gen-config", "Write the default experiment configuration");
  gen->add_option("-o,--output", out_path, "Output file (stdout when omitted)");

  auto* run = app.add_subcommand("run", "Run the Monte Carlo experiment");
  run->add_option("-c,--config", config_path, "Experiment configuration (JSON)")->required();
  run->add_option("-o,--output", out_path, "Results CSV")->required();
  run->add_option("--summary", summary_path, "Summary JSON");
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* cb = app.add_subcommand("codebook", "Codebook tools");
  auto* build = cb->add_subcommand("build", "Build a codebook and write it as JSON");
  cb->require_subcommand(1);
  build->add_option("--kind", kind_name, "dft, random or robust")
      ->required()
      ->check(CLI::IsMember({"dft", "random", "robust"}));
  build->add_option("--arch", arch_name, "backside, frontside or surrounding")->required();
  build->add_option("-o,--output", out_path, "Codebook file")->required();
  build->add_option("-c,--config", config_path, "Experiment configuration (defaults when omitted)");
  build->add_option("--seed", seed, "Seed for the random codebook");
  build->add_option("--size", size, "Random codebook size (config value when omitted)");
  build->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* channels = app.add_subcommand("channels", "Dump one channel realization as CSV files");
  channels->add_option("--arch", arch_name, "no_is, backside, frontside or surrounding")->required();
  channels->add_option("--seed", seed, "Seed of the realization")->required();
  channels->add_option("-o,--output", out_path, "Output directory")->required();
  channels->add_option("-c,--config", config_path, "Experiment configuration (defaults when omitted)");

  auto* validate = app.add_subcommand("validate", "Run the oracle and invariant checks");
  validate->add_option("-c,--config", config_path, "Experiment configuration (defaults when omitted)");
  validate->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    if (threads > 0) omp_set_num_threads(threads);

    if (*gen) {
      const isbs::ExperimentConfig defaults;
      if (out_path.empty()) {
        std::cout << isbs::config_to_json(defaults).dump(2) << "\n";
      } else {
        isbs::save_config(out_path, defaults);
        std::cout << "wrote " << out_path << "\n";
      }
      return 0;
    }

    if (*run) {
      const auto config = isbs::load_config(config_path);
      isbs::RunOptions opts;
      opts.threads = threads;
      opts.results_csv = out_path;
      if (!summary_path.empty()) opts.summary_json = summary_path;
      opts.progress = [](std::size_t done, std::size_t total) {
        if (done % 10 == 0 || done == total) std::cout << "trials " << done << "/" << total << std::endl;
      };
      const auto result = isbs::run_experiment(config, opts);
      std::cout << "wrote " << result.records.size() << " records to " << out_path << "\n";
      for (const auto& [key, e] : result.summary) {
        std::printf("  %-26s raw %8.4f  eff %8.4f  (se %.4f)\n", key.c_str(), e.mean_raw, e.mean_eff, e.se_eff);
      }
      return 0;
    }

    if (*build) {
      const auto config = config_or_default(config_path);
      const auto arch = isbs::architecture_from_string(arch_name);
      const auto geometry = isbs::build_geometry(arch, config.geometry);
      isbs::Codebook book;
      if (kind_name == "dft") {
        book = isbs::dft_codebook(geometry, config.channel);
      } else if (kind_name == "random") {
        std::mt19937_64 rng(isbs::mix_seed(seed, 0));
        book = isbs::random_codebook(geometry, config.channel, size ? size : config.random_codebook_size, rng);
      } else {
        book = isbs::robust_codebook(geometry, config.geometry, config.channel, config.robust).codebook;
      }
      isbs::save_codebook(out_path, book);
      std::cout << "wrote " << book.codewords.size() << " codewords to " << out_path << "\n";
      return 0;
    }

    if (*channels) {
      const auto config = config_or_default(config_path);
      const auto arch = isbs::architecture_from_string(arch_name);
      const auto geometry = isbs::build_geometry(arch, config.geometry);
      auto rng = isbs::make_stream(seed, 0);
      const auto users = isbs::sample_user_drop(config.geometry, config.num_users, rng);
      const auto cs = isbs::generate_channel_set(geometry, users, config.channel, rng);
      isbs::write_channel_set(out_path, cs);
      std::cout << "wrote channel set for " << arch_name << " to " << out_path << "\n";
      return 0;
    }

    if (*validate) {
      const auto config = config_or_default(config_path);
      const auto report = isbs::validate_suite(config);
      for (const auto& c : report.checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
      }
      return report.all_passed() ? 0 : 1;
    }
  } catch (const isbs::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
