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

#include "isbs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <tuple>

#include <omp.h>

#include "isbs/io.hpp"
#include "isbs/random.hpp"

namespace isbs {

namespace {

// Stream indices under a trial seed.
constexpr std::uint64_t kUserStream = 0;
constexpr std::uint64_t kChannelStream = 1;  // + architecture
constexpr std::uint64_t kIrpaStream = 16;    // + architecture
// Stream index under the master seed for the offline random codebooks.
constexpr std::uint64_t kRandomCodebookStream = 0xC0DEB00CULL;

std::uint64_t arch_index(ArchitectureKind k) { return static_cast<std::uint64_t>(k); }

}  // namespace

std::string_view to_string(DesignKind kind) {
  switch (kind) {
    case DesignKind::None: return "none";
    case DesignKind::CSI: return "csi";
    case DesignKind::DFT: return "dft";
    case DesignKind::RandomIrpa: return "random_irpa";
    case DesignKind::Robust: return "robust";
  }
  return "unknown";
}

DesignKind design_from_string(std::string_view name) {
  for (auto d : {DesignKind::None, DesignKind::CSI, DesignKind::DFT, DesignKind::RandomIrpa, DesignKind::Robust}) {
    if (to_string(d) == name) return d;
  }
  throw std::invalid_argument("unknown design '" + std::string(name) +
                              "' (expected csi, dft, random_irpa or robust)");
}

std::string summary_key(ArchitectureKind arch, DesignKind design) {
  return std::string(to_string(arch)) + "/" + std::string(to_string(design));
}

void ExperimentConfig::validate() const {
  geometry.validate();
  channel.validate();
  link.validate();
  overhead.validate();
  refinement.validate();
  robust.validate();
  if (num_users < 1) throw std::invalid_argument("num_users: must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials: must be >= 1");
  if (architectures.empty()) throw std::invalid_argument("architectures: must not be empty");
  for (std::size_t i = 0; i < architectures.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (architectures[i] == architectures[j]) throw std::invalid_argument("architectures: duplicate entry");
    }
  }
  for (std::size_t i = 0; i < designs.size(); ++i) {
    if (designs[i] == DesignKind::None) throw std::invalid_argument("designs: 'none' is not selectable");
    for (std::size_t j = 0; j < i; ++j) {
      if (designs[i] == designs[j]) throw std::invalid_argument("designs: duplicate entry");
    }
  }
  if (random_codebook_size < 1) throw std::invalid_argument("random_codebook_size: must be >= 1");
  IrpaOptions{random_codebook_size, irpa_draws_per_visit}.validate();
  for (auto a : architectures) {
    if (a == ArchitectureKind::NoIS) continue;
    if (!geometry.surface_grids.count(a)) {
      throw std::invalid_argument("geometry.surface_grids." + std::string(to_string(a)) + ": missing");
    }
  }
}

bool ExperimentConfig::wants(ArchitectureKind kind) const {
  return std::find(architectures.begin(), architectures.end(), kind) != architectures.end();
}

bool ExperimentConfig::wants(DesignKind kind) const {
  return std::find(designs.begin(), designs.end(), kind) != designs.end();
}

PreparedExperiment prepare_experiment(const ExperimentConfig& config) {
  config.validate();
  PreparedExperiment prep;
  prep.config = config;
  for (auto kind : kAllArchitectures) {
    if (!config.wants(kind)) continue;
    PreparedArchitecture arch;
    arch.geometry = build_geometry(kind, config.geometry);
    if (kind != ArchitectureKind::NoIS) {
      if (config.wants(DesignKind::DFT)) arch.dft = dft_codebook(arch.geometry, config.channel);
      if (config.wants(DesignKind::RandomIrpa) && kind != ArchitectureKind::Surrounding) {
        auto rng = make_stream(config.master_seed, kRandomCodebookStream + arch_index(kind));
        arch.random = random_codebook(arch.geometry, config.channel, config.random_codebook_size, rng);
      }
      if (config.wants(DesignKind::Robust)) {
        arch.robust = robust_codebook(arch.geometry, config.geometry, config.channel, config.robust);
      }
    }
    prep.architectures.emplace(kind, std::move(arch));
  }
  return prep;
}

TrialOutput run_trial_detailed(const PreparedExperiment& prepared, std::size_t trial_index) {
  const ExperimentConfig& cfg = prepared.config;
  const std::uint64_t trial_seed = mix_seed(cfg.master_seed, trial_index);
  auto user_rng = make_stream(trial_seed, kUserStream);
  const auto users = sample_user_drop(cfg.geometry, cfg.num_users, user_rng);

  TrialOutput out;
  for (const auto& [kind, arch] : prepared.architectures) {
    auto channel_rng = make_stream(trial_seed, kChannelStream + arch_index(kind));
    const ChannelSet cs = generate_channel_set(arch.geometry, users, cfg.channel, channel_rng);

    auto record = [&](DesignKind design, double raw, double factor, std::optional<std::size_t> index,
                      std::size_t evals) {
      out.records.push_back({kind, design, trial_index, raw, factor, raw * factor, index, evals});
    };

    if (kind == ArchitectureKind::NoIS) {
      record(DesignKind::None, sum_rate(cs.direct, cfg.link), 1.0, std::nullopt, 0);
      continue;
    }

    // Best codebook pattern of this trial seeds the CSI refinement.
    std::optional<PatternSet> best_pattern;
    double best_rate = -std::numeric_limits<double>::infinity();
    auto offer = [&](const PatternSet& p, double rate) {
      if (rate > best_rate) {
        best_rate = rate;
        best_pattern = p;
      }
    };
    auto run_codebook = [&](DesignKind design, const Codebook& cb) {
      const auto ev = evaluate_codebook(cs, cb, cfg.link);
      const double factor = overhead_factor(cfg.num_users, cb.overhead_size(), cfg.overhead);
      record(design, ev.best_rate, factor, ev.best_index, cb.overhead_size());
      offer(ev.best_pattern, ev.best_rate);
    };

    if (arch.dft) run_codebook(DesignKind::DFT, *arch.dft);
    if (cfg.wants(DesignKind::RandomIrpa)) {
      if (kind == ArchitectureKind::Surrounding) {
        auto irpa_rng = make_stream(trial_seed, kIrpaStream + arch_index(kind));
        const IrpaOptions opts{cfg.random_codebook_size, cfg.irpa_draws_per_visit};
        const auto res = irpa_search(cs, arch.geometry, cfg.channel, cfg.link, opts, irpa_rng);
        record(DesignKind::RandomIrpa, res.rate, overhead_factor(cfg.num_users, res.evals_used, cfg.overhead),
               std::nullopt, res.evals_used);
        out.traces.push_back({kind, DesignKind::RandomIrpa, trial_index, res.trace});
        offer(res.patterns, res.rate);
      } else {
        run_codebook(DesignKind::RandomIrpa, *arch.random);
      }
    }
    if (arch.robust) run_codebook(DesignKind::Robust, arch.robust->codebook);

    if (cfg.wants(DesignKind::CSI)) {
      const PatternSet init = best_pattern ? *best_pattern : zero_phase_pattern(arch.geometry, cfg.channel);
      auto res = successive_refinement(cs, init, cfg.link, cfg.refinement);
      double raw = sum_rate(assemble_effective(cs, res.patterns), cfg.link);
      // Full reassembly can round below the incremental objective; never
      // report less than the starting codeword.
      if (best_pattern && raw < best_rate) raw = sum_rate(assemble_effective(cs, *best_pattern), cfg.link);
      record(DesignKind::CSI, raw, 1.0, std::nullopt, res.evaluations);
      out.traces.push_back({kind, DesignKind::CSI, trial_index, std::move(res.trace)});
    }
  }
  return out;
}

std::vector<TrialRecord> run_trial(const PreparedExperiment& prepared, std::size_t trial_index) {
  auto out = run_trial_detailed(prepared, trial_index);
  sort_records(out.records);
  return out.records;
}

std::vector<TrialRecord> run_trial(const ExperimentConfig& config, std::size_t trial_index) {
  return run_trial(prepare_experiment(config), trial_index);
}

void sort_records(std::vector<TrialRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return std::tuple(a.architecture, a.design, a.trial) < std::tuple(b.architecture, b.design, b.trial);
  });
}

Summary summarize(const std::vector<TrialRecord>& records) {
  struct Acc {
    std::vector<double> raw, eff;
  };
  std::map<std::string, Acc> groups;
  for (const auto& r : records) {
    auto& g = groups[summary_key(r.architecture, r.design)];
    g.raw.push_back(r.raw_rate);
    g.eff.push_back(r.effective_rate);
  }
  auto stats = [](const std::vector<double>& v, double& mean, double& sd, double& se) {
    const auto n = static_cast<double>(v.size());
    double sum = 0.0;
    for (double x : v) sum += x;
    mean = sum / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    se = sd / std::sqrt(n);
  };
  Summary out;
  for (const auto& [key, g] : groups) {
    SummaryEntry e;
    e.trials = g.raw.size();
    stats(g.raw, e.mean_raw, e.sd_raw, e.se_raw);
    stats(g.eff, e.mean_eff, e.sd_eff, e.se_eff);
    out[key] = e;
  }
  return out;
}

namespace {

ExperimentResult finish(std::vector<TrialOutput>& outputs, const RunOptions& options) {
  ExperimentResult result;
  for (auto& o : outputs) {
    result.records.insert(result.records.end(), o.records.begin(), o.records.end());
    if (options.collect_traces) {
      for (auto& t : o.traces) result.traces.push_back(std::move(t));
    }
  }
  sort_records(result.records);
  result.summary = summarize(result.records);
  if (options.results_csv) write_results_csv(*options.results_csv, result.records);
  if (options.summary_json) write_summary_json(*options.summary_json, result.summary);
  return result;
}

[[noreturn]] void rethrow_trial_failure(std::size_t trial, const std::exception_ptr& err) {
  try {
    std::rethrow_exception(err);
  } catch (const std::exception& e) {
    throw std::runtime_error("trial " + std::to_string(trial) + " failed: " + e.what());
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  if (options.threads > 0) omp_set_num_threads(options.threads);
  const PreparedExperiment prepared = prepare_experiment(config);
  const std::size_t n = config.trials;
  std::vector<TrialOutput> outputs(n);
  std::vector<std::exception_ptr> errors(n);
  std::size_t done = 0;

  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < count; ++t) {
    const auto idx = static_cast<std::size_t>(t);
    try {
      outputs[idx] = run_trial_detailed(prepared, idx);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
    if (options.progress) {
#pragma omp critical(isbs_progress)
      options.progress(++done, n);
    }
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (errors[t]) rethrow_trial_failure(t, errors[t]);
  }
  return finish(outputs, options);
}

ExperimentResult run_experiment_serial(const ExperimentConfig& config, const RunOptions& options) {
  const PreparedExperiment prepared = prepare_experiment(config);
  std::vector<TrialOutput> outputs(config.trials);
  for (std::size_t t = 0; t < config.trials; ++t) {
    try {
      outputs[t] = run_trial_detailed(prepared, t);
    } catch (...) {
      rethrow_trial_failure(t, std::current_exception());
    }
    if (options.progress) options.progress(t + 1, config.trials);
  }
  return finish(outputs, options);
}

}  // namespace isbs
