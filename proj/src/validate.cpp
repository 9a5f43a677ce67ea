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

#include "isbs/validate.hpp"

#include <cstdio>
#include <exception>

#include <omp.h>

#include "isbs/cascade.hpp"
#include "isbs/designs.hpp"
#include "isbs/io.hpp"
#include "isbs/oracles.hpp"
#include "isbs/random.hpp"

namespace isbs {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

bool ValidationReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

CheckResult check_reciprocity(const ChannelSet& cs) {
  CheckResult r{"reciprocity", true, "inter-panel links are exact transposes"};
  if (!cs.has_inter_panel()) {
    r.detail = "no inter-panel links";
    return r;
  }
  for (std::size_t i = 0; i < cs.num_panels(); ++i) {
    for (std::size_t j = i + 1; j < cs.num_panels(); ++j) {
      if (cs.inter_panel[i][j] != cs.inter_panel[j][i].transpose()) {
        r.passed = false;
        r.detail = "inter_panel[" + std::to_string(i) + "][" + std::to_string(j) + "] != transpose of [" +
                   std::to_string(j) + "][" + std::to_string(i) + "]";
        return r;
      }
    }
  }
  return r;
}

CheckResult check_path_sum(const ChannelSet& cs, const PatternSet& patterns, double rel_tol) {
  const CMatrix fast = assemble_effective(cs, patterns);
  const CMatrix slow = oracle::path_sum_effective(cs, patterns);
  const double rel = (fast - slow).norm() / slow.norm();
  return {"path_sum_oracle", rel < rel_tol, "relative error " + sci(rel)};
}

CheckResult check_tiny_refinement(std::uint64_t seed, std::size_t instances) {
  // 1 user, 1 antenna, one surface of 2 elements, 4 phase levels.
  const LinkBudget budget{1.0, 1.0};
  RefinementOptions opts;
  opts.phase_grid_levels = 4;
  opts.max_sweeps = 50;
  opts.tolerance = 1e-12;
  std::size_t global = 0;
  for (std::size_t k = 0; k < instances; ++k) {
    const ChannelSet cs = oracle::random_channel_set(1, 1, {2}, false, seed + k);
    const PatternSet init{{CVector::Ones(2)}};
    const auto refined = successive_refinement(cs, init, budget, opts);
    const auto brute = oracle::exhaustive_phase_search(cs, {1.0}, 4, budget.snr());
    const double rate = oracle::naive_sum_rate(oracle::path_sum_effective(cs, refined.patterns), budget.snr());
    const double tol = 1e-12 * std::max(1.0, brute.rate);
    if (rate > brute.rate + tol) {
      return {"refinement_vs_exhaustive", false, "refined rate exceeds the exhaustive optimum on instance " +
                                                      std::to_string(seed + k)};
    }
    if (oracle::single_element_gain(cs, refined.patterns, {1.0}, 4, budget.snr()) > tol) {
      return {"refinement_vs_exhaustive", false,
              "refined pattern is not coordinate-wise optimal on instance " + std::to_string(seed + k)};
    }
    if (rate >= brute.rate - tol) ++global;
  }
  return {"refinement_vs_exhaustive", true,
          "coordinate-wise optimal on " + std::to_string(instances) + " instances, exhaustive optimum reached on " +
              std::to_string(global)};
}

CheckResult check_far_field(double wavelength) {
  const auto ff = oracle::far_field_phase_error(6, wavelength, 100.0);
  return {"far_field_limit", ff.max_phase_error < 0.01,
          "max phase error " + sci(ff.max_phase_error) + " rad at " + sci(ff.separation) + " m"};
}

CheckResult check_monotone(const std::string& name, const std::vector<std::vector<double>>& traces) {
  for (std::size_t t = 0; t < traces.size(); ++t) {
    for (std::size_t s = 1; s < traces[t].size(); ++s) {
      if (traces[t][s] < traces[t][s - 1]) {
        return {name, false, "trace " + std::to_string(t) + " decreases at step " + std::to_string(s)};
      }
    }
  }
  return {name, true, std::to_string(traces.size()) + " traces non-decreasing"};
}

CheckResult check_determinism(const ExperimentConfig& config) {
  const int saved = omp_get_max_threads();
  RunOptions one;
  one.threads = 1;
  const std::string a = results_csv(run_experiment(config, one).records);
  RunOptions many;
  many.threads = 3;
  const std::string b = results_csv(run_experiment(config, many).records);
  const std::string c = results_csv(run_experiment_serial(config).records);
  omp_set_num_threads(saved);
  const bool ok = a == b && a == c;
  return {"determinism", ok, ok ? "results CSV identical across 1 and 3 threads and the serial path"
                                : "results CSV differs across thread counts"};
}

ValidationReport validate_suite(const ExperimentConfig& config) {
  ValidationReport report;
  auto guarded = [&report](const std::string& name, auto&& fn) {
    try {
      report.checks.push_back(fn());
    } catch (const std::exception& e) {
      report.checks.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };

  guarded("refinement_vs_exhaustive", [] { return check_tiny_refinement(1, 20); });

  const Geometry surround = build_geometry(ArchitectureKind::Surrounding, config.geometry);
  auto rng = make_stream(config.master_seed, 0x7A11D);
  const auto users = sample_user_drop(config.geometry, config.num_users, rng);
  const ChannelSet cs = generate_channel_set(surround, users, config.channel, rng);

  guarded("path_sum_oracle", [&] {
    const ChannelSet small = oracle::random_channel_set(2, 1, {2, 2}, true, 5);
    PatternSet p;
    for (int i = 0; i < 2; ++i) {
      CVector c(2);
      for (int m = 0; m < 2; ++m) c[m] = std::polar(1.0, uniform_phase(rng));
      p.push_back({c});
    }
    auto r = check_path_sum(small, p);
    if (!r.passed) return r;
    // Same oracle on the full surrounding geometry.
    std::vector<std::vector<double>> phases;
    for (const auto& panel : surround.panels) {
      std::vector<double> ph(panel.frames.size());
      for (auto& x : ph) x = uniform_phase(rng);
      phases.push_back(ph);
    }
    auto full = check_path_sum(cs, make_pattern(surround, config.channel, phases));
    full.detail = "small " + r.detail + ", surrounding " + full.detail;
    return full;
  });
  guarded("far_field_limit", [&] { return check_far_field(config.geometry.wavelength()); });
  guarded("reciprocity", [&] { return check_reciprocity(cs); });

  guarded("monotone_traces", [&] {
    std::vector<std::vector<double>> traces;
    RefinementOptions ro = config.refinement;
    ro.max_sweeps = std::min<std::size_t>(ro.max_sweeps, 5);
    traces.push_back(successive_refinement(cs, zero_phase_pattern(surround, config.channel), config.link, ro).trace);
    auto irpa_rng = make_stream(config.master_seed, 0x19BA);
    traces.push_back(irpa_search(cs, surround, config.channel, config.link, {400, 50}, irpa_rng).trace);
    RobustOptions rob = config.robust;
    rob.sector_counts = {1, 2};
    rob.samples_per_sector = 12;
    for (const auto& d : robust_codebook(surround, config.geometry, config.channel, rob).details) {
      traces.push_back(d.trace);
    }
    return check_monotone("monotone_traces", traces);
  });

  guarded("determinism", [&] {
    ExperimentConfig small = config;
    small.trials = 3;
    small.random_codebook_size = 100;
    small.irpa_draws_per_visit = 25;
    small.refinement.max_sweeps = 2;
    small.robust.sector_counts = {1, 2};
    small.robust.samples_per_sector = 8;
    small.robust.max_sweeps = 3;
    return check_determinism(small);
  });
  return report;
}

}  // namespace isbs
