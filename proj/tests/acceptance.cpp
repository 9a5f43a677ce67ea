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

// Acceptance run: every exit criterion at its stated tolerance on the default
// configuration. Prints one line per criterion; exit status is nonzero when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <omp.h>

#include "isbs/designs.hpp"
#include "isbs/harness.hpp"
#include "isbs/io.hpp"
#include "isbs/oracles.hpp"
#include "isbs/random.hpp"

using namespace isbs;

namespace {

struct Verdict {
  std::string id;
  bool passed = true;
  std::string detail;
};

struct Paired {
  double mean = 0.0;
  double se = 0.0;
  bool significant() const { return mean > 2.0 * se; }
};

using Column = std::map<std::size_t, double>;  // trial -> value

Paired paired(const Column& a, const Column& b) {
  std::vector<double> d;
  for (const auto& [t, v] : a) d.push_back(v - b.at(t));
  const auto n = static_cast<double>(d.size());
  double m = 0.0;
  for (double x : d) m += x;
  m /= n;
  double ss = 0.0;
  for (double x : d) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

bool non_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1]) return false;
  }
  return true;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void add_pair(Verdict& v, const std::string& label, const Paired& p) {
  if (!p.significant()) v.passed = false;
  if (!v.detail.empty()) v.detail += "; ";
  v.detail += label + fmt(" %+.3f (2se %.3f)", p.mean, 2.0 * p.se) + (p.significant() ? "" : " FAIL");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  const ExperimentConfig config;  // defaults: 100 trials, 4 users, full design set
  std::vector<Verdict> verdicts;

  // Full default run with traces, at the default thread count.
  auto t0 = std::chrono::steady_clock::now();
  RunOptions opts;
  opts.collect_traces = true;
  const ExperimentResult run = run_experiment(config, opts);
  const double run_seconds = seconds_since(t0);
  std::printf("default run: %zu records in %.1f s (%d threads)\n", run.records.size(), run_seconds,
              omp_get_max_threads());

  std::map<std::pair<ArchitectureKind, DesignKind>, Column> raw, eff;
  for (const auto& r : run.records) {
    raw[{r.architecture, r.design}][r.trial] = r.raw_rate;
    eff[{r.architecture, r.design}][r.trial] = r.effective_rate;
  }
  const auto NoIS = ArchitectureKind::NoIS, Back = ArchitectureKind::Backside,
             Front = ArchitectureKind::Frontside, Sur = ArchitectureKind::Surrounding;
  const ArchitectureKind is_archs[] = {Back, Front, Sur};

  {
    Verdict v{"A1"};
    add_pair(v, "surrounding-backside", paired(raw[{Sur, DesignKind::CSI}], raw[{Back, DesignKind::CSI}]));
    add_pair(v, "surrounding-frontside", paired(raw[{Sur, DesignKind::CSI}], raw[{Front, DesignKind::CSI}]));
    verdicts.push_back(v);
  }
  {
    Verdict v{"A2"};
    for (auto a : is_archs) {
      add_pair(v, std::string(to_string(a)) + "-no_is", paired(raw[{a, DesignKind::CSI}], raw[{NoIS, DesignKind::None}]));
    }
    verdicts.push_back(v);
  }
  {
    Verdict v{"A3"};
    for (auto a : is_archs) {
      const auto& rob = eff[{a, DesignKind::Robust}];
      add_pair(v, std::string(to_string(a)) + " robust-dft", paired(rob, eff[{a, DesignKind::DFT}]));
      add_pair(v, std::string(to_string(a)) + " robust-random_irpa", paired(rob, eff[{a, DesignKind::RandomIrpa}]));
    }
    verdicts.push_back(v);
  }
  {
    Verdict v{"A4"};
    std::size_t violations = 0, checked = 0;
    for (auto a : is_archs) {
      for (const auto& [t, csi] : raw[{a, DesignKind::CSI}]) {
        double best = 0.0;
        for (auto d : {DesignKind::DFT, DesignKind::RandomIrpa, DesignKind::Robust}) best = std::max(best, raw[{a, d}].at(t));
        ++checked;
        if (!(csi >= best)) ++violations;
      }
    }
    v.passed = violations == 0 && checked == 3 * config.trials;
    v.detail = std::to_string(violations) + " violations over " + std::to_string(checked) + " trial/architecture pairs";
    verdicts.push_back(v);
  }
  {
    // 1 user, 1 antenna, one surface of 2 elements, 4-level grid.
    Verdict v{"A5"};
    RefinementOptions ro;
    ro.phase_grid_levels = 4;
    ro.max_sweeps = 50;
    ro.tolerance = 1e-12;
    const LinkBudget unit{1.0, 1.0};
    int mismatches = 0;
    const int instances = 50;
    for (int seed = 1; seed <= instances; ++seed) {
      const ChannelSet cs = oracle::random_channel_set(1, 1, {2}, false, static_cast<std::uint64_t>(seed));
      const auto refined = successive_refinement(cs, {{CVector::Ones(2)}}, unit, ro);
      const auto brute = oracle::exhaustive_phase_search(cs, {1.0}, 4, 1.0);
      const double got = oracle::naive_sum_rate(oracle::path_sum_effective(cs, refined.patterns), 1.0);
      if (std::abs(got - brute.rate) > 1e-12 * std::max(1.0, brute.rate)) ++mismatches;
    }
    v.passed = mismatches == 0;
    v.detail = std::to_string(mismatches) + " of " + std::to_string(instances) +
               " instances differ from the 16-combination exhaustive optimum";
    verdicts.push_back(v);
  }
  {
    Verdict v{"A6"};
    double worst = 0.0;
    auto rng = make_stream(config.master_seed, 0xA6);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const ChannelSet cs = oracle::random_channel_set(2, 1, {2, 2}, true, seed);
      PatternSet p(2);
      for (auto& panel : p) {
        panel.coeffs.resize(2);
        for (int m = 0; m < 2; ++m) panel.coeffs[m] = std::polar(1.0, uniform_phase(rng));
      }
      const CMatrix slow = oracle::path_sum_effective(cs, p);
      worst = std::max(worst, (assemble_effective(cs, p) - slow).norm() / slow.norm());
    }
    const Geometry g = build_geometry(Sur, config.geometry);
    const auto users = sample_user_drop(config.geometry, config.num_users, rng);
    const ChannelSet cs = generate_channel_set(g, users, config.channel, rng);
    std::vector<std::vector<double>> ph;
    for (const auto& panel : g.panels) {
      std::vector<double> x(panel.frames.size());
      for (auto& y : x) y = uniform_phase(rng);
      ph.push_back(x);
    }
    const auto pattern = make_pattern(g, config.channel, ph);
    const CMatrix slow = oracle::path_sum_effective(cs, pattern);
    worst = std::max(worst, (assemble_effective(cs, pattern) - slow).norm() / slow.norm());
    v.passed = worst < 1e-12;
    v.detail = fmt("max relative error %.3e over 51 instances", worst);
    verdicts.push_back(v);
  }
  {
    Verdict v{"A7"};
    const auto ff = oracle::far_field_phase_error(6, config.geometry.wavelength(), 100.0);
    bool reciprocal = true;
    const Geometry g = build_geometry(Sur, config.geometry);
    for (std::uint64_t s = 0; s < 10; ++s) {
      auto rng = make_stream(config.master_seed, 0xA7 + s);
      const auto users = sample_user_drop(config.geometry, config.num_users, rng);
      const ChannelSet cs = generate_channel_set(g, users, config.channel, rng);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          if (i != j && cs.inter_panel[i][j] != cs.inter_panel[j][i].transpose()) reciprocal = false;
    }
    v.passed = ff.max_phase_error < 0.01 && reciprocal;
    v.detail = fmt("max phase error %.3e rad at %.1f m", ff.max_phase_error, ff.separation) +
               (reciprocal ? "; inter-panel reciprocity exact" : "; reciprocity violated");
    verdicts.push_back(v);
  }
  {
    Verdict v{"A8"};
    std::size_t bad = 0;
    for (const auto& t : run.traces) bad += non_decreasing(t.values) ? 0 : 1;
    const std::string reference = results_csv(run.records);
    RunOptions one;
    one.threads = 1;
    t0 = std::chrono::steady_clock::now();
    const std::string single = results_csv(run_experiment(config, one).records);
    const double one_seconds = seconds_since(t0);
    RunOptions four;
    four.threads = 4;
    const std::string quad = results_csv(run_experiment(config, four).records);
    const bool identical = reference == single && reference == quad;
    v.passed = bad == 0 && !run.traces.empty() && identical;
    v.detail = std::to_string(run.traces.size() - bad) + "/" + std::to_string(run.traces.size()) +
               " traces non-decreasing; CSV " + (identical ? "identical" : "differs") +
               " across default, 1 and 4 threads" + fmt(" (1-thread run %.1f s)", one_seconds);
    verdicts.push_back(v);
  }
  {
    Verdict v{"A9"};
    const PreparedExperiment prep = prepare_experiment(config);
    for (auto a : is_archs) {
      const auto& rc = *prep.architectures.at(a).robust;
      std::map<std::size_t, std::size_t> per_partition;
      bool monotone = true;
      for (const auto& d : rc.details) {
        per_partition[config.robust.sector_counts[d.partition]]++;
        monotone = monotone && non_decreasing(d.trace);
      }
      const bool ok = rc.codebook.codewords.size() == 15 &&
                      per_partition == std::map<std::size_t, std::size_t>{{1, 1}, {2, 2}, {4, 4}, {8, 8}} && monotone;
      v.passed = v.passed && ok;
      if (!v.detail.empty()) v.detail += "; ";
      v.detail += std::string(to_string(a)) + " " + std::to_string(rc.codebook.codewords.size()) + " codewords" +
                  (monotone ? ", traces non-decreasing" : ", trace decreases");
    }
    verdicts.push_back(v);
  }

  bool all = true;
  for (const auto& v : verdicts) {
    std::printf("%s %s: %s\n", v.id.c_str(), v.passed ? "PASS" : "FAIL", v.detail.c_str());
    all = all && v.passed;
  }
  std::printf("%s\n", all ? "all criteria pass" : "some criteria fail");
  return all ? 0 : 1;
}
