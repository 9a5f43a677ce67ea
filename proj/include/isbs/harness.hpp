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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isbs/channel.hpp"
#include "isbs/designs.hpp"
#include "isbs/geometry.hpp"
#include "isbs/metrics.hpp"

namespace isbs {

/// Passive-pattern strategy. `None` labels the no-IS baseline row.
enum class DesignKind { None, CSI, DFT, RandomIrpa, Robust };

inline constexpr DesignKind kAllDesigns[] = {DesignKind::CSI, DesignKind::DFT, DesignKind::RandomIrpa,
                                             DesignKind::Robust};

std::string_view to_string(DesignKind kind);
DesignKind design_from_string(std::string_view name);

struct ExperimentConfig {
  GeometryParams geometry;
  ChannelParams channel;
  LinkBudget link;
  OverheadModel overhead;
  std::size_t num_users = 4;
  std::size_t trials = 100;
  std::uint64_t master_seed = 1;
  std::vector<ArchitectureKind> architectures{kAllArchitectures.begin(), kAllArchitectures.end()};
  std::vector<DesignKind> designs{std::begin(kAllDesigns), std::end(kAllDesigns)};
  RefinementOptions refinement;
  /// Random codebook size for single-surface architectures and the IRPA
  /// evaluation budget for the surrounding architecture.
  std::size_t random_codebook_size = 5000;
  std::size_t irpa_draws_per_visit = 250;
  RobustOptions robust;

  void validate() const;
  bool wants(ArchitectureKind kind) const;
  bool wants(DesignKind kind) const;
};

struct TrialRecord {
  ArchitectureKind architecture = ArchitectureKind::NoIS;
  DesignKind design = DesignKind::None;
  std::size_t trial = 0;
  double raw_rate = 0.0;
  double overhead_factor = 1.0;
  double effective_rate = 0.0;
  std::optional<std::size_t> codeword_index;
  std::size_t evals = 0;
};

/// Objective trace produced while designing one pattern inside a trial.
struct TraceRecord {
  ArchitectureKind architecture = ArchitectureKind::NoIS;
  DesignKind design = DesignKind::None;
  std::size_t trial = 0;
  std::vector<double> values;
};

struct SummaryEntry {
  double mean_raw = 0.0, sd_raw = 0.0, se_raw = 0.0;
  double mean_eff = 0.0, sd_eff = 0.0, se_eff = 0.0;
  std::size_t trials = 0;
};

/// Keyed by "<architecture>/<design>".
using Summary = std::map<std::string, SummaryEntry>;

/// Trial-independent state: geometries and offline codebooks.
struct PreparedArchitecture {
  Geometry geometry;
  std::optional<Codebook> dft;
  std::optional<Codebook> random;
  std::optional<RobustCodebook> robust;
};

struct PreparedExperiment {
  ExperimentConfig config;
  std::map<ArchitectureKind, PreparedArchitecture> architectures;
};

PreparedExperiment prepare_experiment(const ExperimentConfig& config);

struct TrialOutput {
  std::vector<TrialRecord> records;
  std::vector<TraceRecord> traces;
};

TrialOutput run_trial_detailed(const PreparedExperiment& prepared, std::size_t trial_index);
std::vector<TrialRecord> run_trial(const PreparedExperiment& prepared, std::size_t trial_index);
/// Convenience overload; prepares the offline codebooks on every call.
std::vector<TrialRecord> run_trial(const ExperimentConfig& config, std::size_t trial_index);

struct RunOptions {
  /// Worker threads; 0 leaves the OpenMP default.
  int threads = 0;
  std::optional<std::filesystem::path> results_csv;
  std::optional<std::filesystem::path> summary_json;
  bool collect_traces = false;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;
  Summary summary;
  std::vector<TraceRecord> traces;
};

/// Runs every trial (parallel across trials), sorts records canonically by
/// (architecture, design, trial) and optionally writes the CSV and summary.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});
/// Trials in index order on the calling thread; reference for run_experiment.
ExperimentResult run_experiment_serial(const ExperimentConfig& config, const RunOptions& options = {});

void sort_records(std::vector<TrialRecord>& records);
Summary summarize(const std::vector<TrialRecord>& records);

std::string summary_key(ArchitectureKind arch, DesignKind design);

}  // namespace isbs
