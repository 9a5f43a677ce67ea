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

#include <string>
#include <vector>

#include "isbs/channel.hpp"
#include "isbs/harness.hpp"

namespace isbs {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

// Individual checks, usable on any input (including deliberately corrupted ones).
CheckResult check_reciprocity(const ChannelSet& cs);
CheckResult check_path_sum(const ChannelSet& cs, const PatternSet& patterns, double rel_tol = 1e-12);
/// Refinement on tiny instances against exhaustive search: never above the
/// optimum and no single-element move improves it.
CheckResult check_tiny_refinement(std::uint64_t seed, std::size_t instances = 20);
CheckResult check_far_field(double wavelength);
CheckResult check_monotone(const std::string& name, const std::vector<std::vector<double>>& traces);
CheckResult check_determinism(const ExperimentConfig& config);

/// Runs the oracle and invariant checks at small scale using `config`'s
/// physical parameters. Failures are report entries, never exceptions.
ValidationReport validate_suite(const ExperimentConfig& config);

}  // namespace isbs
