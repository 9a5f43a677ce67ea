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

// Brute-force references used by the test suites and `isbs validate`. None of
// these share code paths with the production kernels they check.

#include <cstddef>
#include <vector>

#include "isbs/channel.hpp"

namespace isbs::oracle {

/// Effective channel by enumerating every direct, single-reflection and
/// double-reflection path element by element.
CMatrix path_sum_effective(const ChannelSet& cs, const PatternSet& patterns);

/// Determinant by Laplace expansion along the first row.
cplx laplace_determinant(const CMatrix& a);

/// log2 det(I + snr H H^H) through laplace_determinant.
double naive_sum_rate(const CMatrix& h, double snr);

struct ExhaustiveResult {
  double rate = 0.0;
  /// Grid index per element, panels concatenated.
  std::vector<std::size_t> levels;
};

/// Scores all levels^M grid assignments (path_sum_effective + naive_sum_rate).
/// Element amplitudes are taken per panel from `amplitudes`.
ExhaustiveResult exhaustive_phase_search(const ChannelSet& cs, const std::vector<double>& amplitudes,
                                         std::size_t levels, double snr);

/// Largest rate increase reachable by moving one element to another grid
/// level. Zero at a coordinate-wise optimum.
double single_element_gain(const ChannelSet& cs, const PatternSet& patterns, const std::vector<double>& amplitudes,
                           std::size_t levels, double snr);

/// Builds a ChannelSet with i.i.d. complex normal entries for the given
/// panel sizes; `double_reflection` adds inter-panel matrices.
ChannelSet random_channel_set(std::size_t antennas, std::size_t users, const std::vector<std::size_t>& panel_sizes,
                              bool double_reflection, std::uint64_t seed);

struct FarFieldCheck {
  double separation = 0.0;
  double aperture = 0.0;
  double max_phase_error = 0.0;
};

/// Two parallel facing square panels of `side` x `side` elements at
/// lambda/2 spacing, centroids `separation_factor * D^2 / lambda` apart, where D
/// is the combined diameter of both panels. Returns the largest wrapped
/// difference between the spherical-wave phase of each entry and the
/// plane-wave prediction about the two centroids.
FarFieldCheck far_field_phase_error(std::size_t side, double wavelength, double separation_factor);

}  // namespace isbs::oracle
