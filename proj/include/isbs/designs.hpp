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
#include <random>
#include <string_view>
#include <vector>

#include "isbs/channel.hpp"
#include "isbs/geometry.hpp"
#include "isbs/metrics.hpp"

namespace isbs {

enum class CodebookKind { DFT, Random, Robust };

std::string_view to_string(CodebookKind kind);
CodebookKind codebook_kind_from_string(std::string_view name);

struct Codebook {
  CodebookKind kind = CodebookKind::DFT;
  std::vector<PatternSet> codewords;
  std::uint64_t geometry_hash = 0;

  /// Codewords charged as training.
  std::size_t overhead_size() const { return codewords.size(); }
};

struct RefinementOptions {
  std::size_t phase_grid_levels = 64;
  std::size_t max_sweeps = 20;
  /// bits/s/Hz gained over one full sweep below which refinement stops.
  double tolerance = 1e-4;

  void validate() const;
};

struct RefinementResult {
  PatternSet patterns;
  /// Objective before the first update, then after every element visit.
  std::vector<double> trace;
  std::size_t sweeps = 0;
  std::size_t evaluations = 0;
};

/// Element-by-element coordinate ascent of the sum rate over a uniform phase
/// grid. Each element keeps its current value unless a grid phase is strictly
/// better, so the trace never decreases and the result never falls below `init`.
RefinementResult successive_refinement(const ChannelSet& cs, const PatternSet& init,
                                       const LinkBudget& budget, const RefinementOptions& opts);

/// 2-D DFT beams per surface. Single-surface geometries: one codeword per
/// spatial frequency pair. Surrounding: per-wall DFT index crossed with a
/// DFT phase offset across walls.
Codebook dft_codebook(const Geometry& geometry, const ChannelParams& params);

/// i.i.d. uniform phases.
Codebook random_codebook(const Geometry& geometry, const ChannelParams& params, std::size_t size,
                         std::mt19937_64& rng);

struct IrpaOptions {
  std::size_t budget = 5000;
  std::size_t draws_per_visit = 250;

  void validate() const;
};

struct IrpaResult {
  PatternSet patterns;
  double rate = 0.0;
  std::size_t evals_used = 0;
  /// Incumbent rate after each visit.
  std::vector<double> trace;
};

/// Iterative random phase search: visits the surfaces round-robin and redraws
/// only the visited surface's phases, keeping the best measured pattern.
IrpaResult irpa_search(const ChannelSet& cs, const Geometry& geometry, const ChannelParams& params,
                       const LinkBudget& budget, const IrpaOptions& opts, std::mt19937_64& rng);
IrpaResult irpa_search_serial(const ChannelSet& cs, const Geometry& geometry, const ChannelParams& params,
                              const LinkBudget& budget, const IrpaOptions& opts, std::mt19937_64& rng);

struct RobustOptions {
  std::vector<std::size_t> sector_counts = {1, 2, 4, 8};
  std::size_t samples_per_sector = 100;
  std::size_t max_sweeps = 30;
  /// Relative objective gain over a sweep below which a codeword is final.
  double tolerance = 1e-6;
  std::uint64_t seed = 2024;

  void validate() const;
};

struct RobustCodeword {
  std::size_t partition = 0;
  std::size_t sector = 0;
  SectorSpec spec;
  /// Mean channel power over the sector samples, after each element visit.
  std::vector<double> trace;
};

struct RobustCodebook {
  Codebook codebook;
  std::vector<RobustCodeword> details;
};

/// Sector codebook: one codeword per sector of each partition, maximizing the
/// mean single-user channel power over line-of-sight samples in the sector.
RobustCodebook robust_codebook(const Geometry& geometry, const GeometryParams& geometry_params,
                               const ChannelParams& params, const RobustOptions& opts);
RobustCodebook robust_codebook_serial(const Geometry& geometry, const GeometryParams& geometry_params,
                                      const ChannelParams& params, const RobustOptions& opts);

/// Locations in a sector, stratified in azimuth and uniform in area over radius.
std::vector<Vec3> sample_sector(const SectorSpec& sector, std::size_t count, std::mt19937_64& rng);

struct CodebookEvaluation {
  std::size_t best_index = 0;
  PatternSet best_pattern;
  double best_rate = 0.0;
  std::vector<double> rates;
};

/// Exhaustive scan; ties go to the lowest index. Parallel over codewords.
CodebookEvaluation evaluate_codebook(const ChannelSet& cs, const Codebook& cb, const LinkBudget& budget);
/// Single-threaded reference for evaluate_codebook.
CodebookEvaluation evaluate_codebook_serial(const ChannelSet& cs, const Codebook& cb,
                                            const LinkBudget& budget);

}  // namespace isbs
