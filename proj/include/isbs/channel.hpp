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

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "isbs/geometry.hpp"

namespace isbs {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct ChannelParams {
  /// Linear K-factor. +inf gives pure line-of-sight links.
  double rician_factor = 3.1622776601683795;  // 5 dB
  double pattern_exponent = 1.0;
  /// Peak element power gain, 4*pi*A/lambda^2 (= pi for a (lambda/2)^2 aperture).
  double element_peak_gain = kPi;
  double reflect_efficiency = 0.8;
  double transmit_efficiency = 0.5;

  void validate() const;
};

/// Coefficients of one surface. |coeffs[m]| is the mode amplitude, or 0 when
/// the element is off.
struct ISPattern {
  CVector coeffs;
};

/// One pattern per panel, ordered like Geometry::panels.
using PatternSet = std::vector<ISPattern>;

double mode_amplitude(SurfaceMode mode, const ChannelParams& params);

PatternSet make_pattern(const Geometry& geometry, const ChannelParams& params,
                        const std::vector<std::vector<double>>& phases);
PatternSet zero_phase_pattern(const Geometry& geometry, const ChannelParams& params);
PatternSet all_off_pattern(const Geometry& geometry);
std::vector<std::vector<double>> pattern_phases(const PatternSet& patterns);

/// Realized links for one user drop.
///   direct:            N x K
///   user_to_panel[i]:  M_i x K
///   panel_to_bs[i]:    N x M_i
///   inter_panel[i][j]: M_j x M_i, panel i -> panel j (Surrounding only, i != j)
struct ChannelSet {
  CMatrix direct;
  std::vector<CMatrix> user_to_panel;
  std::vector<CMatrix> panel_to_bs;
  std::vector<std::vector<CMatrix>> inter_panel;

  std::size_t num_antennas() const { return static_cast<std::size_t>(direct.rows()); }
  std::size_t num_users() const { return static_cast<std::size_t>(direct.cols()); }
  std::size_t num_panels() const { return panel_to_bs.size(); }
  bool has_inter_panel() const { return !inter_panel.empty(); }
};

/// Half-isotropic BS antenna: sqrt(2) toward the main half-space, 0 behind.
double bs_antenna_gain(const Frame& frame, const Vec3& direction, const Vec3& mainlobe);

/// Cosine-power surface element pattern, sqrt(G0 cos^q theta) in front of `frame.normal`.
double is_element_gain(const Frame& frame, const Vec3& direction, const ChannelParams& params);

enum class ElementSide { Incidence, Departure };

/// Element gain for a surface in `mode`. Transmissive elements see the
/// incidence side through frame.normal and the departure side through -normal.
double surface_gain(const Frame& frame, SurfaceMode mode, ElementSide side, const Vec3& direction,
                    const ChannelParams& params);

/// Amplitude pattern of element `index` seen along the unit `direction`
/// pointing away from it.
using GainFn = std::function<double(std::size_t index, const Vec3& direction)>;

/// A set of radiating points with their gain patterns.
struct Aperture {
  std::span<const Frame> frames;
  GainFn gain;
};

/// Far-field Rician link from a point source to every element of `receiver`:
///   h = sqrt(PL(d)) * (sqrt(K/(K+1)) a + sqrt(1/(K+1)) w) * gain
/// with d the centroid distance, PL = (lambda/(4 pi d))^2 and `a` the plane-wave
/// profile about the centroid (including the common e^{-j 2 pi d / lambda} term).
CVector upw_link(const Vec3& source, const Aperture& receiver, double wavelength,
                 double rician_factor, std::mt19937_64& rng);

/// Near-field element-wise link: entry (n, m) from source element m to
/// destination element n is lambda/(4 pi d) e^{-j 2 pi d / lambda} g_src g_dst
/// with exact pair distance d. Result is |dst| x |src|.
CMatrix usw_link(const Aperture& src, const Aperture& dst, double wavelength);

ChannelSet generate_channel_set(const Geometry& geometry, const std::vector<Vec3>& users,
                                const ChannelParams& params, std::mt19937_64& rng);

/// direct + sum_i B_i Th_i G_i + sum_{i != j} B_j Th_j S_ij Th_i G_i.
CMatrix assemble_effective(const ChannelSet& cs, const PatternSet& patterns);

/// Throws std::invalid_argument when the pattern shapes do not match `cs`.
void check_pattern_shape(const ChannelSet& cs, const PatternSet& patterns);

}  // namespace isbs
