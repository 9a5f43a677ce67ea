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

#include "isbs/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "isbs/random.hpp"

namespace isbs {

void ChannelParams::validate() const {
  auto fail = [](const char* field, const char* what) {
    throw std::invalid_argument(std::string("channel.") + field + ": " + what);
  };
  if (std::isnan(rician_factor) || rician_factor < 0.0) fail("rician_factor", "must be >= 0");
  if (!std::isfinite(pattern_exponent) || pattern_exponent < 0.0) fail("pattern_exponent", "must be >= 0");
  if (!std::isfinite(element_peak_gain) || element_peak_gain <= 0.0) fail("element_peak_gain", "must be > 0");
  if (!(reflect_efficiency > 0.0 && reflect_efficiency <= 1.0)) fail("reflect_efficiency", "must be in (0, 1]");
  if (!(transmit_efficiency > 0.0 && transmit_efficiency <= 1.0)) fail("transmit_efficiency", "must be in (0, 1]");
  if (transmit_efficiency > reflect_efficiency) {
    fail("transmit_efficiency", "must not exceed reflect_efficiency");
  }
}

double mode_amplitude(SurfaceMode mode, const ChannelParams& params) {
  return std::sqrt(mode == SurfaceMode::Reflective ? params.reflect_efficiency
                                                   : params.transmit_efficiency);
}

PatternSet make_pattern(const Geometry& geometry, const ChannelParams& params,
                        const std::vector<std::vector<double>>& phases) {
  if (phases.size() != geometry.panels.size()) {
    throw std::invalid_argument("pattern has " + std::to_string(phases.size()) + " panels, geometry has " +
                                std::to_string(geometry.panels.size()));
  }
  PatternSet out(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const auto& panel = geometry.panels[i];
    if (phases[i].size() != panel.frames.size()) {
      throw std::invalid_argument("pattern panel " + std::to_string(i) + " has " +
                                  std::to_string(phases[i].size()) + " phases, expected " +
                                  std::to_string(panel.frames.size()));
    }
    const double amp = mode_amplitude(panel.mode, params);
    out[i].coeffs.resize(static_cast<Eigen::Index>(phases[i].size()));
    for (std::size_t m = 0; m < phases[i].size(); ++m) {
      out[i].coeffs[static_cast<Eigen::Index>(m)] = std::polar(amp, phases[i][m]);
    }
  }
  return out;
}

PatternSet zero_phase_pattern(const Geometry& geometry, const ChannelParams& params) {
  std::vector<std::vector<double>> phases;
  for (const auto& p : geometry.panels) phases.emplace_back(p.frames.size(), 0.0);
  return make_pattern(geometry, params, phases);
}

PatternSet all_off_pattern(const Geometry& geometry) {
  PatternSet out;
  for (const auto& p : geometry.panels) {
    out.push_back({CVector::Zero(static_cast<Eigen::Index>(p.frames.size()))});
  }
  return out;
}

std::vector<std::vector<double>> pattern_phases(const PatternSet& patterns) {
  std::vector<std::vector<double>> out;
  for (const auto& p : patterns) {
    std::vector<double> ph(static_cast<std::size_t>(p.coeffs.size()));
    for (Eigen::Index m = 0; m < p.coeffs.size(); ++m) ph[static_cast<std::size_t>(m)] = std::arg(p.coeffs[m]);
    out.push_back(std::move(ph));
  }
  return out;
}

double bs_antenna_gain(const Frame& /*frame*/, const Vec3& direction, const Vec3& mainlobe) {
  return dot(direction, mainlobe) > 0.0 ? std::sqrt(2.0) : 0.0;
}

double is_element_gain(const Frame& frame, const Vec3& direction, const ChannelParams& params) {
  const double c = dot(direction, frame.normal);
  if (c <= 0.0) return 0.0;
  return std::sqrt(params.element_peak_gain * std::pow(c, params.pattern_exponent));
}

double surface_gain(const Frame& frame, SurfaceMode mode, ElementSide side, const Vec3& direction,
                    const ChannelParams& params) {
  if (mode == SurfaceMode::Transmissive && side == ElementSide::Departure) {
    Frame flipped = frame;
    flipped.normal = -frame.normal;
    return is_element_gain(flipped, direction, params);
  }
  return is_element_gain(frame, direction, params);
}

CVector upw_link(const Vec3& source, const Aperture& receiver, double wavelength,
                 double rician_factor, std::mt19937_64& rng) {
  const auto& frames = receiver.frames;
  Vec3 centroid;
  for (const auto& f : frames) centroid = centroid + f.position;
  centroid = centroid * (1.0 / static_cast<double>(frames.size()));

  const double d = distance(source, centroid);
  if (!(d > 0.0)) throw std::invalid_argument("upw_link: source coincides with the receiver centroid");
  const Vec3 u = (centroid - source) * (1.0 / d);
  const Vec3 toward_source = -u;
  const double path_amp = wavelength / (4.0 * kPi * d);
  const double k = 2.0 * kPi / wavelength;

  const bool pure_los = std::isinf(rician_factor);
  const double w_los = pure_los ? 1.0 : std::sqrt(rician_factor / (rician_factor + 1.0));
  const double w_nlos = pure_los ? 0.0 : std::sqrt(1.0 / (rician_factor + 1.0));

  CVector h(static_cast<Eigen::Index>(frames.size()));
  for (std::size_t m = 0; m < frames.size(); ++m) {
    const double path = d + dot(frames[m].position - centroid, u);
    cplx entry = w_los * std::polar(1.0, -k * path);
    if (!pure_los) entry += w_nlos * complex_normal(rng);
    h[static_cast<Eigen::Index>(m)] = path_amp * receiver.gain(m, toward_source) * entry;
  }
  return h;
}

CMatrix usw_link(const Aperture& src, const Aperture& dst, double wavelength) {
  const double k = 2.0 * kPi / wavelength;
  CMatrix out(static_cast<Eigen::Index>(dst.frames.size()), static_cast<Eigen::Index>(src.frames.size()));
  for (std::size_t n = 0; n < dst.frames.size(); ++n) {
    for (std::size_t m = 0; m < src.frames.size(); ++m) {
      const Vec3 delta = dst.frames[n].position - src.frames[m].position;
      const double d = delta.norm();
      if (!(d > 0.0)) {
        throw std::invalid_argument("usw_link: coincident elements (src " + std::to_string(m) + ", dst " +
                                    std::to_string(n) + ")");
      }
      const Vec3 dir = delta * (1.0 / d);
      // g_src * g_dst is commutative, so swapping the apertures yields the exact transpose.
      const double gains = src.gain(m, dir) * dst.gain(n, -dir);
      out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) =
          std::polar(wavelength / (4.0 * kPi * d) * gains, -k * d);
    }
  }
  return out;
}

namespace {

Aperture bs_aperture(const Geometry& g) {
  const Vec3 mainlobe = g.bs_mainlobe;
  const auto* frames = &g.bs_frames;
  return {g.bs_frames, [frames, mainlobe](std::size_t i, const Vec3& dir) {
            return bs_antenna_gain((*frames)[i], dir, mainlobe);
          }};
}

Aperture panel_aperture(const Panel& panel, ElementSide side, const ChannelParams& params) {
  const Panel* p = &panel;
  return {panel.frames, [p, side, params](std::size_t i, const Vec3& dir) {
            return surface_gain(p->frames[i], p->mode, side, dir, params);
          }};
}

}  // namespace

ChannelSet generate_channel_set(const Geometry& geometry, const std::vector<Vec3>& users,
                                const ChannelParams& params, std::mt19937_64& rng) {
  if (users.empty()) throw std::invalid_argument("generate_channel_set: no users");
  params.validate();

  const auto N = static_cast<Eigen::Index>(geometry.bs_frames.size());
  const auto K = static_cast<Eigen::Index>(users.size());
  const std::size_t P = geometry.panels.size();
  const double lambda = geometry.wavelength;

  ChannelSet cs;
  cs.direct = CMatrix::Zero(N, K);
  for (const auto& panel : geometry.panels) {
    cs.user_to_panel.push_back(CMatrix::Zero(static_cast<Eigen::Index>(panel.frames.size()), K));
  }

  const Aperture bs = bs_aperture(geometry);
  for (Eigen::Index k = 0; k < K; ++k) {
    const Vec3& user = users[static_cast<std::size_t>(k)];
    // The transmissive surface covers the array's field of view.
    if (geometry.kind != ArchitectureKind::Frontside) {
      cs.direct.col(k) = upw_link(user, bs, lambda, params.rician_factor, rng);
    }
    for (std::size_t i = 0; i < P; ++i) {
      const Aperture rx = panel_aperture(geometry.panels[i], ElementSide::Incidence, params);
      cs.user_to_panel[i].col(k) = upw_link(user, rx, lambda, params.rician_factor, rng);
    }
  }

  for (std::size_t i = 0; i < P; ++i) {
    const Aperture tx = panel_aperture(geometry.panels[i], ElementSide::Departure, params);
    cs.panel_to_bs.push_back(usw_link(tx, bs, lambda));
  }

  if (geometry.kind == ArchitectureKind::Surrounding) {
    cs.inter_panel.assign(P, std::vector<CMatrix>(P));
    for (std::size_t i = 0; i < P; ++i) {
      for (std::size_t j = 0; j < P; ++j) {
        if (i == j) continue;
        const Aperture a = panel_aperture(geometry.panels[i], ElementSide::Departure, params);
        const Aperture b = panel_aperture(geometry.panels[j], ElementSide::Incidence, params);
        cs.inter_panel[i][j] = usw_link(a, b, lambda);
      }
    }
  }
  return cs;
}

void check_pattern_shape(const ChannelSet& cs, const PatternSet& patterns) {
  if (patterns.size() != cs.num_panels()) {
    throw std::invalid_argument("pattern has " + std::to_string(patterns.size()) +
                                " panels, channel set has " + std::to_string(cs.num_panels()));
  }
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (patterns[i].coeffs.size() != cs.panel_to_bs[i].cols()) {
      throw std::invalid_argument("pattern panel " + std::to_string(i) + " has " +
                                  std::to_string(patterns[i].coeffs.size()) + " coefficients, expected " +
                                  std::to_string(cs.panel_to_bs[i].cols()));
    }
  }
}

CMatrix assemble_effective(const ChannelSet& cs, const PatternSet& patterns) {
  check_pattern_shape(cs, patterns);
  const std::size_t P = cs.num_panels();
  CMatrix h = cs.direct;

  // Th_i G_i, reused by the double-reflection terms.
  std::vector<CMatrix> scaled(P);
  for (std::size_t i = 0; i < P; ++i) {
    scaled[i] = patterns[i].coeffs.asDiagonal() * cs.user_to_panel[i];
    h.noalias() += cs.panel_to_bs[i] * scaled[i];
  }
  if (cs.has_inter_panel()) {
    for (std::size_t j = 0; j < P; ++j) {
      // Field incident on panel j from every other panel.
      CMatrix incoming = CMatrix::Zero(cs.panel_to_bs[j].cols(), h.cols());
      for (std::size_t i = 0; i < P; ++i) {
        if (i != j) incoming.noalias() += cs.inter_panel[i][j] * scaled[i];
      }
      h.noalias() += cs.panel_to_bs[j] * (patterns[j].coeffs.asDiagonal() * incoming);
    }
  }
  return h;
}

}  // namespace isbs
