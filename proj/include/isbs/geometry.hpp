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

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace isbs {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr bool operator==(const Vec3&) const = default;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  Vec3 normalized() const { return *this * (1.0 / norm()); }
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

/// Position and local orientation of one antenna or surface element.
struct Frame {
  Vec3 position;
  Vec3 normal;
  Vec3 tangent_u;
  Vec3 tangent_v;
};

enum class ArchitectureKind { NoIS, Backside, Frontside, Surrounding };

inline constexpr std::array<ArchitectureKind, 4> kAllArchitectures = {
    ArchitectureKind::NoIS, ArchitectureKind::Backside, ArchitectureKind::Frontside,
    ArchitectureKind::Surrounding};

std::string_view to_string(ArchitectureKind kind);
ArchitectureKind architecture_from_string(std::string_view name);

enum class SurfaceMode { Reflective, Transmissive };

/// Element grid of one surface: `rows` along the first in-plane axis,
/// `cols` along the second.
struct GridShape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t count() const { return rows * cols; }
  bool operator==(const GridShape&) const = default;
};

struct GeometryParams {
  double carrier_freq = 6e9;
  double bs_altitude = 5.0;
  std::size_t bs_rows = 2;
  std::size_t bs_cols = 2;
  /// In wavelengths.
  double element_spacing = 0.5;
  /// m^2; defaults to (lambda/2)^2 at the default carrier.
  double element_aperture = 0.25 * (kSpeedOfLight / 6e9) * (kSpeedOfLight / 6e9);
  double separation_backfront = 0.25;
  double radome_width = 0.30;
  double radome_wall_height = 0.075;
  /// Grid per architecture. For Surrounding the shape applies to each of the four walls.
  std::map<ArchitectureKind, GridShape> surface_grids = {
      {ArchitectureKind::Backside, {8, 5}},
      {ArchitectureKind::Frontside, {8, 5}},
      {ArchitectureKind::Surrounding, {5, 2}},
  };
  double cell_radius_min = 5.0;
  double cell_radius_max = 30.0;

  double wavelength() const { return kSpeedOfLight / carrier_freq; }
  double spacing_m() const { return element_spacing * wavelength(); }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct Panel {
  std::vector<Frame> frames;
  SurfaceMode mode = SurfaceMode::Reflective;
  GridShape grid;
  std::string name;
};

struct Geometry {
  ArchitectureKind kind = ArchitectureKind::NoIS;
  std::vector<Frame> bs_frames;
  std::vector<Panel> panels;
  Vec3 bs_mainlobe{0.0, 0.0, -1.0};
  double wavelength = 0.0;

  std::size_t num_elements() const;
};

Geometry build_geometry(ArchitectureKind kind, const GeometryParams& params);

/// Users uniform in area over the ground annulus [cell_radius_min, cell_radius_max].
std::vector<Vec3> sample_user_drop(const GeometryParams& params, std::size_t num_users,
                                   std::mt19937_64& rng);

struct SectorSpec {
  double azimuth_lo = 0.0;
  double azimuth_hi = 0.0;
  double radius_lo = 0.0;
  double radius_hi = 0.0;

  bool contains(double azimuth, double radius) const;
};

std::vector<SectorSpec> sector_partition(std::size_t num_sectors, const GeometryParams& params);

/// Stable 64-bit fingerprint of a geometry (kind, wavelength, all frames).
std::uint64_t geometry_hash(const Geometry& geometry);

}  // namespace isbs
