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

#include "isbs/geometry.hpp"

#include <cstdio>
#include <stdexcept>

#include "isbs/random.hpp"

namespace isbs {

std::string_view to_string(ArchitectureKind kind) {
  switch (kind) {
    case ArchitectureKind::NoIS: return "no_is";
    case ArchitectureKind::Backside: return "backside";
    case ArchitectureKind::Frontside: return "frontside";
    case ArchitectureKind::Surrounding: return "surrounding";
  }
  return "unknown";
}

ArchitectureKind architecture_from_string(std::string_view name) {
  for (auto kind : kAllArchitectures) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown architecture '" + std::string(name) +
                              "' (expected no_is, backside, frontside or surrounding)");
}

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw std::invalid_argument(std::string(field) + ": " + what);
}

// Centered rows x cols grid in the plane spanned by (u, v) around `center`.
std::vector<Frame> grid_frames(const Vec3& center, const Vec3& normal, const Vec3& u,
                               const Vec3& v, GridShape grid, double spacing) {
  std::vector<Frame> frames;
  frames.reserve(grid.count());
  const double r0 = 0.5 * static_cast<double>(grid.rows - 1);
  const double c0 = 0.5 * static_cast<double>(grid.cols - 1);
  for (std::size_t a = 0; a < grid.rows; ++a) {
    for (std::size_t b = 0; b < grid.cols; ++b) {
      const Vec3 p = center + u * ((static_cast<double>(a) - r0) * spacing) +
                     v * ((static_cast<double>(b) - c0) * spacing);
      frames.push_back({p, normal, u, v});
    }
  }
  return frames;
}

GridShape grid_for(const GeometryParams& params, ArchitectureKind kind) {
  auto it = params.surface_grids.find(kind);
  if (it == params.surface_grids.end()) {
    throw std::invalid_argument("surface_grids." + std::string(to_string(kind)) + ": missing");
  }
  return it->second;
}

}  // namespace

void GeometryParams::validate() const {
  require(std::isfinite(carrier_freq) && carrier_freq > 0.0, "geometry.carrier_freq", "must be > 0");
  require(std::isfinite(bs_altitude) && bs_altitude > 0.0, "geometry.bs_altitude", "must be > 0");
  require(bs_rows >= 1 && bs_cols >= 1, "geometry.bs_rows", "antenna grid must be at least 1x1");
  require(std::isfinite(element_spacing) && element_spacing > 0.0, "geometry.element_spacing",
          "must be > 0");
  require(std::isfinite(element_aperture) && element_aperture > 0.0, "geometry.element_aperture",
          "must be > 0");
  require(std::isfinite(separation_backfront) && separation_backfront > 0.0,
          "geometry.separation_backfront", "must be > 0");
  require(separation_backfront < bs_altitude, "geometry.separation_backfront",
          "frontside surface would sit below ground");
  require(radome_width > 0.0 && radome_wall_height > 0.0, "geometry.radome_width",
          "radome dimensions must be > 0");
  require(cell_radius_min >= 0.0 && cell_radius_min < cell_radius_max, "geometry.cell_radius_min",
          "need 0 <= cell_radius_min < cell_radius_max");

  const double s = spacing_m();
  require(static_cast<double>(bs_rows) * s <= radome_width &&
              static_cast<double>(bs_cols) * s <= radome_width,
          "geometry.bs_rows", "antenna array does not fit on the radome top");
  for (const auto& [kind, grid] : surface_grids) {
    const std::string field = "geometry.surface_grids." + std::string(to_string(kind));
    if (kind == ArchitectureKind::NoIS) continue;
    require(grid.rows >= 1 && grid.cols >= 1, field.c_str(), "grid must be at least 1x1");
    if (kind == ArchitectureKind::Surrounding) {
      require(static_cast<double>(grid.rows) * s <= radome_width, field.c_str(),
              "wall grid wider than the radome");
      require(static_cast<double>(grid.cols) * s <= radome_wall_height, field.c_str(),
              "wall grid taller than the radome wall");
    }
  }
}

std::size_t Geometry::num_elements() const {
  std::size_t n = 0;
  for (const auto& p : panels) n += p.frames.size();
  return n;
}

Geometry build_geometry(ArchitectureKind kind, const GeometryParams& params) {
  params.validate();

  Geometry g;
  g.kind = kind;
  g.wavelength = params.wavelength();
  g.bs_mainlobe = kind == ArchitectureKind::Backside ? Vec3{0, 0, 1} : Vec3{0, 0, -1};

  const double s = params.spacing_m();
  const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};
  const Vec3 array_center{0.0, 0.0, params.bs_altitude};
  // Tangents chosen so that u x v = normal.
  const Vec3 bs_v = kind == ArchitectureKind::Backside ? ey : -ey;
  g.bs_frames = grid_frames(array_center, g.bs_mainlobe, ex, bs_v, {params.bs_rows, params.bs_cols}, s);

  switch (kind) {
    case ArchitectureKind::NoIS: {
      auto it = params.surface_grids.find(ArchitectureKind::NoIS);
      if (it != params.surface_grids.end() && it->second.count() != 0) {
        throw std::invalid_argument("surface_grids.no_is: the no-IS architecture takes no surface");
      }
      break;
    }
    case ArchitectureKind::Backside: {
      const GridShape grid = grid_for(params, kind);
      const Vec3 center = array_center + ez * params.separation_backfront;
      g.panels.push_back({grid_frames(center, -ez, ex, -ey, grid, s), SurfaceMode::Reflective, grid, "back"});
      break;
    }
    case ArchitectureKind::Frontside: {
      // Normal stored is the ground-facing (incidence side) normal.
      const GridShape grid = grid_for(params, kind);
      const Vec3 center = array_center - ez * params.separation_backfront;
      g.panels.push_back({grid_frames(center, -ez, ex, -ey, grid, s), SurfaceMode::Transmissive, grid, "front"});
      break;
    }
    case ArchitectureKind::Surrounding: {
      const GridShape grid = grid_for(params, kind);
      const double half = 0.5 * params.radome_width;
      const double zc = params.bs_altitude - 0.5 * params.radome_wall_height;
      // Walls hang below the array plane; normals point into the radome.
      // rows run horizontally along the wall, cols run vertically.
      struct Wall {
        const char* name;
        Vec3 center, normal, u;
      };
      const Wall walls[] = {
          {"left", {-half, 0, zc}, ex, ey},
          {"right", {half, 0, zc}, -ex, -ey},
          {"front", {0, half, zc}, -ey, ex},
          {"back", {0, -half, zc}, ey, -ex},
      };
      for (const auto& w : walls) {
        const Vec3 v = cross(w.normal, w.u);
        g.panels.push_back({grid_frames(w.center, w.normal, w.u, v, grid, s), SurfaceMode::Reflective, grid, w.name});
      }
      break;
    }
  }
  return g;
}

std::vector<Vec3> sample_user_drop(const GeometryParams& params, std::size_t num_users,
                                   std::mt19937_64& rng) {
  if (num_users < 1) throw std::invalid_argument("num_users: must be >= 1");
  if (!(params.cell_radius_min < params.cell_radius_max)) {
    throw std::invalid_argument("geometry.cell_radius_min: must be < cell_radius_max");
  }
  const double r2lo = params.cell_radius_min * params.cell_radius_min;
  const double r2hi = params.cell_radius_max * params.cell_radius_max;
  std::vector<Vec3> users;
  users.reserve(num_users);
  for (std::size_t k = 0; k < num_users; ++k) {
    const double r = std::sqrt(r2lo + (r2hi - r2lo) * uniform01(rng));
    const double phi = uniform_phase(rng);
    users.push_back({r * std::cos(phi), r * std::sin(phi), 0.0});
  }
  return users;
}

bool SectorSpec::contains(double azimuth, double radius) const {
  return azimuth >= azimuth_lo && azimuth < azimuth_hi && radius >= radius_lo && radius <= radius_hi;
}

std::vector<SectorSpec> sector_partition(std::size_t num_sectors, const GeometryParams& params) {
  if (num_sectors < 1) throw std::invalid_argument("num_sectors: must be >= 1");
  std::vector<SectorSpec> sectors;
  sectors.reserve(num_sectors);
  const double width = 2.0 * kPi / static_cast<double>(num_sectors);
  for (std::size_t i = 0; i < num_sectors; ++i) {
    const double hi = i + 1 == num_sectors ? 2.0 * kPi : width * static_cast<double>(i + 1);
    sectors.push_back({width * static_cast<double>(i), hi, params.cell_radius_min, params.cell_radius_max});
  }
  return sectors;
}

std::uint64_t geometry_hash(const Geometry& geometry) {
  // FNV-1a over a canonical text rendering.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  char buf[64];
  auto feed_num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g;", v);
    feed(buf);
  };
  auto feed_frame = [&](const Frame& f) {
    for (const Vec3& v : {f.position, f.normal, f.tangent_u, f.tangent_v}) {
      feed_num(v.x);
      feed_num(v.y);
      feed_num(v.z);
    }
  };
  feed(std::string(to_string(geometry.kind)));
  feed_num(geometry.wavelength);
  for (const auto& f : geometry.bs_frames) feed_frame(f);
  for (const auto& p : geometry.panels) {
    feed(p.mode == SurfaceMode::Reflective ? "R" : "T");
    for (const auto& f : p.frames) feed_frame(f);
  }
  return h;
}

}  // namespace isbs
