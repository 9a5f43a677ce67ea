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

#include "isbs/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace isbs {

using nlohmann::json;

namespace {

json grid_json(GridShape g) { return json::array({g.rows, g.cols}); }

// Walks one JSON object, assigning known keys and rejecting the rest.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(field(key), "expected a number");
      out = v->get<double>();
    }
  }

  template <class Int>
  void count(const std::string& key, Int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(field(key), "expected a non-negative integer");
      out = v->get<Int>();
    }
  }

  template <class Fn>
  void object(const std::string& key, Fn&& fn) {
    if (const json* v = find(key)) {
      ObjectReader sub(*v, field(key));
      fn(sub);
      sub.finish();
    }
  }

  template <class Fn>
  void array(const std::string& key, Fn&& fn) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(field(key), "expected an array");
      for (std::size_t i = 0; i < v->size(); ++i) fn((*v)[i], field(key) + "[" + std::to_string(i) + "]");
    }
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) fail(field(it.key()), "unknown field");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

GridShape read_grid(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_unsigned() || !v[1].is_number_unsigned()) {
    ObjectReader::fail(path, "expected [rows, cols]");
  }
  return {v[0].get<std::size_t>(), v[1].get<std::size_t>()};
}

std::string read_string(const json& v, const std::string& path) {
  if (!v.is_string()) ObjectReader::fail(path, "expected a string");
  return v.get<std::string>();
}

// Re-raises std::invalid_argument from a validate() as a ConfigError.
template <class Fn>
void validated(Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

json config_to_json(const ExperimentConfig& c) {
  json grids = json::object();
  for (const auto& [kind, grid] : c.geometry.surface_grids) grids[std::string(to_string(kind))] = grid_json(grid);

  json archs = json::array();
  for (auto a : c.architectures) archs.push_back(std::string(to_string(a)));
  json designs = json::array();
  for (auto d : c.designs) designs.push_back(std::string(to_string(d)));

  return json{
      {"geometry",
       {{"carrier_freq", c.geometry.carrier_freq},
        {"bs_altitude", c.geometry.bs_altitude},
        {"bs_rows", c.geometry.bs_rows},
        {"bs_cols", c.geometry.bs_cols},
        {"element_spacing", c.geometry.element_spacing},
        {"element_aperture", c.geometry.element_aperture},
        {"separation_backfront", c.geometry.separation_backfront},
        {"radome_width", c.geometry.radome_width},
        {"radome_wall_height", c.geometry.radome_wall_height},
        {"surface_grids", grids},
        {"cell_radius_min", c.geometry.cell_radius_min},
        {"cell_radius_max", c.geometry.cell_radius_max}}},
      {"channel",
       {{"rician_factor", c.channel.rician_factor},
        {"pattern_exponent", c.channel.pattern_exponent},
        {"element_peak_gain", c.channel.element_peak_gain},
        {"reflect_efficiency", c.channel.reflect_efficiency},
        {"transmit_efficiency", c.channel.transmit_efficiency}}},
      {"link", {{"tx_power_per_user", c.link.tx_power_per_user}, {"noise_power", c.link.noise_power}}},
      {"overhead",
       {{"coherence_symbols", c.overhead.coherence_symbols},
        {"pilots_per_codeword", c.overhead.pilots_per_codeword}}},
      {"num_users", c.num_users},
      {"trials", c.trials},
      {"master_seed", c.master_seed},
      {"architectures", archs},
      {"designs", designs},
      {"refinement",
       {{"phase_grid_levels", c.refinement.phase_grid_levels},
        {"max_sweeps", c.refinement.max_sweeps},
        {"tolerance", c.refinement.tolerance}}},
      {"random_codebook_size", c.random_codebook_size},
      {"irpa", {{"draws_per_visit", c.irpa_draws_per_visit}}},
      {"robust",
       {{"sector_counts", c.robust.sector_counts},
        {"samples_per_sector", c.robust.samples_per_sector},
        {"max_sweeps", c.robust.max_sweeps},
        {"tolerance", c.robust.tolerance},
        {"seed", c.robust.seed}}},
  };
}

ExperimentConfig config_from_json(const json& doc) {
  ExperimentConfig c;
  ObjectReader root(doc, "");

  root.object("geometry", [&](ObjectReader& r) {
    auto& g = c.geometry;
    r.number("carrier_freq", g.carrier_freq);
    r.number("bs_altitude", g.bs_altitude);
    r.count("bs_rows", g.bs_rows);
    r.count("bs_cols", g.bs_cols);
    r.number("element_spacing", g.element_spacing);
    r.number("element_aperture", g.element_aperture);
    r.number("separation_backfront", g.separation_backfront);
    r.number("radome_width", g.radome_width);
    r.number("radome_wall_height", g.radome_wall_height);
    r.number("cell_radius_min", g.cell_radius_min);
    r.number("cell_radius_max", g.cell_radius_max);
    if (const json* grids = r.find("surface_grids")) {
      const std::string path = r.field("surface_grids");
      if (!grids->is_object()) ObjectReader::fail(path, "expected an object");
      g.surface_grids.clear();
      for (auto it = grids->begin(); it != grids->end(); ++it) {
        ArchitectureKind kind;
        try {
          kind = architecture_from_string(it.key());
        } catch (const std::invalid_argument& e) {
          ObjectReader::fail(path + "." + it.key(), e.what());
        }
        g.surface_grids[kind] = read_grid(it.value(), path + "." + it.key());
      }
    }
  });
  root.object("channel", [&](ObjectReader& r) {
    r.number("rician_factor", c.channel.rician_factor);
    r.number("pattern_exponent", c.channel.pattern_exponent);
    r.number("element_peak_gain", c.channel.element_peak_gain);
    r.number("reflect_efficiency", c.channel.reflect_efficiency);
    r.number("transmit_efficiency", c.channel.transmit_efficiency);
  });
  root.object("link", [&](ObjectReader& r) {
    r.number("tx_power_per_user", c.link.tx_power_per_user);
    r.number("noise_power", c.link.noise_power);
  });
  root.object("overhead", [&](ObjectReader& r) {
    r.count("coherence_symbols", c.overhead.coherence_symbols);
    r.count("pilots_per_codeword", c.overhead.pilots_per_codeword);
  });
  root.count("num_users", c.num_users);
  root.count("trials", c.trials);
  root.count("master_seed", c.master_seed);
  if (root.find("architectures")) c.architectures.clear();
  root.array("architectures", [&](const json& v, const std::string& path) {
    try {
      c.architectures.push_back(architecture_from_string(read_string(v, path)));
    } catch (const std::invalid_argument& e) {
      ObjectReader::fail(path, e.what());
    }
  });
  if (root.find("designs")) c.designs.clear();
  root.array("designs", [&](const json& v, const std::string& path) {
    try {
      c.designs.push_back(design_from_string(read_string(v, path)));
    } catch (const std::invalid_argument& e) {
      ObjectReader::fail(path, e.what());
    }
  });
  root.object("refinement", [&](ObjectReader& r) {
    r.count("phase_grid_levels", c.refinement.phase_grid_levels);
    r.count("max_sweeps", c.refinement.max_sweeps);
    r.number("tolerance", c.refinement.tolerance);
  });
  root.count("random_codebook_size", c.random_codebook_size);
  root.object("irpa", [&](ObjectReader& r) { r.count("draws_per_visit", c.irpa_draws_per_visit); });
  root.object("robust", [&](ObjectReader& r) {
    if (r.find("sector_counts")) c.robust.sector_counts.clear();
    r.array("sector_counts", [&](const json& v, const std::string& path) {
      if (!v.is_number_unsigned()) ObjectReader::fail(path, "expected a non-negative integer");
      c.robust.sector_counts.push_back(v.get<std::size_t>());
    });
    r.count("samples_per_sector", c.robust.samples_per_sector);
    r.count("max_sweeps", c.robust.max_sweeps);
    r.number("tolerance", c.robust.tolerance);
    r.count("seed", c.robust.seed);
  });
  root.finish();

  validated([&] { c.validate(); });
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  return config_from_json(doc);
}

void save_config(const std::filesystem::path& path, const ExperimentConfig& config) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file " + path.string());
  out << config_to_json(config).dump(2) << "\n";
  if (!out) throw std::runtime_error("failed writing config file " + path.string());
}

}  // namespace isbs
