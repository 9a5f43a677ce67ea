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

#include "isbs/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace isbs {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish_out(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

void write_matrix_csv(const fs::path& file, const CMatrix& m) {
  auto out = open_out(file);
  for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << "re,im";
  out << "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out << (c ? "," : "") << fmt_double(m(r, c).real()) << "," << fmt_double(m(r, c).imag());
    }
    out << "\n";
  }
  finish_out(out, file);
}

CMatrix read_matrix_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::string line;
  std::getline(in, line);
  const auto cols = static_cast<Eigen::Index>((std::count(line.begin(), line.end(), ',') + 1) / 2);
  std::vector<std::vector<cplx>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) values.push_back(std::stod(cell));
    if (static_cast<Eigen::Index>(values.size()) != 2 * cols) {
      throw std::runtime_error(file.string() + ":" + std::to_string(lineno) + ": expected " +
                               std::to_string(2 * cols) + " values");
    }
    std::vector<cplx> row;
    for (std::size_t i = 0; i < values.size(); i += 2) row.emplace_back(values[i], values[i + 1]);
    rows.push_back(std::move(row));
  }
  CMatrix m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
  }
  return m;
}

void write_channel_set(const fs::path& dir, const ChannelSet& cs) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
  write_matrix_csv(dir / "direct.csv", cs.direct);
  for (std::size_t i = 0; i < cs.num_panels(); ++i) {
    write_matrix_csv(dir / ("u2p_" + std::to_string(i) + ".csv"), cs.user_to_panel[i]);
    write_matrix_csv(dir / ("p2b_" + std::to_string(i) + ".csv"), cs.panel_to_bs[i]);
  }
  if (cs.has_inter_panel()) {
    for (std::size_t i = 0; i < cs.num_panels(); ++i) {
      for (std::size_t j = 0; j < cs.num_panels(); ++j) {
        if (i == j) continue;
        write_matrix_csv(dir / ("inter_" + std::to_string(i) + "_" + std::to_string(j) + ".csv"),
                         cs.inter_panel[i][j]);
      }
    }
  }
}

ChannelSet read_channel_set(const fs::path& dir) {
  ChannelSet cs;
  cs.direct = read_matrix_csv(dir / "direct.csv");
  for (std::size_t i = 0; fs::exists(dir / ("u2p_" + std::to_string(i) + ".csv")); ++i) {
    cs.user_to_panel.push_back(read_matrix_csv(dir / ("u2p_" + std::to_string(i) + ".csv")));
    cs.panel_to_bs.push_back(read_matrix_csv(dir / ("p2b_" + std::to_string(i) + ".csv")));
  }
  const std::size_t P = cs.num_panels();
  if (P > 1 && fs::exists(dir / "inter_0_1.csv")) {
    cs.inter_panel.assign(P, std::vector<CMatrix>(P));
    for (std::size_t i = 0; i < P; ++i) {
      for (std::size_t j = 0; j < P; ++j) {
        if (i != j) {
          cs.inter_panel[i][j] =
              read_matrix_csv(dir / ("inter_" + std::to_string(i) + "_" + std::to_string(j) + ".csv"));
        }
      }
    }
  }
  return cs;
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

json codebook_to_json(const Codebook& cb) {
  json words = json::array();
  for (const auto& cw : cb.codewords) words.push_back(pattern_phases(cw));
  return json{{"kind", std::string(to_string(cb.kind))}, {"geometry_hash", hash_hex(cb.geometry_hash)},
              {"codewords", std::move(words)}};
}

Codebook codebook_from_json(const json& doc, const Geometry& geometry, const ChannelParams& params) {
  try {
    Codebook cb;
    cb.kind = codebook_kind_from_string(doc.at("kind").get<std::string>());
    const std::string hash = doc.at("geometry_hash").get<std::string>();
    cb.geometry_hash = geometry_hash(geometry);
    if (hash != hash_hex(cb.geometry_hash)) {
      throw std::invalid_argument("codebook geometry_hash " + hash + " does not match geometry " +
                                  hash_hex(cb.geometry_hash));
    }
    for (const auto& word : doc.at("codewords")) {
      cb.codewords.push_back(make_pattern(geometry, params, word.get<std::vector<std::vector<double>>>()));
    }
    if (cb.codewords.empty()) throw std::invalid_argument("codebook has no codewords");
    return cb;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed codebook: ") + e.what());
  }
}

void save_codebook(const fs::path& path, const Codebook& cb) {
  auto out = open_out(path);
  out << codebook_to_json(cb).dump() << "\n";
  finish_out(out, path);
}

Codebook load_codebook(const fs::path& path, const Geometry& geometry, const ChannelParams& params) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return codebook_from_json(doc, geometry, params);
}

std::string results_csv(const std::vector<TrialRecord>& records) {
  std::string out = kResultsHeader;
  out += "\n";
  for (const auto& r : records) {
    out += to_string(r.architecture);
    out += ",";
    out += to_string(r.design);
    out += "," + std::to_string(r.trial);
    out += "," + fmt_double(r.raw_rate);
    out += "," + fmt_double(r.overhead_factor);
    out += "," + fmt_double(r.effective_rate);
    out += ",";
    if (r.codeword_index) out += std::to_string(*r.codeword_index);
    out += "," + std::to_string(r.evals);
    out += "\n";
  }
  return out;
}

void write_results_csv(const fs::path& path, const std::vector<TrialRecord>& records) {
  auto out = open_out(path);
  out << results_csv(records);
  finish_out(out, path);
}

json summary_to_json(const Summary& summary) {
  json doc = json::object();
  for (const auto& [key, e] : summary) {
    doc[key] = {{"mean_raw", e.mean_raw}, {"sd_raw", e.sd_raw}, {"se_raw", e.se_raw},
                {"mean_eff", e.mean_eff}, {"sd_eff", e.sd_eff}, {"se_eff", e.se_eff},
                {"trials", e.trials}};
  }
  return doc;
}

void write_summary_json(const fs::path& path, const Summary& summary) {
  auto out = open_out(path);
  out << summary_to_json(summary).dump(2) << "\n";
  finish_out(out, path);
}

}  // namespace isbs
