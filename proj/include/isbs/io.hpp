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

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "isbs/channel.hpp"
#include "isbs/designs.hpp"
#include "isbs/harness.hpp"

namespace isbs {

// ChannelSet debug dump: one CSV per matrix, header "re,im" repeated once per
// column, one matrix row per line. Files: direct.csv, u2p_<i>.csv,
// p2b_<i>.csv, inter_<i>_<j>.csv.
void write_channel_set(const std::filesystem::path& dir, const ChannelSet& cs);
ChannelSet read_channel_set(const std::filesystem::path& dir);

void write_matrix_csv(const std::filesystem::path& file, const CMatrix& m);
CMatrix read_matrix_csv(const std::filesystem::path& file);

// Codebook file: {"kind", "geometry_hash", "codewords": [[[phase, ...] per panel] per codeword]}.
nlohmann::json codebook_to_json(const Codebook& cb);
/// Rebuilds coefficients at the geometry's mode amplitudes; rejects a hash mismatch.
Codebook codebook_from_json(const nlohmann::json& doc, const Geometry& geometry, const ChannelParams& params);
void save_codebook(const std::filesystem::path& path, const Codebook& cb);
Codebook load_codebook(const std::filesystem::path& path, const Geometry& geometry, const ChannelParams& params);

std::string hash_hex(std::uint64_t h);

inline constexpr const char* kResultsHeader =
    "architecture,design,trial,raw_rate_bps_hz,overhead_factor,effective_rate_bps_hz,codeword_index,evals";

std::string results_csv(const std::vector<TrialRecord>& records);
void write_results_csv(const std::filesystem::path& path, const std::vector<TrialRecord>& records);

nlohmann::json summary_to_json(const Summary& summary);
void write_summary_json(const std::filesystem::path& path, const Summary& summary);

}  // namespace isbs
