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

#include "isbs/cascade.hpp"

#include <stdexcept>

namespace isbs {

CascadeState::CascadeState(const ChannelSet& cs, PatternSet patterns)
    : cs_(&cs), patterns_(std::move(patterns)) {
  check_pattern_shape(cs, patterns_);
  resync();
}

void CascadeState::resync() {
  const ChannelSet& cs = *cs_;
  h_ = assemble_effective(cs, patterns_);
  const std::size_t P = cs.num_panels();
  incoming_.assign(P, CMatrix());
  outgoing_.assign(P, CMatrix());
  for (std::size_t i = 0; i < P; ++i) {
    const auto Mi = cs.panel_to_bs[i].cols();
    incoming_[i] = CMatrix::Zero(Mi, cs.direct.cols());
    outgoing_[i] = CMatrix::Zero(cs.direct.rows(), Mi);
    if (!cs.has_inter_panel()) continue;
    for (std::size_t j = 0; j < P; ++j) {
      if (j == i) continue;
      incoming_[i].noalias() += cs.inter_panel[j][i] * (patterns_[j].coeffs.asDiagonal() * cs.user_to_panel[j]);
      outgoing_[i].noalias() += (cs.panel_to_bs[j] * patterns_[j].coeffs.asDiagonal()) * cs.inter_panel[i][j];
    }
  }
}

cplx CascadeState::coefficient(std::size_t panel, std::size_t element) const {
  return patterns_.at(panel).coeffs[static_cast<Eigen::Index>(element)];
}

CMatrix CascadeState::slope(std::size_t panel, std::size_t element) const {
  const ChannelSet& cs = *cs_;
  const auto m = static_cast<Eigen::Index>(element);
  const auto& G = cs.user_to_panel[panel];
  const auto& B = cs.panel_to_bs[panel];
  if (!cs.has_inter_panel()) return B.col(m) * G.row(m);
  return B.col(m) * (G.row(m) + incoming_[panel].row(m)) + outgoing_[panel].col(m) * G.row(m);
}

void CascadeState::assign(std::size_t panel, std::size_t element, cplx value, const CMatrix& base,
                          const CMatrix& slope) {
  const ChannelSet& cs = *cs_;
  const auto m = static_cast<Eigen::Index>(element);
  const cplx delta = value - patterns_[panel].coeffs[m];
  patterns_[panel].coeffs[m] = value;
  h_ = base + value * slope;
  if (!cs.has_inter_panel() || delta == cplx(0.0)) return;
  for (std::size_t j = 0; j < cs.num_panels(); ++j) {
    if (j == panel) continue;
    incoming_[j].noalias() += (delta * cs.inter_panel[panel][j].col(m)) * cs.user_to_panel[panel].row(m);
    outgoing_[j].noalias() += (delta * cs.panel_to_bs[panel].col(m)) * cs.inter_panel[j][panel].row(m);
  }
}

}  // namespace isbs
