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

#include "isbs/channel.hpp"

namespace isbs {

/// Effective channel of a ChannelSet under a pattern, kept up to date while
/// single coefficients change.
///
/// With every other coefficient fixed the effective channel is affine in the
/// coefficient of element m on panel i:  H(t) = base + t * slope.  The slope
/// collects the single-reflection column, the double-reflection paths that
/// leave element m toward another panel, and those that arrive at it:
///
///   slope = B_i[:, m] (G_i[m, :] + r_i[m, :]) + q_i[:, m] G_i[m, :]
///   r_i   = sum_{j != i} S_ji Th_j G_j     (field arriving at panel i)
///   q_i   = sum_{j != i} B_j Th_j S_ij     (panel i -> other panel -> BS)
class CascadeState {
 public:
  CascadeState(const ChannelSet& cs, PatternSet patterns);

  const CMatrix& effective() const { return h_; }
  const PatternSet& patterns() const { return patterns_; }
  cplx coefficient(std::size_t panel, std::size_t element) const;

  CMatrix slope(std::size_t panel, std::size_t element) const;

  /// Sets the coefficient and stores `base + value * slope` as the new
  /// effective channel, bit-identical to the candidate the caller scored.
  void assign(std::size_t panel, std::size_t element, cplx value, const CMatrix& base,
              const CMatrix& slope);

  /// Rebuilds all cached terms from scratch.
  void resync();

 private:
  const ChannelSet* cs_;
  PatternSet patterns_;
  CMatrix h_;
  std::vector<CMatrix> incoming_;
  std::vector<CMatrix> outgoing_;
};

}  // namespace isbs
