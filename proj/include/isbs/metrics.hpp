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

struct LinkBudget {
  /// W (10 dBm).
  double tx_power_per_user = 1e-2;
  /// W (-80 dBm).
  double noise_power = 1e-11;

  double snr() const { return tx_power_per_user / noise_power; }
  void validate() const;
};

struct OverheadModel {
  std::size_t coherence_symbols = 50000;
  std::size_t pilots_per_codeword = 1;

  void validate() const;
};

/// log2 det(A) for Hermitian positive definite A, from its Cholesky pivots.
double log2det_hpd(const CMatrix& a);

/// Uplink MAC sum capacity log2 det(I + (P / sigma^2) H H^H), bits/s/Hz.
/// Factorizes the smaller of the two Gram forms.
double sum_rate(const CMatrix& h, const LinkBudget& budget);

double effective_channel_power(const CVector& h);

/// Fraction of the coherence block left for data after scanning a codebook.
double overhead_factor(std::size_t num_users, std::size_t codebook_size, const OverheadModel& model);

double overhead_adjust(double rate, std::size_t num_users, std::size_t codebook_size,
                       const OverheadModel& model);

}  // namespace isbs
