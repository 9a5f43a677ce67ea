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

#include "isbs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isbs {

void LinkBudget::validate() const {
  if (!(std::isfinite(tx_power_per_user) && tx_power_per_user > 0.0)) {
    throw std::invalid_argument("link.tx_power_per_user: must be > 0");
  }
  if (!(std::isfinite(noise_power) && noise_power > 0.0)) {
    throw std::invalid_argument("link.noise_power: must be > 0");
  }
}

void OverheadModel::validate() const {
  if (coherence_symbols < 1) throw std::invalid_argument("overhead.coherence_symbols: must be >= 1");
}

double log2det_hpd(const CMatrix& a) {
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("log2det_hpd: matrix is not positive definite");
  }
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) acc += std::log2(l(i, i).real());
  return 2.0 * acc;
}

double sum_rate(const CMatrix& h, const LinkBudget& budget) {
  if (!h.allFinite()) throw std::invalid_argument("sum_rate: channel has non-finite entries");
  const double rho = budget.snr();
  if (h.cols() <= h.rows()) {
    CMatrix gram = rho * (h.adjoint() * h);
    gram.diagonal().array() += 1.0;
    return log2det_hpd(gram);
  }
  CMatrix gram = rho * (h * h.adjoint());
  gram.diagonal().array() += 1.0;
  return log2det_hpd(gram);
}

double effective_channel_power(const CVector& h) { return h.squaredNorm(); }

double overhead_factor(std::size_t num_users, std::size_t codebook_size, const OverheadModel& model) {
  const double pilots = static_cast<double>(num_users) * static_cast<double>(codebook_size) *
                        static_cast<double>(model.pilots_per_codeword);
  return std::max(0.0, 1.0 - pilots / static_cast<double>(model.coherence_symbols));
}

double overhead_adjust(double rate, std::size_t num_users, std::size_t codebook_size,
                       const OverheadModel& model) {
  if (rate < 0.0) throw std::invalid_argument("overhead_adjust: rate must be >= 0");
  return rate * overhead_factor(num_users, codebook_size, model);
}

}  // namespace isbs
