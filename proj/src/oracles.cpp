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

#include "isbs/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isbs/random.hpp"

namespace isbs::oracle {

CMatrix path_sum_effective(const ChannelSet& cs, const PatternSet& patterns) {
  const auto N = cs.direct.rows();
  const auto K = cs.direct.cols();
  const std::size_t P = cs.panel_to_bs.size();
  CMatrix h(N, K);
  for (Eigen::Index n = 0; n < N; ++n) {
    for (Eigen::Index k = 0; k < K; ++k) {
      cplx acc = cs.direct(n, k);
      for (std::size_t i = 0; i < P; ++i) {
        const auto& th_i = patterns[i].coeffs;
        for (Eigen::Index m = 0; m < th_i.size(); ++m) {
          // user -> element m of panel i -> antenna n
          acc += cs.panel_to_bs[i](n, m) * th_i[m] * cs.user_to_panel[i](m, k);
          if (cs.inter_panel.empty()) continue;
          for (std::size_t j = 0; j < P; ++j) {
            if (j == i) continue;
            const auto& th_j = patterns[j].coeffs;
            for (Eigen::Index mj = 0; mj < th_j.size(); ++mj) {
              // user -> element m of i -> element mj of j -> antenna n
              acc += cs.panel_to_bs[j](n, mj) * th_j[mj] * cs.inter_panel[i][j](mj, m) * th_i[m] *
                     cs.user_to_panel[i](m, k);
            }
          }
        }
      }
      h(n, k) = acc;
    }
  }
  return h;
}

cplx laplace_determinant(const CMatrix& a) {
  const auto n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("laplace_determinant: matrix not square");
  if (n == 0) return 1.0;
  if (n == 1) return a(0, 0);
  cplx det = 0.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    CMatrix minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index cc = 0;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == c) continue;
        minor(r - 1, cc++) = a(r, k);
      }
    }
    const double sign = (c % 2 == 0) ? 1.0 : -1.0;
    det += sign * a(0, c) * laplace_determinant(minor);
  }
  return det;
}

double naive_sum_rate(const CMatrix& h, double snr) {
  const auto N = h.rows();
  CMatrix m(N, N);
  for (Eigen::Index r = 0; r < N; ++r) {
    for (Eigen::Index c = 0; c < N; ++c) {
      cplx acc = 0.0;
      for (Eigen::Index k = 0; k < h.cols(); ++k) acc += h(r, k) * std::conj(h(c, k));
      m(r, c) = (r == c ? 1.0 : 0.0) + snr * acc;
    }
  }
  return std::log2(laplace_determinant(m).real());
}

ExhaustiveResult exhaustive_phase_search(const ChannelSet& cs, const std::vector<double>& amplitudes,
                                         std::size_t levels, double snr) {
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  for (const auto& b : cs.panel_to_bs) {
    sizes.push_back(static_cast<std::size_t>(b.cols()));
    total += sizes.back();
  }
  std::size_t combos = 1;
  for (std::size_t e = 0; e < total; ++e) combos *= levels;

  ExhaustiveResult best;
  best.rate = -1.0;
  std::vector<std::size_t> digits(total, 0);
  for (std::size_t code = 0; code < combos; ++code) {
    std::size_t rest = code;
    for (std::size_t e = 0; e < total; ++e) {
      digits[e] = rest % levels;
      rest /= levels;
    }
    PatternSet p;
    std::size_t e = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      CVector c(static_cast<Eigen::Index>(sizes[i]));
      for (std::size_t m = 0; m < sizes[i]; ++m, ++e) {
        c[static_cast<Eigen::Index>(m)] =
            std::polar(amplitudes[i], 2.0 * kPi * static_cast<double>(digits[e]) / static_cast<double>(levels));
      }
      p.push_back({c});
    }
    const double r = naive_sum_rate(path_sum_effective(cs, p), snr);
    if (r > best.rate) {
      best.rate = r;
      best.levels = digits;
    }
  }
  return best;
}

double single_element_gain(const ChannelSet& cs, const PatternSet& patterns, const std::vector<double>& amplitudes,
                           std::size_t levels, double snr) {
  const double current = naive_sum_rate(path_sum_effective(cs, patterns), snr);
  double gain = 0.0;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    for (Eigen::Index m = 0; m < patterns[i].coeffs.size(); ++m) {
      for (std::size_t l = 0; l < levels; ++l) {
        PatternSet p = patterns;
        p[i].coeffs[m] = std::polar(amplitudes[i], 2.0 * kPi * static_cast<double>(l) / static_cast<double>(levels));
        gain = std::max(gain, naive_sum_rate(path_sum_effective(cs, p), snr) - current);
      }
    }
  }
  return gain;
}

ChannelSet random_channel_set(std::size_t antennas, std::size_t users, const std::vector<std::size_t>& panel_sizes,
                              bool double_reflection, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto draw = [&rng](std::size_t r, std::size_t c) {
    CMatrix m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = complex_normal(rng);
    return m;
  };
  ChannelSet cs;
  cs.direct = draw(antennas, users);
  for (auto m : panel_sizes) {
    cs.user_to_panel.push_back(draw(m, users));
    cs.panel_to_bs.push_back(draw(antennas, m));
  }
  if (double_reflection) {
    const std::size_t P = panel_sizes.size();
    cs.inter_panel.assign(P, std::vector<CMatrix>(P));
    for (std::size_t i = 0; i < P; ++i) {
      for (std::size_t j = i + 1; j < P; ++j) {
        cs.inter_panel[i][j] = draw(panel_sizes[j], panel_sizes[i]);
        cs.inter_panel[j][i] = cs.inter_panel[i][j].transpose();
      }
    }
  }
  return cs;
}

FarFieldCheck far_field_phase_error(std::size_t side, double wavelength, double separation_factor) {
  const double spacing = 0.5 * wavelength;
  const double half = 0.5 * spacing * static_cast<double>(side - 1);
  const double panel_diameter = std::sqrt(2.0) * 2.0 * half;
  const double D = 2.0 * panel_diameter;
  const double R = separation_factor * D * D / wavelength;

  // Panel a in z = 0, panel b in z = R, offsets in (x, y).
  std::vector<Frame> a, b;
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      const double x = -half + spacing * static_cast<double>(r);
      const double y = -half + spacing * static_cast<double>(c);
      a.push_back({{x, y, 0.0}, {0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
      b.push_back({{x + 0.3 * half, y - 0.2 * half, R}, {0, 0, -1}, {1, 0, 0}, {0, -1, 0}});
    }
  }
  Vec3 ca, cb;
  for (const auto& f : a) ca = ca + f.position;
  for (const auto& f : b) cb = cb + f.position;
  ca = ca * (1.0 / static_cast<double>(a.size()));
  cb = cb * (1.0 / static_cast<double>(b.size()));
  const double d0 = distance(ca, cb);
  const Vec3 u = (cb - ca) * (1.0 / d0);

  auto iso = [](std::size_t, const Vec3&) { return 1.0; };
  const CMatrix link = usw_link({a, iso}, {b, iso}, wavelength);

  const double k = 2.0 * kPi / wavelength;
  FarFieldCheck out{R, D, 0.0};
  for (std::size_t n = 0; n < b.size(); ++n) {
    for (std::size_t m = 0; m < a.size(); ++m) {
      const double plane = d0 + dot(b[n].position - cb, u) - dot(a[m].position - ca, u);
      const cplx predicted = std::polar(1.0, -k * plane);
      const cplx actual = link(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
      const double err = std::abs(std::arg(actual * std::conj(predicted)));
      out.max_phase_error = std::max(out.max_phase_error, err);
    }
  }
  return out;
}

}  // namespace isbs::oracle
