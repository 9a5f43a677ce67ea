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

#include "isbs/designs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "isbs/cascade.hpp"
#include "isbs/random.hpp"

namespace isbs {

namespace {

// Smallest sum-rate gain accepted as an improvement. Keeps rounding noise in
// the incremental state from registering as progress.
constexpr double kMinRateGain = 1e-12;

double panel_amplitude(const ISPattern& p) {
  return p.coeffs.size() == 0 ? 0.0 : p.coeffs.cwiseAbs().maxCoeff();
}

std::size_t argmax_lowest(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

std::string_view to_string(CodebookKind kind) {
  switch (kind) {
    case CodebookKind::DFT: return "dft";
    case CodebookKind::Random: return "random";
    case CodebookKind::Robust: return "robust";
  }
  return "unknown";
}

CodebookKind codebook_kind_from_string(std::string_view name) {
  for (auto k : {CodebookKind::DFT, CodebookKind::Random, CodebookKind::Robust}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown codebook kind '" + std::string(name) + "' (expected dft, random or robust)");
}

void RefinementOptions::validate() const {
  if (phase_grid_levels < 2) throw std::invalid_argument("refinement.phase_grid_levels: must be >= 2");
  if (max_sweeps < 1) throw std::invalid_argument("refinement.max_sweeps: must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("refinement.tolerance: must be > 0");
}

void IrpaOptions::validate() const {
  if (draws_per_visit < 1) throw std::invalid_argument("irpa.draws_per_visit: must be >= 1");
  if (budget < draws_per_visit) throw std::invalid_argument("irpa.budget: must be >= draws_per_visit");
}

void RobustOptions::validate() const {
  if (sector_counts.empty()) throw std::invalid_argument("robust.sector_counts: must not be empty");
  for (auto s : sector_counts) {
    if (s < 1) throw std::invalid_argument("robust.sector_counts: entries must be >= 1");
  }
  if (samples_per_sector < 1) throw std::invalid_argument("robust.samples_per_sector: empty sector sample");
  if (max_sweeps < 1) throw std::invalid_argument("robust.max_sweeps: must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("robust.tolerance: must be > 0");
}

RefinementResult successive_refinement(const ChannelSet& cs, const PatternSet& init,
                                       const LinkBudget& budget, const RefinementOptions& opts) {
  opts.validate();
  CascadeState state(cs, init);

  const std::size_t levels = opts.phase_grid_levels;
  std::vector<cplx> unit_grid(levels);
  for (std::size_t l = 0; l < levels; ++l) {
    unit_grid[l] = std::polar(1.0, 2.0 * kPi * static_cast<double>(l) / static_cast<double>(levels));
  }

  RefinementResult out;
  double current = sum_rate(state.effective(), budget);
  out.trace.push_back(current);

  for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    const double sweep_start = current;
    for (std::size_t i = 0; i < cs.num_panels(); ++i) {
      const double amp = panel_amplitude(init[i]);
      const auto M = static_cast<std::size_t>(init[i].coeffs.size());
      for (std::size_t m = 0; m < M; ++m) {
        const CMatrix slope = state.slope(i, m);
        const CMatrix base = state.effective() - state.coefficient(i, m) * slope;
        double best = current;
        std::size_t best_level = levels;
        for (std::size_t l = 0; l < levels; ++l) {
          const CMatrix candidate = base + (amp * unit_grid[l]) * slope;
          const double r = sum_rate(candidate, budget);
          ++out.evaluations;
          if (r > best + kMinRateGain) {
            best = r;
            best_level = l;
          }
        }
        if (best_level < levels) {
          state.assign(i, m, amp * unit_grid[best_level], base, slope);
          current = best;
        }
        out.trace.push_back(current);
      }
    }
    ++out.sweeps;
    if (current - sweep_start < opts.tolerance) break;
  }
  out.patterns = state.patterns();
  return out;
}

Codebook dft_codebook(const Geometry& geometry, const ChannelParams& params) {
  if (geometry.panels.empty()) throw std::invalid_argument("dft_codebook: geometry has no surface");
  const GridShape grid = geometry.panels.front().grid;
  for (const auto& p : geometry.panels) {
    if (!(p.grid == grid)) throw std::invalid_argument("dft_codebook: surfaces must share one grid shape");
  }
  const std::size_t P = geometry.panels.size();
  const double R = static_cast<double>(grid.rows);
  const double C = static_cast<double>(grid.cols);

  Codebook cb;
  cb.kind = CodebookKind::DFT;
  cb.geometry_hash = geometry_hash(geometry);
  // Single surface: P == 1 and the cross-surface offset is identically zero.
  for (std::size_t p = 0; p < grid.rows; ++p) {
    for (std::size_t q = 0; q < grid.cols; ++q) {
      for (std::size_t t = 0; t < P; ++t) {
        std::vector<std::vector<double>> phases(P);
        for (std::size_t i = 0; i < P; ++i) {
          const double offset = -2.0 * kPi * static_cast<double>(t * i) / static_cast<double>(P);
          phases[i].reserve(grid.count());
          for (std::size_t a = 0; a < grid.rows; ++a) {
            for (std::size_t b = 0; b < grid.cols; ++b) {
              const double frac = static_cast<double>(p * a) / R + static_cast<double>(q * b) / C;
              phases[i].push_back(-2.0 * kPi * frac + offset);
            }
          }
        }
        cb.codewords.push_back(make_pattern(geometry, params, phases));
      }
    }
  }
  return cb;
}

Codebook random_codebook(const Geometry& geometry, const ChannelParams& params, std::size_t size,
                         std::mt19937_64& rng) {
  if (size < 1) throw std::invalid_argument("random_codebook: size must be >= 1");
  if (geometry.panels.empty()) throw std::invalid_argument("random_codebook: geometry has no surface");
  Codebook cb;
  cb.kind = CodebookKind::Random;
  cb.geometry_hash = geometry_hash(geometry);
  cb.codewords.reserve(size);
  for (std::size_t c = 0; c < size; ++c) {
    std::vector<std::vector<double>> phases;
    for (const auto& panel : geometry.panels) {
      std::vector<double> ph(panel.frames.size());
      for (auto& x : ph) x = uniform_phase(rng);
      phases.push_back(std::move(ph));
    }
    cb.codewords.push_back(make_pattern(geometry, params, phases));
  }
  return cb;
}

namespace {

template <bool Parallel>
IrpaResult irpa_impl(const ChannelSet& cs, const Geometry& geometry, const ChannelParams& params,
                     const LinkBudget& budget, const IrpaOptions& opts, std::mt19937_64& rng) {
  opts.validate();
  if (geometry.kind != ArchitectureKind::Surrounding || !cs.has_inter_panel()) {
    throw std::invalid_argument("irpa_search: requires the surrounding architecture");
  }
  const std::size_t P = geometry.panels.size();

  // Starting point is an unevaluated random pattern; the first visit scores it.
  std::vector<std::vector<double>> incumbent_phases;
  for (const auto& panel : geometry.panels) {
    std::vector<double> ph(panel.frames.size());
    for (auto& x : ph) x = uniform_phase(rng);
    incumbent_phases.push_back(std::move(ph));
  }

  IrpaResult out;
  out.patterns = make_pattern(geometry, params, incumbent_phases);
  double best = -std::numeric_limits<double>::infinity();

  for (std::size_t visit = 0; out.evals_used < opts.budget; ++visit) {
    const std::size_t i = visit % P;
    const std::size_t n = std::min(opts.draws_per_visit, opts.budget - out.evals_used);
    const double amp = mode_amplitude(geometry.panels[i].mode, params);
    const auto M = static_cast<Eigen::Index>(geometry.panels[i].frames.size());

    std::vector<CVector> draws(n, CVector(M));
    for (auto& d : draws) {
      for (Eigen::Index m = 0; m < M; ++m) d[m] = std::polar(amp, uniform_phase(rng));
    }

    std::vector<double> rates(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (Parallel)
    for (std::ptrdiff_t c = 0; c < count; ++c) {
      PatternSet trial = out.patterns;
      trial[i].coeffs = draws[static_cast<std::size_t>(c)];
      rates[static_cast<std::size_t>(c)] = sum_rate(assemble_effective(cs, trial), budget);
    }
    out.evals_used += n;

    const std::size_t c = argmax_lowest(rates);
    if (rates[c] > best) {
      best = rates[c];
      out.patterns[i].coeffs = draws[c];
    }
    out.trace.push_back(best);
  }
  out.rate = best;
  return out;
}

}  // namespace

IrpaResult irpa_search(const ChannelSet& cs, const Geometry& geometry, const ChannelParams& params,
                       const LinkBudget& budget, const IrpaOptions& opts, std::mt19937_64& rng) {
  return irpa_impl<true>(cs, geometry, params, budget, opts, rng);
}

IrpaResult irpa_search_serial(const ChannelSet& cs, const Geometry& geometry, const ChannelParams& params,
                              const LinkBudget& budget, const IrpaOptions& opts, std::mt19937_64& rng) {
  return irpa_impl<false>(cs, geometry, params, budget, opts, rng);
}

std::vector<Vec3> sample_sector(const SectorSpec& sector, std::size_t count, std::mt19937_64& rng) {
  if (count < 1) throw std::invalid_argument("sample_sector: empty sector sample");
  const double r2lo = sector.radius_lo * sector.radius_lo;
  const double r2hi = sector.radius_hi * sector.radius_hi;
  const double width = sector.azimuth_hi - sector.azimuth_lo;
  std::vector<Vec3> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const double az = sector.azimuth_lo + width * (static_cast<double>(s) + uniform01(rng)) / static_cast<double>(count);
    const double r = std::sqrt(r2lo + (r2hi - r2lo) * uniform01(rng));
    out.push_back({r * std::cos(az), r * std::sin(az), 0.0});
  }
  return out;
}

namespace {

struct SectorJob {
  std::size_t partition;
  std::size_t sector;
  SectorSpec spec;
};

// Per-element closed-form ascent of the mean channel power over the samples.
RobustCodeword design_sector_codeword(const Geometry& geometry, const ChannelParams& los,
                                      const RobustOptions& opts, const SectorJob& job,
                                      std::uint64_t stream, PatternSet& codeword) {
  auto rng = make_stream(opts.seed, stream);
  const auto locations = sample_sector(job.spec, opts.samples_per_sector, rng);

  std::vector<ChannelSet> sets;
  sets.reserve(locations.size());
  for (const auto& loc : locations) sets.push_back(generate_channel_set(geometry, {loc}, los, rng));

  std::vector<CascadeState> states;
  states.reserve(sets.size());
  const PatternSet init = zero_phase_pattern(geometry, los);
  for (const auto& cs : sets) states.emplace_back(cs, init);

  const double inv_n = 1.0 / static_cast<double>(states.size());
  auto mean_power = [&] {
    double acc = 0.0;
    for (const auto& s : states) acc += effective_channel_power(s.effective().col(0));
    return acc * inv_n;
  };

  RobustCodeword info{job.partition, job.sector, job.spec, {}};
  double current = mean_power();
  info.trace.push_back(current);

  std::vector<CMatrix> slopes(states.size()), bases(states.size());
  for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    const double sweep_start = current;
    for (std::size_t i = 0; i < geometry.panels.size(); ++i) {
      const double amp = mode_amplitude(geometry.panels[i].mode, los);
      for (std::size_t m = 0; m < geometry.panels[i].frames.size(); ++m) {
        cplx c = 0.0;
        for (std::size_t l = 0; l < states.size(); ++l) {
          slopes[l] = states[l].slope(i, m);
          bases[l] = states[l].effective() - states[l].coefficient(i, m) * slopes[l];
          c += bases[l].col(0).dot(slopes[l].col(0));  // base^H slope
        }
        if (std::abs(c) > 0.0) {
          const cplx theta = amp * std::conj(c) / std::abs(c);
          double candidate = 0.0;
          for (std::size_t l = 0; l < states.size(); ++l) {
            const CMatrix h = bases[l] + theta * slopes[l];
            candidate += effective_channel_power(h.col(0));
          }
          candidate *= inv_n;
          if (candidate > current) {
            for (std::size_t l = 0; l < states.size(); ++l) states[l].assign(i, m, theta, bases[l], slopes[l]);
            current = candidate;
          }
        }
        info.trace.push_back(current);
      }
    }
    if (current - sweep_start <= opts.tolerance * sweep_start) break;
  }
  codeword = states.front().patterns();
  return info;
}

template <bool Parallel>
RobustCodebook robust_impl(const Geometry& geometry, const GeometryParams& geometry_params,
                           const ChannelParams& params, const RobustOptions& opts) {
  opts.validate();
  if (geometry.panels.empty()) throw std::invalid_argument("robust_codebook: geometry has no surface");

  ChannelParams los = params;
  los.rician_factor = std::numeric_limits<double>::infinity();

  std::vector<SectorJob> jobs;
  for (std::size_t p = 0; p < opts.sector_counts.size(); ++p) {
    const auto sectors = sector_partition(opts.sector_counts[p], geometry_params);
    for (std::size_t s = 0; s < sectors.size(); ++s) jobs.push_back({p, s, sectors[s]});
  }

  RobustCodebook out;
  out.codebook.kind = CodebookKind::Robust;
  out.codebook.geometry_hash = geometry_hash(geometry);
  out.codebook.codewords.resize(jobs.size());
  out.details.resize(jobs.size());

  const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) if (Parallel)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    out.details[idx] = design_sector_codeword(geometry, los, opts, jobs[idx], idx, out.codebook.codewords[idx]);
  }
  return out;
}

template <bool Parallel>
CodebookEvaluation evaluate_impl(const ChannelSet& cs, const Codebook& cb, const LinkBudget& budget) {
  if (cb.codewords.empty()) throw std::invalid_argument("evaluate_codebook: empty codebook");
  CodebookEvaluation out;
  out.rates.resize(cb.codewords.size());
  const auto count = static_cast<std::ptrdiff_t>(cb.codewords.size());
#pragma omp parallel for schedule(static) if (Parallel)
  for (std::ptrdiff_t c = 0; c < count; ++c) {
    const auto idx = static_cast<std::size_t>(c);
    out.rates[idx] = sum_rate(assemble_effective(cs, cb.codewords[idx]), budget);
  }
  out.best_index = argmax_lowest(out.rates);
  out.best_pattern = cb.codewords[out.best_index];
  out.best_rate = out.rates[out.best_index];
  return out;
}

}  // namespace

RobustCodebook robust_codebook(const Geometry& geometry, const GeometryParams& geometry_params,
                               const ChannelParams& params, const RobustOptions& opts) {
  return robust_impl<true>(geometry, geometry_params, params, opts);
}

RobustCodebook robust_codebook_serial(const Geometry& geometry, const GeometryParams& geometry_params,
                                      const ChannelParams& params, const RobustOptions& opts) {
  return robust_impl<false>(geometry, geometry_params, params, opts);
}

CodebookEvaluation evaluate_codebook(const ChannelSet& cs, const Codebook& cb, const LinkBudget& budget) {
  return evaluate_impl<true>(cs, cb, budget);
}

CodebookEvaluation evaluate_codebook_serial(const ChannelSet& cs, const Codebook& cb,
                                            const LinkBudget& budget) {
  return evaluate_impl<false>(cs, cb, budget);
}

}  // namespace isbs
