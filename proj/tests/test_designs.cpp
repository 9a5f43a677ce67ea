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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "isbs/designs.hpp"
#include "isbs/io.hpp"
#include "isbs/oracles.hpp"
#include "isbs/random.hpp"

using namespace isbs;
using Catch::Approx;

namespace {

const GeometryParams kGeo;
const ChannelParams kChan;
const LinkBudget kLink;

ChannelSet default_channels(const Geometry& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto users = sample_user_drop(kGeo, 4, rng);
  return generate_channel_set(g, users, kChan, rng);
}

bool non_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1]) return false;
  }
  return true;
}

RobustOptions small_robust() {
  RobustOptions o;
  o.sector_counts = {1, 2};
  o.samples_per_sector = 10;
  o.max_sweeps = 4;
  return o;
}

}  // namespace

TEST_CASE("Refinement leaves a phase-independent objective alone") {
  const Geometry g = build_geometry(ArchitectureKind::Backside, kGeo);
  ChannelSet cs = default_channels(g, 1);
  cs.panel_to_bs[0].setZero();
  cs.direct = oracle::random_channel_set(4, 4, {}, false, 3).direct * 1e-5;
  const PatternSet init = zero_phase_pattern(g, kChan);
  const auto r = successive_refinement(cs, init, kLink, {});
  CHECK(r.patterns[0].coeffs == init[0].coeffs);
  const double direct = sum_rate(cs.direct, kLink);
  for (double v : r.trace) CHECK(v == direct);
  CHECK(r.sweeps == 1);
}

TEST_CASE("Refinement against exhaustive search on tiny instances") {
  RefinementOptions opts;
  opts.phase_grid_levels = 4;
  opts.max_sweeps = 50;
  opts.tolerance = 1e-12;
  const LinkBudget unit{1.0, 1.0};
  int global = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const ChannelSet cs = oracle::random_channel_set(1, 1, {2}, false, seed);
    const PatternSet init{{CVector::Ones(2)}};
    const auto refined = successive_refinement(cs, init, unit, opts);
    const auto brute = oracle::exhaustive_phase_search(cs, {1.0}, 4, 1.0);
    const double rate = oracle::naive_sum_rate(oracle::path_sum_effective(cs, refined.patterns), 1.0);
    INFO("seed " << seed);
    CHECK(rate <= brute.rate * (1 + 1e-12));
    CHECK(oracle::single_element_gain(cs, refined.patterns, {1.0}, 4, 1.0) <= 1e-12);
    if (rate >= brute.rate * (1 - 1e-12)) ++global;
  }
  // Coordinate ascent on a 4-level grid can stop at a local optimum; 4 of these 40 instances do.
  CHECK(global == 36);
}

TEST_CASE("Refinement with a single element is exhaustive") {
  RefinementOptions opts;
  opts.phase_grid_levels = 8;
  const LinkBudget unit{1.0, 1.0};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ChannelSet cs = oracle::random_channel_set(2, 2, {1}, false, seed);
    const auto refined = successive_refinement(cs, {{CVector::Ones(1)}}, unit, opts);
    const auto brute = oracle::exhaustive_phase_search(cs, {1.0}, 8, 1.0);
    CHECK(oracle::naive_sum_rate(oracle::path_sum_effective(cs, refined.patterns), 1.0) ==
          Approx(brute.rate).epsilon(1e-12));
  }
}

TEST_CASE("Refinement trace is monotone and ends above its start") {
  for (auto kind : {ArchitectureKind::Backside, ArchitectureKind::Frontside, ArchitectureKind::Surrounding}) {
    const Geometry g = build_geometry(kind, kGeo);
    const ChannelSet cs = default_channels(g, 17);
    RefinementOptions opts;
    opts.max_sweeps = 3;
    const auto dft = dft_codebook(g, kChan);
    const PatternSet& init = dft.codewords[5];
    const auto r = successive_refinement(cs, init, kLink, opts);
    CHECK(non_decreasing(r.trace));
    CHECK(r.trace.front() == Approx(sum_rate(assemble_effective(cs, init), kLink)).epsilon(1e-12));
    CHECK(r.trace.back() >= r.trace.front());
    CHECK(r.trace.size() == 1 + r.sweeps * g.num_elements());
    CHECK(r.evaluations == r.sweeps * g.num_elements() * opts.phase_grid_levels);
    // The reported objective is the objective of the returned pattern.
    CHECK(sum_rate(assemble_effective(cs, r.patterns), kLink) == Approx(r.trace.back()).epsilon(1e-10));
    const double amp = mode_amplitude(g.panels[0].mode, kChan);
    for (const auto& p : r.patterns)
      for (Eigen::Index m = 0; m < p.coeffs.size(); ++m) CHECK(std::abs(p.coeffs[m]) == Approx(amp));
  }
}

TEST_CASE("Refinement is a fixed point of itself") {
  const Geometry g = build_geometry(ArchitectureKind::Surrounding, kGeo);
  const ChannelSet cs = default_channels(g, 23);
  RefinementOptions opts;
  opts.max_sweeps = 100;
  const auto first = successive_refinement(cs, zero_phase_pattern(g, kChan), kLink, opts);
  REQUIRE(first.sweeps < opts.max_sweeps);
  const auto second = successive_refinement(cs, first.patterns, kLink, opts);
  CHECK(second.sweeps == 1);
  CHECK(second.trace.back() - second.trace.front() < opts.tolerance);
}

TEST_CASE("Refinement options are validated") {
  const Geometry g = build_geometry(ArchitectureKind::Backside, kGeo);
  const ChannelSet cs = default_channels(g, 1);
  RefinementOptions bad;
  bad.phase_grid_levels = 1;
  CHECK_THROWS_AS(successive_refinement(cs, zero_phase_pattern(g, kChan), kLink, bad), std::invalid_argument);
  CHECK_THROWS_AS(successive_refinement(cs, {}, kLink, {}), std::invalid_argument);
}

TEST_CASE("DFT codebook on a single surface") {
  const Geometry g = build_geometry(ArchitectureKind::Backside, kGeo);
  const Codebook cb = dft_codebook(g, kChan);
  CHECK(cb.kind == CodebookKind::DFT);
  REQUIRE(cb.codewords.size() == 40);
  CHECK(cb.overhead_size() == 40);
  CHECK(cb.geometry_hash == geometry_hash(g));
  for (std::size_t a = 0; a < 40; ++a) {
    const CVector va = cb.codewords[a][0].coeffs / std::sqrt(0.8);
    for (std::size_t b = a; b < 40; ++b) {
      const CVector vb = cb.codewords[b][0].coeffs / std::sqrt(0.8);
      const cplx ip = va.dot(vb);
      if (a == b) {
        CHECK(std::abs(ip - 40.0) < 1e-9);
      } else {
        CHECK(std::abs(ip) < 1e-9);
      }
    }
  }
  const CVector& dc = cb.codewords[0][0].coeffs;
  for (Eigen::Index m = 0; m < dc.size(); ++m) CHECK(std::abs(dc[m] - dc[0]) < 1e-15);

  // Element (a, b) of codeword (p, q) has phase -2 pi (pa/8 + qb/5).
  const auto ph = pattern_phases(cb.codewords[1 * 5 + 2]);
  const double expect = -2 * kPi * (1.0 * 3 / 8 + 2.0 * 4 / 5);
  CHECK(std::abs(std::remainder(ph[0][3 * 5 + 4] - expect, 2 * kPi)) < 1e-12);

  const Codebook front = dft_codebook(build_geometry(ArchitectureKind::Frontside, kGeo), kChan);
  CHECK(std::abs(front.codewords[3][0].coeffs[2]) == Approx(std::sqrt(0.5)));
}

TEST_CASE("DFT codebook on the surrounding walls") {
  const Geometry g = build_geometry(ArchitectureKind::Surrounding, kGeo);
  const Codebook cb = dft_codebook(g, kChan);
  REQUIRE(cb.codewords.size() == 40);
  auto flat = [](const PatternSet& p) {
    CVector v(40);
    for (int i = 0; i < 4; ++i) v.segment(10 * i, 10) = p[i].coeffs;
    return v;
  };
  for (std::size_t a = 0; a < 40; ++a) {
    for (std::size_t b = a + 1; b < 40; ++b) CHECK(std::abs(flat(cb.codewords[a]).dot(flat(cb.codewords[b]))) < 1e-9);
  }
  CHECK_THROWS_AS(dft_codebook(build_geometry(ArchitectureKind::NoIS, kGeo), kChan), std::invalid_argument);
}

TEST_CASE("Random codebook") {
  const Geometry g = build_geometry(ArchitectureKind::Backside, kGeo);
  std::mt19937_64 a(99), b(99);
  const Codebook ca = random_codebook(g, kChan, 5000, a);
  const Codebook cb = random_codebook(g, kChan, 5000, b);
  REQUIRE(ca.codewords.size() == 5000);
  CHECK(ca.kind == CodebookKind::Random);
  bool same = true;
  for (std::size_t c = 0; c < 5000; ++c) same = same && ca.codewords[c][0].coeffs == cb.codewords[c][0].coeffs;
  CHECK(same);

  // Chi-square goodness of fit over 20 phase bins, 19 dof, 1% critical value 36.19.
  std::array<double, 20> bins{};
  double n = 0.0;
  for (const auto& cw : ca.codewords) {
    for (Eigen::Index m = 0; m < cw[0].coeffs.size(); ++m) {
      double ph = std::arg(cw[0].coeffs[m]);
      if (ph < 0) ph += 2 * kPi;
      bins[std::min<std::size_t>(19, static_cast<std::size_t>(ph / (2 * kPi) * 20))] += 1.0;
      n += 1.0;
    }
  }
  CHECK(n == 200000.0);
  double chi2 = 0.0;
  for (double o : bins) chi2 += (o - n / 20) * (o - n / 20) / (n / 20);
  CHECK(chi2 < 36.19);

  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(random_codebook(g, kChan, 0, rng), std::invalid_argument);
}

TEST_CASE("IRPA spends its budget and keeps the best") {
  const Geometry g = build_geometry(ArchitectureKind::Surrounding, kGeo);
  const ChannelSet cs = default_channels(g, 5);
  std::mt19937_64 rng(12);
  const auto r = irpa_search(cs, g, kChan, kLink, {}, rng);
  CHECK(r.evals_used == 5000);
  CHECK(r.trace.size() == 20);
  CHECK(non_decreasing(r.trace));
  CHECK(r.rate == r.trace.back());
  CHECK(sum_rate(assemble_effective(cs, r.patterns), kLink) == Approx(r.rate).epsilon(1e-12));

  std::mt19937_64 odd(12);
  const auto partial = irpa_search(cs, g, kChan, kLink, {1100, 250}, odd);
  CHECK(partial.evals_used == 1100);
  CHECK(partial.trace.size() == 5);
}

TEST_CASE("IRPA with one visit is a random search over the first wall") {
  const Geometry g = build_geometry(ArchitectureKind::Surrounding, kGeo);
  const ChannelSet cs = default_channels(g, 6);
  std::mt19937_64 rng(44);
  std::mt19937_64 replay = rng;
  const auto r = irpa_search(cs, g, kChan, kLink, {300, 300}, rng);
  CHECK(r.trace.size() == 1);

  // Replay the draws: the starting pattern, then 300 candidates for wall 0.
  std::vector<std::vector<double>> start;
  for (const auto& panel : g.panels) {
    std::vector<double> ph(panel.frames.size());
    for (auto& x : ph) x = uniform_phase(replay);
    start.push_back(ph);
  }
  double best = -1.0;
  std::vector<double> best_phases;
  for (int c = 0; c < 300; ++c) {
    std::vector<double> ph(10);
    for (auto& x : ph) x = uniform_phase(replay);
    auto trial = start;
    trial[0] = ph;
    const double rate = oracle::naive_sum_rate(oracle::path_sum_effective(cs, make_pattern(g, kChan, trial)),
                                               kLink.snr());
    if (rate > best) {
      best = rate;
      best_phases = ph;
    }
  }
  CHECK(r.rate == Approx(best).epsilon(1e-10));
  for (std::size_t i = 1; i < 4; ++i) {
    const auto ph = pattern_phases({r.patterns[i]});
    for (int m = 0; m < 10; ++m) CHECK(std::abs(std::remainder(ph[0][m] - start[i][m], 2 * kPi)) < 1e-12);
  }
}

TEST_CASE("IRPA rejects single-surface channels") {
  const Geometry g = build_geometry(ArchitectureKind::Backside, kGeo);
  const ChannelSet cs = default_channels(g, 1);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(irpa_search(cs, g, kChan, kLink, {}, rng), std::invalid_argument);
  const Geometry s = build_geometry(ArchitectureKind::Surrounding, kGeo);
  CHECK_THROWS_AS(irpa_search(default_channels(s, 1), s, kChan, kLink, {100, 200}, rng), std::invalid_argument);
}

TEST_CASE("IRPA parallel and serial agree") {
  const Geometry g = build_geometry(ArchitectureKind::Surrounding, kGeo);
  const ChannelSet cs = default_channels(g, 8);
  std::mt19937_64 a(3), b(3);
  const auto p = irpa_search(cs, g, kChan, kLink, {800, 100}, a);
  const auto s = irpa_search_serial(cs, g, kChan, kLink, {800, 100}, b);
  CHECK(p.trace == s.trace);
  for (std::size_t i = 0; i < 4; ++i) CHECK(p.patterns[i].coeffs == s.patterns[i].coeffs);
}

TEST_CASE("Sector samples stay in their sector") {
  const auto sectors = sector_partition(8, kGeo);
  std::mt19937_64 rng(2);
  for (const auto& sec : sectors) {
    const auto pts = sample_sector(sec, 100, rng);
    REQUIRE(pts.size() == 100);
    for (const auto& p : pts) {
      double az = std::atan2(p.y, p.x);
      if (az < 0) az += 2 * kPi;
      const double r = std::hypot(p.x, p.y);
      CHECK(sec.contains(az, r * (1 - 1e-15)));
      CHECK(p.z == 0.0);
    }
  }
  CHECK_THROWS_AS(sample_sector(sectors[0], 0, rng), std::invalid_argument);
}

TEST_CASE("Robust codebook defaults give 15 codewords") {
  const Geometry g = build_geometry(ArchitectureKind::Backside, kGeo);
  const auto rc = robust_codebook(g, kGeo, kChan, {});
  CHECK(rc.codebook.kind == CodebookKind::Robust);
  REQUIRE(rc.codebook.codewords.size() == 15);
  REQUIRE(rc.details.size() == 15);
  std::array<int, 4> per_partition{};
  for (const auto& d : rc.details) {
    per_partition[d.partition]++;
    CHECK(non_decreasing(d.trace));
    CHECK(d.trace.back() > d.trace.front());
  }
  CHECK(per_partition == std::array<int, 4>{1, 2, 4, 8});
  const double amp = std::sqrt(0.8);
  for (const auto& cw : rc.codebook.codewords)
    for (Eigen::Index m = 0; m < cw[0].coeffs.size(); ++m) CHECK(std::abs(cw[0].coeffs[m]) == Approx(amp));
}

TEST_CASE("Robust codeword beats the DC beam on its own samples") {
  for (auto kind : {ArchitectureKind::Backside, ArchitectureKind::Frontside, ArchitectureKind::Surrounding}) {
    const Geometry g = build_geometry(kind, kGeo);
    RobustOptions o;
    o.sector_counts = {1};
    o.samples_per_sector = 30;
    const auto rc = robust_codebook(g, kGeo, kChan, o);
    REQUIRE(rc.codebook.codewords.size() == 1);

    // Recompute both objectives from the same sample locations.
    auto rng = make_stream(o.seed, 0);
    const auto locs = sample_sector(rc.details[0].spec, o.samples_per_sector, rng);
    ChannelParams los = kChan;
    los.rician_factor = std::numeric_limits<double>::infinity();
    const PatternSet dc = dft_codebook(g, kChan).codewords[0];
    double p_dc = 0.0, p_rob = 0.0;
    for (const auto& loc : locs) {
      const auto cs = generate_channel_set(g, {loc}, los, rng);
      p_dc += effective_channel_power(oracle::path_sum_effective(cs, dc).col(0));
      p_rob += effective_channel_power(oracle::path_sum_effective(cs, rc.codebook.codewords[0]).col(0));
    }
    p_dc /= locs.size();
    p_rob /= locs.size();
    CHECK(rc.details[0].trace.front() == Approx(p_dc).epsilon(1e-10));
    CHECK(rc.details[0].trace.back() == Approx(p_rob).epsilon(1e-10));
    CHECK(p_rob >= p_dc);
  }
}

TEST_CASE("Robust codebook is reproducible") {
  const Geometry g = build_geometry(ArchitectureKind::Surrounding, kGeo);
  const auto a = robust_codebook(g, kGeo, kChan, small_robust());
  const auto b = robust_codebook(g, kGeo, kChan, small_robust());
  const auto s = robust_codebook_serial(g, kGeo, kChan, small_robust());
  CHECK(a.codebook.codewords.size() == 3);
  CHECK(codebook_to_json(a.codebook).dump() == codebook_to_json(b.codebook).dump());
  CHECK(codebook_to_json(a.codebook).dump() == codebook_to_json(s.codebook).dump());
  for (const auto& d : a.details) CHECK(non_decreasing(d.trace));

  RobustOptions other = small_robust();
  other.seed = 7;
  CHECK(codebook_to_json(robust_codebook(g, kGeo, kChan, other).codebook).dump() !=
        codebook_to_json(a.codebook).dump());

  RobustOptions bad;
  bad.sector_counts = {};
  CHECK_THROWS_AS(robust_codebook(g, kGeo, kChan, bad), std::invalid_argument);
  bad = RobustOptions{};
  bad.samples_per_sector = 0;
  CHECK_THROWS_AS(robust_codebook(g, kGeo, kChan, bad), std::invalid_argument);
}

TEST_CASE("Codebook evaluation breaks ties low") {
  const Geometry g = build_geometry(ArchitectureKind::Backside, kGeo);
  ChannelSet cs = default_channels(g, 2);
  cs.panel_to_bs[0].setZero();
  cs.direct = oracle::random_channel_set(4, 4, {}, false, 1).direct * 1e-5;
  std::mt19937_64 rng(3);
  Codebook cb = random_codebook(g, kChan, 1, rng);
  cb.codewords.insert(cb.codewords.begin(), all_off_pattern(g));
  const auto e = evaluate_codebook(cs, cb, kLink);
  CHECK(e.best_index == 0);
  CHECK(e.rates[0] == e.rates[1]);

  Codebook single = dft_codebook(g, kChan);
  single.codewords.resize(1);
  CHECK(evaluate_codebook(default_channels(g, 2), single, kLink).best_index == 0);

  Codebook empty;
  CHECK_THROWS_AS(evaluate_codebook(cs, empty, kLink), std::invalid_argument);
}

TEST_CASE("Codebook evaluation returns the re-scanned maximum") {
  for (auto kind : {ArchitectureKind::Frontside, ArchitectureKind::Surrounding}) {
    const Geometry g = build_geometry(kind, kGeo);
    const ChannelSet cs = default_channels(g, 29);
    std::mt19937_64 rng(4);
    Codebook cb = random_codebook(g, kChan, 200, rng);
    const auto dft = dft_codebook(g, kChan);
    cb.codewords.insert(cb.codewords.end(), dft.codewords.begin(), dft.codewords.end());
    const auto e = evaluate_codebook(cs, cb, kLink);
    const auto s = evaluate_codebook_serial(cs, cb, kLink);
    CHECK(e.rates == s.rates);
    CHECK(e.best_index == s.best_index);
    for (std::size_t c = 0; c < cb.codewords.size(); ++c) {
      const double r = oracle::naive_sum_rate(oracle::path_sum_effective(cs, cb.codewords[c]), kLink.snr());
      CHECK(e.best_rate >= r * (1 - 1e-10));
      CHECK(e.rates[c] == Approx(r).epsilon(1e-10));
    }
    CHECK(e.best_pattern[0].coeffs == cb.codewords[e.best_index][0].coeffs);

    // Refining from the chosen codeword never loses rate.
    RefinementOptions opts;
    opts.max_sweeps = 2;
    const auto refined = successive_refinement(cs, e.best_pattern, kLink, opts);
    CHECK(refined.trace.back() >= e.best_rate);
  }
}

TEST_CASE("Codebook kind names round-trip") {
  for (auto k : {CodebookKind::DFT, CodebookKind::Random, CodebookKind::Robust})
    CHECK(codebook_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(codebook_kind_from_string("fancy"), std::invalid_argument);
}
