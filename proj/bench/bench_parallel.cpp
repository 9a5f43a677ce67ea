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

// Serial reference kernels against their OpenMP counterparts. The argument
// of each parallel benchmark is the OpenMP thread count.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "isbs/designs.hpp"
#include "isbs/harness.hpp"
#include "isbs/random.hpp"

namespace {

using namespace isbs;

struct Fixture {
  GeometryParams geo;
  ChannelParams chan;
  LinkBudget link;
  Geometry backside = build_geometry(ArchitectureKind::Backside, geo);
  Geometry surrounding = build_geometry(ArchitectureKind::Surrounding, geo);
  ChannelSet back_cs;
  ChannelSet sur_cs;
  Codebook random;

  Fixture() {
    auto rng = make_stream(1, 0);
    const auto users = sample_user_drop(geo, 4, rng);
    back_cs = generate_channel_set(backside, users, chan, rng);
    sur_cs = generate_channel_set(surrounding, users, chan, rng);
    random = random_codebook(backside, chan, 5000, rng);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

RobustOptions robust_opts() {
  RobustOptions o;
  o.samples_per_sector = 25;
  o.max_sweeps = 5;
  return o;
}

ExperimentConfig small_experiment() {
  ExperimentConfig c;
  c.trials = 8;
  c.random_codebook_size = 1000;
  c.irpa_draws_per_visit = 50;
  c.refinement.max_sweeps = 3;
  c.robust = robust_opts();
  return c;
}

void BM_EvaluateCodebookSerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_codebook_serial(f.back_cs, f.random, f.link).best_rate);
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.random.codewords.size()));
}

void BM_EvaluateCodebookParallel(benchmark::State& state) {
  const auto& f = fixture();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_codebook(f.back_cs, f.random, f.link).best_rate);
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.random.codewords.size()));
}

void BM_IrpaSerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    std::mt19937_64 rng(7);
    benchmark::DoNotOptimize(irpa_search_serial(f.sur_cs, f.surrounding, f.chan, f.link, {}, rng).rate);
  }
}

void BM_IrpaParallel(benchmark::State& state) {
  const auto& f = fixture();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    std::mt19937_64 rng(7);
    benchmark::DoNotOptimize(irpa_search(f.sur_cs, f.surrounding, f.chan, f.link, {}, rng).rate);
  }
}

void BM_RobustCodebookSerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(robust_codebook_serial(f.surrounding, f.geo, f.chan, robust_opts()).codebook.codewords.size());
  }
}

void BM_RobustCodebookParallel(benchmark::State& state) {
  const auto& f = fixture();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(robust_codebook(f.surrounding, f.geo, f.chan, robust_opts()).codebook.codewords.size());
  }
}

void BM_ExperimentSerial(benchmark::State& state) {
  const auto config = small_experiment();
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment_serial(config).records.size());
}

void BM_ExperimentParallel(benchmark::State& state) {
  const auto config = small_experiment();
  RunOptions opts;
  opts.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(config, opts).records.size());
}

void thread_counts(benchmark::internal::Benchmark* b) {
  const int hw = omp_get_num_procs();
  for (int t = 1; t <= hw; t *= 2) b->Arg(t);
  if ((hw & (hw - 1)) != 0) b->Arg(hw);
}

}  // namespace

BENCHMARK(BM_EvaluateCodebookSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateCodebookParallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_IrpaSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IrpaParallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RobustCodebookSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RobustCodebookParallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ExperimentSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExperimentParallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
