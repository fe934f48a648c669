// SPDX-License-Identifier: Apache-2.0
//
// beamsim - mmWave beam-training simulator and learned beam predictors
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

#include <benchmark/benchmark.h>

#include "beamsim/protocols.hpp"

using namespace beamsim;

namespace {

EpisodeState make_state(uint64_t seed) {
  SystemConfig sys;
  ClusterSpec clusters;
  return init_episode(sys, clusters, seed);
}

void bm_snapshot_paths(benchmark::State& state) {
  EpisodeState st = make_state(1);
  for (auto _ : state) {
    PathSet p = snapshot_paths(st);
    benchmark::DoNotOptimize(p.los.pathloss_db);
  }
}
BENCHMARK(bm_snapshot_paths);

void bm_assemble_full(benchmark::State& state) {
  EpisodeState st = make_state(2);
  PathSet p = snapshot_paths(st);
  for (auto _ : state) {
    ChannelMatrix h = assemble(p, 64, 1);
    benchmark::DoNotOptimize(h.h.data());
  }
}
BENCHMARK(bm_assemble_full);

void bm_full_wide_sweep(benchmark::State& state) {
  SystemConfig sys;
  EpisodeState st = make_state(3);
  PathSet p = snapshot_paths(st);
  ChannelMatrix hw = wide_subchannel(p, sys);
  Codebook wide = wide_codebook(sys.m_tx, sys.n_tx, sys.s_tx, sys.coverage_tx_rad);
  MeasurementContext ctx{dbm_to_mw(15.0), NoiseModel::from_config(sys),
                         NoiseStream{7}};
  uint32_t t = 0;
  for (auto _ : state) {
    MeasurementVector v = sweep_full_wide(hw, wide, ctx, t++);
    benchmark::DoNotOptimize(v.values.data());
  }
}
BENCHMARK(bm_full_wide_sweep);

void bm_exhaustive_search(benchmark::State& state) {
  SystemConfig sys;
  EpisodeState st = make_state(4);
  PathSet p = snapshot_paths(st);
  ChannelMatrix h = assemble(p, sys);
  Codebook narrow = narrow_codebook(sys.m_tx, sys.n_tx, sys.coverage_tx_rad);
  MeasurementContext ctx{dbm_to_mw(15.0), NoiseModel::from_config(sys),
                         NoiseStream{9}};
  uint32_t t = 0;
  for (auto _ : state) {
    SearchResult r = exhaustive_search(h, narrow, ctx, t++);
    benchmark::DoNotOptimize(r.index);
  }
}
BENCHMARK(bm_exhaustive_search);

void bm_leakage_profile(benchmark::State& state) {
  Codebook cb = narrow_codebook(64, 64, pi);
  double phi = 0.1;
  for (auto _ : state) {
    double acc = 0.0;
    for (int m = 0; m < cb.size(); ++m) acc += std::abs(leakage_gain(phi, m, cb));
    benchmark::DoNotOptimize(acc);
    phi += 1e-4;
  }
}
BENCHMARK(bm_leakage_profile);

}  // namespace
