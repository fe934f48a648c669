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

#include <doctest.h>

#include "beamsim/protocols.hpp"

using namespace beamsim;

namespace {

struct Fixture {
  SystemConfig cfg;
  Codebook narrow, wide;
  PathSet paths;
  ChannelMatrix h, h_wide;
  MeasurementContext ctx;

  explicit Fixture(double aod = 0.31, bool with_noise = true, uint64_t seed = 99) {
    narrow = narrow_codebook(cfg.m_tx, cfg.n_tx, cfg.coverage_tx_rad);
    wide = wide_codebook(cfg.m_tx, cfg.n_tx, cfg.s_tx, cfg.coverage_tx_rad);
    paths.los.aod_rad = aod;
    paths.los.pathloss_db = pathloss_db(80.0, cfg.carrier_hz);
    h = assemble(paths, cfg);
    h_wide = wide_subchannel(paths, cfg);
    ctx.tx_power_mw = dbm_to_mw(cfg.tx_power_dbm);
    ctx.noise = with_noise ? NoiseModel::from_config(cfg) : NoiseModel::disabled();
    ctx.stream = NoiseStream{seed};
  }
};

}  // namespace

TEST_CASE("full wide sweep: budget, mask and determinism") {
  Fixture fx;
  MeasurementVector a = sweep_full_wide(fx.h_wide, fx.wide, fx.ctx, 0);
  CHECK(a.budget_used == 16);
  CHECK(a.size() == 16);
  for (uint8_t m : a.mask) CHECK(m == 1);

  MeasurementVector b = sweep_full_wide(fx.h_wide, fx.wide, fx.ctx, 0);
  CHECK(a.values == b.values);

  MeasurementVector c = sweep_full_wide(fx.h_wide, fx.wide, fx.ctx, 1);
  CHECK(a.values != c.values);  // new training index, new noise slots
}

TEST_CASE("noise-free full sweep peaks at the oracle wide beam") {
  Fixture fx(0.47, false);
  MeasurementVector sweep = sweep_full_wide(fx.h_wide, fx.wide, fx.ctx, 0);
  int best = 0;
  for (int m = 1; m < sweep.size(); ++m)
    if (std::norm(sweep.values[m]) > std::norm(sweep.values[best])) best = m;
  CHECK(best == best_beam_oracle(fx.h_wide, fx.wide));
}

TEST_CASE("partial sweep zeros, budget and subset consistency") {
  Fixture fx;
  MeasurementVector part = sweep_partial_wide(fx.h_wide, fx.wide, {0, 2}, fx.ctx, 3);
  CHECK(part.budget_used == 2);
  CHECK(part.values[1] == cd(0.0, 0.0));
  CHECK(part.mask[1] == 0);
  CHECK(part.mask[0] == 1);

  // A sub-mask agrees with any super-mask entry for entry.
  MeasurementVector full = sweep_full_wide(fx.h_wide, fx.wide, fx.ctx, 3);
  MeasurementVector mid =
      sweep_partial_wide(fx.h_wide, fx.wide, {0, 2, 5, 9, 11}, fx.ctx, 3);
  CHECK(part.values[0] == full.values[0]);
  CHECK(part.values[2] == full.values[2]);
  CHECK(mid.values[0] == full.values[0]);
  CHECK(mid.values[9] == full.values[9]);

  // Everything measured equals the full sweep entirely.
  std::vector<int> all(16);
  for (int i = 0; i < 16; ++i) all[i] = i;
  MeasurementVector again = sweep_partial_wide(fx.h_wide, fx.wide, all, fx.ctx, 3);
  CHECK(again.values == full.values);
  CHECK_THROWS_AS(sweep_partial_wide(fx.h_wide, fx.wide, {}, fx.ctx, 3),
                  std::invalid_argument);
}

TEST_CASE("exhaustive search: budget and noise-free oracle equivalence") {
  Fixture fx(0.12, false);
  SearchResult res = exhaustive_search(fx.h, fx.narrow, fx.ctx, 0);
  CHECK(res.budget == 64);
  CHECK(res.index == best_beam_oracle(fx.h, fx.narrow));
  CHECK(res.measured.size() == 64);

  Codebook one = narrow_codebook(fx.cfg.m_tx, 1, pi);
  SearchResult single = exhaustive_search(fx.h, one, fx.ctx, 0);
  CHECK(single.index == 0);
  CHECK(single.budget == 1);
}

TEST_CASE("two-level search: budget and degenerate containment") {
  Fixture fx(0.0, false);
  // Place the AoD exactly on a narrow-beam center.
  Codebook narrow = fx.narrow;
  const double aod = narrow.directions[37];
  Fixture fx2(aod, false);
  SearchResult res = two_level_search(fx2.h, fx2.h_wide, fx2.narrow, fx2.wide,
                                      fx2.ctx, 0);
  CHECK(res.budget == 20);  // 16 wide + 4 narrow
  CHECK(res.index == 37);
}

TEST_CASE("interactive search with a single-antenna receiver") {
  Fixture fx(0.52, false);
  Codebook rx = narrow_codebook(1, 1, pi);
  PairSearchResult res = interactive_search(fx.h, fx.narrow, rx, fx.ctx, 0);
  CHECK(res.budget == 64);
  CHECK(res.rx_index == 0);
  CHECK(res.tx_index == best_beam_oracle(fx.h, fx.narrow));
}

TEST_CASE("interactive search sweeps both ends with multiple rx antennas") {
  SystemConfig cfg;
  cfg.m_rx = 4;
  cfg.n_rx = 4;
  PathSet p;
  p.los.aod_rad = 0.3;
  p.los.aoa_rad = -0.2;
  p.los.pathloss_db = 60.0;
  ChannelMatrix h = assemble(p, cfg);
  Codebook tx = narrow_codebook(cfg.m_tx, cfg.n_tx, pi);
  Codebook rx = narrow_codebook(cfg.m_rx, cfg.n_rx, pi);
  MeasurementContext ctx{dbm_to_mw(15.0), NoiseModel::disabled(), NoiseStream{1}};
  PairSearchResult res = interactive_search(h, tx, rx, ctx, 0);
  CHECK(res.budget == 64 + 4);
  CHECK(res.rx_index >= 0);
  CHECK(res.rx_index < 4);
}

TEST_CASE("refine_topk: prior-only, exhaustive limit and top-2 pick") {
  Fixture fx(0.21, false);

  std::vector<double> probs(64, 0.0);
  probs[7] = 1.0;
  SearchResult prior = refine_topk(fx.h, fx.narrow, probs, 0, fx.ctx, 0);
  CHECK(prior.index == 7);
  CHECK(prior.budget == 0);

  std::vector<double> uniform(64, 1.0 / 64.0);
  SearchResult all = refine_topk(fx.h, fx.narrow, uniform, 64, fx.ctx, 0);
  CHECK(all.index == best_beam_oracle(fx.h, fx.narrow));
  CHECK(all.budget == 64);

  // Probability mass on beams 5 and 6: the measured-stronger one wins.
  std::vector<double> two(64, 0.0);
  two[5] = 0.6;
  two[6] = 0.4;
  SearchResult pick = refine_topk(fx.h, fx.narrow, two, 2, fx.ctx, 0);
  CHECK(pick.budget == 2);
  double p5 = fx.h.beam_energy(fx.narrow.beam(5));
  double p6 = fx.h.beam_energy(fx.narrow.beam(6));
  CHECK(pick.index == (p6 > p5 ? 6 : 5));
}

TEST_CASE("refine_topk gain is non-decreasing in the beam budget") {
  Fixture fx(-0.34, false, 5);
  Rng rng(31);
  std::vector<double> probs(64);
  double sum = 0.0;
  for (double& p : probs) {
    p = rng.uniform();
    sum += p;
  }
  for (double& p : probs) p /= sum;

  double prev = -1.0;
  for (int k = 0; k <= 64; k += 4) {
    SearchResult res = refine_topk(fx.h, fx.narrow, probs, k, fx.ctx, 0);
    double gain = fx.h.beam_energy(fx.narrow.beam(res.index));
    CHECK(gain >= prev);
    prev = gain;
  }
}

TEST_CASE("top_k_indices resolves ties toward lower indices") {
  std::vector<double> v = {0.5, 0.9, 0.5, 0.9, 0.1};
  CHECK(top_k_indices(v, 2) == std::vector<int>{1, 3});
  CHECK(top_k_indices(v, 3) == std::vector<int>{0, 1, 3});
  CHECK(top_k_indices(v, 0).empty());
}
