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

#include "beamsim/scenario.hpp"

using namespace beamsim;

namespace {

SystemConfig default_sys() {
  SystemConfig cfg;
  cfg.rng_seed = 42;
  return cfg;
}

bool states_equal(const EpisodeState& a, const EpisodeState& b) {
  if (a.ue.position.x != b.ue.position.x || a.ue.position.y != b.ue.position.y)
    return false;
  if (a.ue.speed_mps != b.ue.speed_mps || a.ue.accel_mps2 != b.ue.accel_mps2 ||
      a.ue.heading_rad != b.ue.heading_rad)
    return false;
  if (a.groups.size() != b.groups.size()) return false;
  for (size_t i = 0; i < a.groups.size(); ++i) {
    if (a.groups[i].center.x != b.groups[i].center.x ||
        a.groups[i].center.y != b.groups[i].center.y ||
        a.groups[i].shadow_weight != b.groups[i].shadow_weight)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("init_episode is bit-deterministic in the seed") {
  SystemConfig cfg = default_sys();
  ClusterSpec cs;
  EpisodeState a = init_episode(cfg, cs);
  EpisodeState b = init_episode(cfg, cs);
  CHECK(states_equal(a, b));

  cfg.rng_seed = 43;
  EpisodeState c = init_episode(cfg, cs);
  CHECK_FALSE(states_equal(a, c));
}

TEST_CASE("initial draws respect the cell and group counts") {
  SystemConfig cfg = default_sys();
  cfg.cell_radius_m = 100.0;
  ClusterSpec cs;
  cs.n_groups = 15;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    EpisodeState st = init_episode(cfg, cs, seed);
    CHECK(st.ue.position.norm() <= 100.0);
    CHECK(st.groups.size() == 15);
    for (const auto& g : st.groups) CHECK(g.center.norm() <= 100.0);
    CHECK(st.ue.speed_mps >= 10.0);
    CHECK(st.ue.speed_mps <= 50.0);
    CHECK(st.ue.accel_mps2 >= -8.0);
    CHECK(st.ue.accel_mps2 <= 8.0);
  }
}

TEST_CASE("advance applies rectilinear kinematics") {
  SystemConfig cfg = default_sys();
  ClusterSpec cs;
  EpisodeState st = init_episode(cfg, cs, 7);
  st.ue.position = {0.0, 0.0};
  st.ue.heading_rad = 0.0;
  st.ue.speed_mps = 10.0;
  st.ue.accel_mps2 = 0.0;
  EpisodeState next = advance(st, 0.1);
  CHECK(next.ue.position.x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(next.ue.position.y == doctest::Approx(0.0));
  CHECK(next.ue.speed_mps == doctest::Approx(10.0));
  CHECK(next.step == st.step + 1);
}

TEST_CASE("speed clamps at zero under sustained deceleration") {
  SystemConfig cfg = default_sys();
  ClusterSpec cs;
  EpisodeState st = init_episode(cfg, cs, 7);
  st.ue.speed_mps = 10.0;
  st.ue.accel_mps2 = -8.0;
  for (int i = 0; i < 50; ++i) {
    st = advance(st, 0.1);
    CHECK(st.ue.speed_mps >= 0.0);
  }
  CHECK(st.ue.speed_mps == 0.0);
}

TEST_CASE("boundary reflection matches the axis-aligned analytic case") {
  SystemConfig cfg = default_sys();
  cfg.cell_radius_m = 100.0;
  ClusterSpec cs;
  EpisodeState st = init_episode(cfg, cs, 7);
  st.ue.position = {99.0, 0.0};
  st.ue.heading_rad = 0.0;  // straight at the boundary
  st.ue.speed_mps = 50.0;
  st.ue.accel_mps2 = 0.0;
  EpisodeState next = advance(st, 0.1);  // 5 m of travel, 1 m to the wall
  CHECK(next.ue.position.norm() <= 100.0);
  CHECK(next.ue.position.x == doctest::Approx(96.0).epsilon(1e-9));
  CHECK(next.ue.position.y == doctest::Approx(0.0));
  CHECK(std::cos(next.ue.heading_rad) == doctest::Approx(-1.0));
}

TEST_CASE("pathloss formula evaluates and is increasing in distance") {
  CHECK(pathloss_db(100.0, 28e9) == doctest::Approx(113.38).epsilon(1e-4));
  double prev = pathloss_db(1.0, 28e9);
  for (double d = 2.0; d < 200.0; d += 1.0) {
    double cur = pathloss_db(d, 28e9);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("snapshot_paths geometry and determinism") {
  SystemConfig cfg = default_sys();
  ClusterSpec cs;
  EpisodeState st = init_episode(cfg, cs, 12);
  PathSet a = snapshot_paths(st);
  PathSet b = snapshot_paths(st);
  CHECK(a.los.gain == b.los.gain);
  CHECK(a.los.aod_rad == b.los.aod_rad);
  CHECK(a.clusters.size() == b.clusters.size());
  CHECK(a.los.aod_rad == doctest::Approx(azimuth(st.ue.position)));
  CHECK(a.los.aod_rad > -pi);
  CHECK(a.los.aod_rad <= pi);
  CHECK(std::abs(std::abs(a.los.gain) - 1.0) < 1e-12);
  CHECK(a.clusters.size() <= static_cast<size_t>(cs.n_groups));
}

TEST_CASE("UE outside every visible region leaves only the LOS path") {
  SystemConfig cfg = default_sys();
  ClusterSpec cs;
  cs.visible_radius_m = 1e-6;
  EpisodeState st = init_episode(cfg, cs, 3);
  st.ue.position = {50.0, 20.0};
  PathSet paths = snapshot_paths(st);
  CHECK(paths.clusters.empty());
}

TEST_CASE("Ricean split is exact with and without shadow fading") {
  SystemConfig cfg = default_sys();
  ClusterSpec cs;
  cs.ricean_k_db = 8.0;

  for (double sf : {0.0, 4.0}) {
    cs.shadow_sigma_db = sf;
    // Make every group visible so several clusters share the split.
    cs.visible_radius_m = 300.0;
    EpisodeState st = init_episode(cfg, cs, 5);
    PathSet paths = snapshot_paths(st);
    REQUIRE(paths.clusters.size() > 1);
    CHECK(paths.nlos_linear_power() / paths.los_linear_power() ==
          doctest::Approx(std::pow(10.0, -0.8)).epsilon(1e-9));
  }
}

TEST_CASE("per-path draws are redrawn per step but structured") {
  SystemConfig cfg = default_sys();
  ClusterSpec cs;
  cs.visible_radius_m = 300.0;
  EpisodeState st = init_episode(cfg, cs, 9);
  PathSet p0 = snapshot_paths(st);
  EpisodeState st1 = advance(st, cfg.training_period_s);
  PathSet p1 = snapshot_paths(st1);
  REQUIRE(!p0.clusters.empty());
  REQUIRE(!p1.clusters.empty());
  // Large-scale AoD moves continuously; fast fading decorrelates.
  CHECK(p0.clusters[0].aod_rad == doctest::Approx(p1.clusters[0].aod_rad).epsilon(0.1));
  CHECK(p0.clusters[0].gains[0] != p1.clusters[0].gains[0]);
  for (const auto& c : p0.clusters) {
    for (double off : c.aod_offsets_rad) {
      CHECK(std::abs(off) <= cs.aod_spread_rad / 2.0 + 1e-15);
    }
  }
}

TEST_CASE("config invariants are enforced") {
  SystemConfig cfg = default_sys();
  cfg.n_tx = 63;  // not divisible by s_tx = 4
  ClusterSpec cs;
  CHECK_THROWS_AS(init_episode(cfg, cs), std::invalid_argument);
  cfg = default_sys();
  cfg.coverage_tx_rad = 4.0;  // > pi
  CHECK_THROWS_AS(init_episode(cfg, cs), std::invalid_argument);
  cfg = default_sys();
  cs.n_paths = 0;
  CHECK_THROWS_AS(init_episode(cfg, cs), std::invalid_argument);
}
