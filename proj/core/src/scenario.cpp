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

#include "beamsim/scenario.hpp"

#include <algorithm>
#include <stdexcept>

#include "beamsim/rng.hpp"

namespace beamsim {

namespace {

// Stream tags separating the episode-init draws from per-snapshot draws.
constexpr uint64_t kInitTag = 0x5ce7a210e11235a1ULL;
constexpr uint64_t kPathTag = 0x9e3779b97f4a7c15ULL;

Rng init_stream(uint64_t seed) { return Rng(mix64(seed ^ kInitTag)); }
Rng path_stream(uint64_t seed, uint32_t step) {
  return Rng(mix64(seed ^ kPathTag ^ (uint64_t(step) << 1)));
}

}  // namespace

void SystemConfig::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  require(m_tx >= 1 && m_rx >= 1 && n_tx >= 1 && n_rx >= 1 && s_tx >= 1 && s_rx >= 1,
          "antenna and beam counts must be >= 1");
  require(n_tx % s_tx == 0, "n_tx must be divisible by s_tx");
  require(n_rx % s_rx == 0, "n_rx must be divisible by s_rx");
  require(m_tx % s_tx == 0, "m_tx must be divisible by s_tx");
  require(m_rx % s_rx == 0, "m_rx must be divisible by s_rx");
  require(coverage_tx_rad > 0.0 && coverage_tx_rad <= pi,
          "coverage_tx_rad must be in (0, pi]");
  require(coverage_rx_rad > 0.0 && coverage_rx_rad <= pi,
          "coverage_rx_rad must be in (0, pi]");
  require(carrier_hz > 0.0 && bandwidth_hz > 0.0, "carrier and bandwidth must be positive");
  require(training_period_s > 0.0 && beam_duration_s > 0.0,
          "training period and beam duration must be positive");
  require(trainings_per_episode >= 1, "trainings_per_episode must be >= 1");
  require(cell_radius_m > 0.0, "cell radius must be positive");
  require(speed_min_mps >= 0.0 && speed_max_mps >= speed_min_mps, "bad speed range");
  require(accel_max_mps2 >= accel_min_mps2, "bad acceleration range");
}

void ClusterSpec::validate() const {
  if (visible_radius_m <= 0.0) throw std::invalid_argument("visible radius must be > 0");
  if (n_paths < 1) throw std::invalid_argument("paths per cluster must be >= 1");
  if (aod_spread_rad < 0.0) throw std::invalid_argument("AoD spread must be >= 0");
  if (n_groups < 0) throw std::invalid_argument("group count must be >= 0");
}

double pathloss_db(double distance_m, double carrier_hz) {
  double d = std::max(distance_m, 1.0);
  return 26.0 * std::log10(d) + 20.0 * std::log10(carrier_hz) - 147.56;
}

double PathSet::los_linear_power() const {
  return 1.0 / db_to_linear(los.pathloss_db);
}

double PathSet::nlos_linear_power() const {
  double total = 0.0;
  for (const auto& c : clusters) total += 1.0 / db_to_linear(c.pathloss_db);
  return total;
}

EpisodeState init_episode(const SystemConfig& cfg, const ClusterSpec& cluster_cfg) {
  return init_episode(cfg, cluster_cfg, cfg.rng_seed);
}

EpisodeState init_episode(const SystemConfig& cfg, const ClusterSpec& cluster_cfg,
                          uint64_t seed) {
  cfg.validate();
  cluster_cfg.validate();

  Rng rng = init_stream(seed);
  EpisodeState st;
  st.sys = cfg;
  st.clusters = cluster_cfg;
  st.seed = seed;

  // Uniform position in the disc of radius r.
  double radius = cfg.cell_radius_m * std::sqrt(rng.uniform());
  double angle = rng.uniform(0.0, 2.0 * pi);
  st.ue.position = {radius * std::cos(angle), radius * std::sin(angle)};
  st.ue.heading_rad = rng.uniform(0.0, 2.0 * pi);
  st.ue.speed_mps = rng.uniform(cfg.speed_min_mps, cfg.speed_max_mps);
  st.ue.accel_mps2 = rng.uniform(cfg.accel_min_mps2, cfg.accel_max_mps2);

  st.groups.resize(cluster_cfg.n_groups);
  for (auto& g : st.groups) {
    double gr = cfg.cell_radius_m * std::sqrt(rng.uniform());
    double ga = rng.uniform(0.0, 2.0 * pi);
    g.center = {gr * std::cos(ga), gr * std::sin(ga)};
  }
  for (auto& g : st.groups) {
    g.shadow_weight = db_to_linear(cluster_cfg.shadow_sigma_db * rng.gaussian());
  }
  return st;
}

EpisodeState advance(const EpisodeState& state, double dt_s) {
  if (dt_s <= 0.0) throw std::invalid_argument("advance() needs dt > 0");

  EpisodeState st = state;
  const double r = st.sys.cell_radius_m;
  double distance = st.ue.speed_mps * dt_s + 0.5 * st.ue.accel_mps2 * dt_s * dt_s;
  Vec2 dir{std::cos(st.ue.heading_rad), std::sin(st.ue.heading_rad)};
  Vec2 pos = st.ue.position;

  if (distance < 0.0) {  // decelerated past standstill within dt
    dir = dir * -1.0;
    distance = -distance;
  }

  // Walk the remaining distance, reflecting the heading specularly whenever
  // the segment crosses the cell boundary.
  int guard = 0;
  while (distance > 0.0 && guard++ < 64) {
    Vec2 cand = pos + dir * distance;
    if (cand.norm() <= r) {
      pos = cand;
      break;
    }
    // Smallest s > 0 with |pos + s*dir| = r.
    double b = pos.dot(dir);
    double c = pos.dot(pos) - r * r;
    double disc = std::max(b * b - c, 0.0);
    double s = -b + std::sqrt(disc);
    s = std::clamp(s, 0.0, distance);
    pos = pos + dir * s;
    distance -= s;
    Vec2 normal = pos * (1.0 / std::max(pos.norm(), 1e-12));
    double dn = dir.dot(normal);
    dir = dir - normal * (2.0 * dn);
    // Nudge inward so the next segment starts strictly inside.
    pos = normal * (r * (1.0 - 1e-12));
  }

  st.ue.position = pos;
  st.ue.heading_rad = std::atan2(dir.y, dir.x);
  st.ue.speed_mps = std::max(st.ue.speed_mps + st.ue.accel_mps2 * dt_s, 0.0);
  st.step = state.step + 1;
  st.time_s = state.time_s + dt_s;
  return st;
}

PathSet snapshot_paths(const EpisodeState& state) {
  Rng rng = path_stream(state.seed, state.step);
  const ClusterSpec& cs = state.clusters;
  PathSet out;

  const Vec2 ue = state.ue.position;
  const double d_los = ue.norm();
  out.los.aod_rad = azimuth(ue);
  out.los.aoa_rad = azimuth(Vec2{-ue.x, -ue.y});  // BS as seen from the UE
  out.los.pathloss_db = pathloss_db(d_los, state.sys.carrier_hz);
  double los_phase = rng.uniform(0.0, 2.0 * pi);
  out.los.gain = cd(std::cos(los_phase), std::sin(los_phase));

  // Active clusters and the Ricean power split: relative shadow weights are
  // renormalized so the active-cluster powers sum to LOS power * 10^(-K_R/10).
  double weight_sum = 0.0;
  std::vector<int> active;
  for (int i = 0; i < static_cast<int>(state.groups.size()); ++i) {
    Vec2 delta = ue - state.groups[i].center;
    if (delta.norm() <= cs.visible_radius_m) {
      active.push_back(i);
      weight_sum += state.groups[i].shadow_weight;
    }
  }

  const double los_lin = 1.0 / db_to_linear(out.los.pathloss_db);
  const double nlos_total = los_lin * db_to_linear(-cs.ricean_k_db);

  for (int i : active) {
    const ScattererGroup& g = state.groups[i];
    ClusterPaths c;
    c.aod_rad = azimuth(g.center);
    c.aoa_rad = azimuth(g.center - ue);
    double p_lin = nlos_total * (g.shadow_weight / weight_sum);
    c.pathloss_db = -linear_to_db(p_lin);
    c.aod_offsets_rad.resize(cs.n_paths);
    c.aoa_offsets_rad.resize(cs.n_paths);
    c.gains.resize(cs.n_paths);
    for (int l = 0; l < cs.n_paths; ++l) {
      c.aod_offsets_rad[l] = rng.uniform(-cs.aod_spread_rad / 2.0, cs.aod_spread_rad / 2.0);
      c.aoa_offsets_rad[l] = rng.uniform(-cs.aod_spread_rad / 2.0, cs.aod_spread_rad / 2.0);
      c.gains[l] = rng.cgaussian();
    }
    out.clusters.push_back(std::move(c));
  }
  return out;
}

}  // namespace beamsim
