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

#ifndef BEAMSIM_SCENARIO_HPP
#define BEAMSIM_SCENARIO_HPP

#include <cstdint>
#include <vector>

#include "beamsim/common.hpp"

namespace beamsim {

/// System-level parameters: array geometry, codebook sizes, link budget and
/// the beam-training schedule. Validated by validate().
struct SystemConfig {
  double carrier_hz = 28e9;       // f_c
  double bandwidth_hz = 2e6;      // W
  int m_tx = 64;                  // BS antennas
  int m_rx = 1;                   // UE antennas
  int n_tx = 64;                  // candidate narrow beams at BS
  int n_rx = 1;                   // candidate narrow beams at UE
  int s_tx = 4;                   // narrow beams per wide beam, BS side
  int s_rx = 1;                   // narrow beams per wide beam, UE side
  double coverage_tx_rad = pi;    // angular coverage at BS
  double coverage_rx_rad = pi;    // angular coverage at UE
  double tx_power_dbm = 15.0;     // P
  double noise_figure_db = 6.0;   // N_F
  bool noise_disabled = false;    // zero noise power (ablations, oracles)
  double training_period_s = 0.1; // tau
  int trainings_per_episode = 10; // T
  double beam_duration_s = 1e-4;  // t_s, time of one beam measurement
  double cell_radius_m = 100.0;   // r
  uint64_t rng_seed = 1;

  // UE motion model: speed and acceleration drawn uniformly per episode,
  // heading fixed (rectilinear motion).
  double speed_min_mps = 10.0;
  double speed_max_mps = 50.0;
  double accel_min_mps2 = -8.0;
  double accel_max_mps2 = 8.0;

  int n_wide_tx() const { return n_tx / s_tx; }
  int n_wide_rx() const { return n_rx / s_rx; }

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

/// Far-scatterer group parameters shared by all groups of an episode; group
/// centers are drawn per episode. `center` is set on the per-episode copies.
struct ClusterSpec {
  Vec2 center{};
  double visible_radius_m = 40.0;   // r_v
  int n_paths = 20;                 // L_c
  double aod_spread_rad = 2.4 * pi / 180.0;  // total spread within a cluster
  double delay_spread_s = 5e-9;     // read from config, unused (narrowband)
  double shadow_sigma_db = 4.0;     // sigma_SF
  double ricean_k_db = 8.0;         // K_R
  int n_groups = 15;                // n_g

  void validate() const;
};

/// UE kinematic state.
struct UEMotion {
  Vec2 position{};
  double speed_mps = 0.0;
  double accel_mps2 = 0.0;
  double heading_rad = 0.0;
};

/// One scatterer group instance: drawn center plus its per-episode
/// shadow-fading weight (linear, log-normal before renormalization).
struct ScattererGroup {
  Vec2 center{};
  double shadow_weight = 1.0;
};

/// Immutable world snapshot: advance() returns a new state.
struct EpisodeState {
  SystemConfig sys;
  ClusterSpec clusters;
  UEMotion ue;
  std::vector<ScattererGroup> groups;
  uint64_t seed = 0;   // episode stream seed (also keys measurement noise)
  uint32_t step = 0;   // number of advance() calls so far
  double time_s = 0.0;
};

/// LOS path parameters. Pathloss is in dB; the complex gain has unit
/// magnitude with a per-snapshot random phase.
struct LosPath {
  double aod_rad = 0.0;
  double aoa_rad = 0.0;
  double pathloss_db = 0.0;
  cd gain{1.0, 0.0};
};

/// One active scatterer cluster: mean angles plus per-path offsets/gains.
struct ClusterPaths {
  double aod_rad = 0.0;
  double aoa_rad = 0.0;
  double pathloss_db = 0.0;
  std::vector<double> aod_offsets_rad;
  std::vector<double> aoa_offsets_rad;
  std::vector<cd> gains;  // CN(0,1) per path
};

struct PathSet {
  LosPath los;
  std::vector<ClusterPaths> clusters;

  /// Sum over clusters of the linear large-scale power 1/rho_c.
  double nlos_linear_power() const;
  /// Linear large-scale LOS power 1/rho_LOS.
  double los_linear_power() const;
};

/// Free-space-style pathloss in dB; distance floored at 1 m.
double pathloss_db(double distance_m, double carrier_hz);

/// Draws UE position/motion and scatterer-group centers. Deterministic in
/// (cfg, cluster_cfg, cfg.rng_seed).
EpisodeState init_episode(const SystemConfig& cfg, const ClusterSpec& cluster_cfg);

/// Same as init_episode but with an explicit episode seed (parallel dataset
/// generation uses seed = base + episode index).
EpisodeState init_episode(const SystemConfig& cfg, const ClusterSpec& cluster_cfg,
                          uint64_t seed);

/// Rectilinear update over dt seconds with specular reflection at the cell
/// boundary. Returns the advanced state; the input is untouched.
EpisodeState advance(const EpisodeState& state, double dt_s);

/// Current path parameters: LOS toward the UE plus every cluster whose
/// visible region contains the UE. Pure function of the state.
PathSet snapshot_paths(const EpisodeState& state);

}  // namespace beamsim

#endif
