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

#include "beamsim/channel.hpp"

#include <cassert>
#include <stdexcept>

namespace beamsim {

std::vector<cd> ChannelMatrix::apply(std::span<const cd> f) const {
  assert(static_cast<int>(f.size()) == cols);
  std::vector<cd> out(rows, cd(0.0, 0.0));
  for (int r = 0; r < rows; ++r) {
    cd acc(0.0, 0.0);
    const cd* row = h.data() + static_cast<size_t>(r) * cols;
    for (int c = 0; c < cols; ++c) acc += row[c] * f[c];
    out[r] = acc;
  }
  return out;
}

double ChannelMatrix::beam_energy(std::span<const cd> f) const {
  double e = 0.0;
  for (const cd& v : apply(f)) e += std::norm(v);
  return e;
}

NoiseModel NoiseModel::from_config(const SystemConfig& cfg) {
  double sigma2_dbm = -174.0 + 10.0 * std::log10(cfg.bandwidth_hz) + cfg.noise_figure_db;
  return NoiseModel{dbm_to_mw(sigma2_dbm)};
}

std::vector<cd> steering_vector(double angle_rad, int n_antennas) {
  if (n_antennas < 1) throw std::invalid_argument("steering vector needs >= 1 antennas");
  std::vector<cd> a(n_antennas);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_antennas));
  const double step = pi * std::sin(angle_rad);
  for (int k = 0; k < n_antennas; ++k) {
    a[k] = scale * cd(std::cos(step * k), std::sin(step * k));
  }
  return a;
}

namespace {

// Adds coef * a_rx(aoa) * a_tx(aod)^H to dst (row-major m_rx x m_tx).
void add_rank_one(std::vector<cd>& dst, cd coef, double aoa, double aod,
                  int m_tx, int m_rx) {
  std::vector<cd> arx = steering_vector(aoa, m_rx);
  std::vector<cd> atx = steering_vector(aod, m_tx);
  for (int r = 0; r < m_rx; ++r) {
    cd left = coef * arx[r];
    cd* row = dst.data() + static_cast<size_t>(r) * m_tx;
    for (int c = 0; c < m_tx; ++c) row[c] += left * std::conj(atx[c]);
  }
}

}  // namespace

ChannelMatrix assemble(const PathSet& paths, int m_tx, int m_rx) {
  if (m_tx < 1 || m_rx < 1) throw std::invalid_argument("assemble() needs >= 1 antennas");
  ChannelMatrix H;
  H.rows = m_rx;
  H.cols = m_tx;
  const size_t n = static_cast<size_t>(m_rx) * m_tx;
  H.h_los.assign(n, cd(0.0, 0.0));
  H.h_nlos.assign(n, cd(0.0, 0.0));

  const double mm = static_cast<double>(m_tx) * m_rx;
  cd los_coef = std::sqrt(mm / db_to_linear(paths.los.pathloss_db)) * paths.los.gain;
  add_rank_one(H.h_los, los_coef, paths.los.aoa_rad, paths.los.aod_rad, m_tx, m_rx);

  for (const auto& c : paths.clusters) {
    const double cluster_scale =
        std::sqrt(mm / db_to_linear(c.pathloss_db)) / std::sqrt(double(c.gains.size()));
    for (size_t l = 0; l < c.gains.size(); ++l) {
      add_rank_one(H.h_nlos, cluster_scale * c.gains[l],
                   c.aoa_rad + c.aoa_offsets_rad[l],
                   c.aod_rad + c.aod_offsets_rad[l], m_tx, m_rx);
    }
  }

  H.h.resize(n);
  for (size_t i = 0; i < n; ++i) H.h[i] = H.h_los[i] + H.h_nlos[i];
  return H;
}

ChannelMatrix assemble(const PathSet& paths, const SystemConfig& cfg) {
  return assemble(paths, cfg.m_tx, cfg.m_rx);
}

ChannelMatrix wide_subchannel(const PathSet& paths, const SystemConfig& cfg) {
  return assemble(paths, cfg.m_tx / cfg.s_tx, cfg.m_rx / cfg.s_rx);
}

cd receive(const ChannelMatrix& H, std::span<const cd> f, double tx_power_mw,
           const NoiseModel& noise, Rng& rng) {
  if (H.rows != 1)
    throw std::invalid_argument("single-output receive() needs a 1-row channel");
  cd clean = std::sqrt(tx_power_mw) * H.apply(f)[0];
  if (noise.sigma2_mw <= 0.0) return clean;
  return clean + std::sqrt(noise.sigma2_mw) * rng.cgaussian();
}

cd receive(const ChannelMatrix& H, std::span<const cd> f, std::span<const cd> w,
           double tx_power_mw, const NoiseModel& noise, Rng& rng) {
  if (static_cast<int>(w.size()) != H.rows)
    throw std::invalid_argument("combiner length must match receive antennas");
  std::vector<cd> hf = H.apply(f);
  cd combined(0.0, 0.0);
  for (int r = 0; r < H.rows; ++r) combined += std::conj(w[r]) * hf[r];
  cd clean = std::sqrt(tx_power_mw) * combined;
  if (noise.sigma2_mw <= 0.0) return clean;
  // w^H n with n ~ CN(0, sigma2 I) and ||w|| = 1 is CN(0, sigma2).
  return clean + std::sqrt(noise.sigma2_mw) * rng.cgaussian();
}

cd receive_keyed(const ChannelMatrix& H, std::span<const cd> f, double tx_power_mw,
                 const NoiseModel& noise, const NoiseStream& stream, uint32_t t,
                 BeamDomain domain, uint32_t beam_index) {
  if (H.rows != 1)
    throw std::invalid_argument("keyed receive() needs a 1-row channel");
  cd clean = std::sqrt(tx_power_mw) * H.apply(f)[0];
  if (noise.sigma2_mw <= 0.0) return clean;
  return clean + std::sqrt(noise.sigma2_mw) * stream.complex_gaussian(t, domain, beam_index);
}

}  // namespace beamsim
