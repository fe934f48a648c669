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

#ifndef BEAMSIM_CHANNEL_HPP
#define BEAMSIM_CHANNEL_HPP

#include <span>
#include <vector>

#include "beamsim/rng.hpp"
#include "beamsim/scenario.hpp"

namespace beamsim {

/// Complex channel matrix (rows = receive antennas, cols = transmit
/// antennas, row-major) with its LOS/NLOS decomposition kept alongside.
struct ChannelMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<cd> h;
  std::vector<cd> h_los;
  std::vector<cd> h_nlos;

  cd at(int r, int c) const { return h[static_cast<size_t>(r) * cols + c]; }

  /// H * f, length rows. f must have `cols` entries.
  std::vector<cd> apply(std::span<const cd> f) const;

  /// ||H f||_2^2, the receive-side energy of beam f.
  double beam_energy(std::span<const cd> f) const;
};

/// Receiver noise power. sigma2 = -174 dBm/Hz + 10*log10(W) + N_F.
struct NoiseModel {
  double sigma2_mw = 0.0;

  static NoiseModel from_config(const SystemConfig& cfg);
  /// Zero noise power (noise-free measurements).
  static NoiseModel disabled() { return NoiseModel{0.0}; }
  double sigma2_dbm() const { return mw_to_dbm(sigma2_mw); }
};

/// Half-wavelength ULA response: entry k = (1/sqrt(n)) * exp(j*pi*k*sin(angle)).
std::vector<cd> steering_vector(double angle_rad, int n_antennas);

/// Builds the channel matrix for the given antenna counts from a path set.
ChannelMatrix assemble(const PathSet& paths, int m_tx, int m_rx);

/// Convenience overload using the full array sizes of cfg.
ChannelMatrix assemble(const PathSet& paths, const SystemConfig& cfg);

/// Sub-channel over the first m_tx/s_tx transmit (and m_rx/s_rx receive)
/// antennas, as used for wide-beam training.
ChannelMatrix wide_subchannel(const PathSet& paths, const SystemConfig& cfg);

/// Noisy received sample y = sqrt(P) * w^H H f + w^H n for a unit-norm
/// receive combiner w (omitted for single-antenna receivers: w = [1]).
cd receive(const ChannelMatrix& H, std::span<const cd> f, double tx_power_mw,
           const NoiseModel& noise, Rng& rng);
cd receive(const ChannelMatrix& H, std::span<const cd> f, std::span<const cd> w,
           double tx_power_mw, const NoiseModel& noise, Rng& rng);

/// Same received sample but with the noise drawn from a keyed stream slot.
cd receive_keyed(const ChannelMatrix& H, std::span<const cd> f, double tx_power_mw,
                 const NoiseModel& noise, const NoiseStream& stream, uint32_t t,
                 BeamDomain domain, uint32_t beam_index);

}  // namespace beamsim

#endif
