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

#include "beamsim/codebook.hpp"

#include <stdexcept>

namespace beamsim {

Codebook narrow_codebook(int m_antennas, int n_beams, double coverage_rad) {
  if (n_beams < 1) throw std::invalid_argument("codebook needs >= 1 beams");
  if (coverage_rad <= 0.0 || coverage_rad > pi)
    throw std::invalid_argument("coverage must be in (0, pi]");
  Codebook cb;
  cb.kind = BeamKind::narrow;
  cb.antennas = m_antennas;
  cb.subsample = 1;
  cb.coverage = coverage_rad;
  cb.directions.resize(n_beams);
  cb.beams.resize(n_beams);
  for (int m = 1; m <= n_beams; ++m) {
    double dir = -coverage_rad / 2.0 +
                 (2.0 * m - 1.0) / (2.0 * n_beams) * coverage_rad;
    cb.directions[m - 1] = dir;
    cb.beams[m - 1] = steering_vector(dir, m_antennas);
  }
  return cb;
}

Codebook wide_codebook(int m_antennas, int n_beams, int subsample, double coverage_rad) {
  if (subsample < 1) throw std::invalid_argument("subsample must be >= 1");
  if (m_antennas % subsample != 0 || n_beams % subsample != 0)
    throw std::invalid_argument("antenna and beam counts must divide by subsample");
  if (coverage_rad <= 0.0 || coverage_rad > pi)
    throw std::invalid_argument("coverage must be in (0, pi]");
  Codebook cb;
  cb.kind = subsample == 1 ? BeamKind::narrow : BeamKind::wide;
  cb.antennas = m_antennas / subsample;
  cb.subsample = subsample;
  cb.coverage = coverage_rad;
  const int n_wide = n_beams / subsample;
  cb.directions.resize(n_wide);
  cb.beams.resize(n_wide);
  for (int m = 1; m <= n_wide; ++m) {
    double dir = -coverage_rad / 2.0 +
                 (2.0 * m - 1.0) / (2.0 * n_beams) * subsample * coverage_rad;
    cb.directions[m - 1] = dir;
    cb.beams[m - 1] = steering_vector(dir, cb.antennas);
  }
  return cb;
}

cd leakage_gain(double phi_rad, int beam_index, const Codebook& cb) {
  if (beam_index < 0 || beam_index >= cb.size())
    throw std::invalid_argument("beam index out of range");
  const int m_ant = cb.antennas;
  const double x = std::sin(cb.directions[beam_index]) - std::sin(phi_rad);

  // x is confined to [-2, 2]; the denominator vanishes only at even integers,
  // where the sum of phases collapses to exactly 1.
  if (x == 0.0 || x == 2.0 || x == -2.0) return cd(1.0, 0.0);

  const double half_m_x = 0.5 * m_ant * x;
  if (half_m_x == std::round(half_m_x)) return cd(0.0, 0.0);  // Dirichlet null

  double magnitude = std::sin(pi * half_m_x) / (m_ant * std::sin(pi * x / 2.0));
  double phase = pi * (m_ant - 1) * x / 2.0;
  return magnitude * cd(std::cos(phase), std::sin(phase));
}

int best_beam_oracle(const ChannelMatrix& H, const Codebook& cb) {
  if (cb.size() < 1) throw std::invalid_argument("empty codebook");
  if (H.cols != cb.antennas)
    throw std::invalid_argument("channel width does not match codebook antennas");
  int best = 0;
  double best_energy = H.beam_energy(cb.beam(0));
  for (int m = 1; m < cb.size(); ++m) {
    double e = H.beam_energy(cb.beam(m));
    if (e > best_energy) {
      best_energy = e;
      best = m;
    }
  }
  return best;
}

}  // namespace beamsim
