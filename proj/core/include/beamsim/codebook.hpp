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

#ifndef BEAMSIM_CODEBOOK_HPP
#define BEAMSIM_CODEBOOK_HPP

#include <vector>

#include "beamsim/channel.hpp"

namespace beamsim {

enum class BeamKind { narrow, wide };

/// DFT codebook: unit-norm steering codewords at uniformly spaced directions.
/// Wide codebooks use antennas/subsample elements and cover `subsample`
/// narrow beams per codeword.
struct Codebook {
  BeamKind kind = BeamKind::narrow;
  int antennas = 0;      // elements per codeword
  int subsample = 1;     // s (1 for narrow codebooks)
  double coverage = pi;  // angular coverage Gamma
  std::vector<double> directions;   // strictly increasing, radians
  std::vector<std::vector<cd>> beams;

  int size() const { return static_cast<int>(beams.size()); }
  std::span<const cd> beam(int m) const { return beams[m]; }
};

/// N codewords over M antennas, directions -G/2 + (2m-1)G/(2N) for m = 1..N.
Codebook narrow_codebook(int m_antennas, int n_beams, double coverage_rad);

/// N/s wide codewords over M/s antennas, directions -G/2 + (2m-1)sG/(2N).
Codebook wide_codebook(int m_antennas, int n_beams, int subsample, double coverage_rad);

/// Analytic beamforming gain of codeword m toward AoD phi:
///   q_m(phi) = (1/M) sin(pi M x/2)/sin(pi x/2) * exp(j pi (M-1) x/2),
/// with x = sin(dir_m) - sin(phi). Removable singularities (x an even
/// integer) evaluate to their limit 1; exact Dirichlet nulls return 0.
cd leakage_gain(double phi_rad, int beam_index, const Codebook& cb);

/// Index of the codeword maximizing ||H f_m||^2; ties go to the lowest index.
int best_beam_oracle(const ChannelMatrix& H, const Codebook& cb);

}  // namespace beamsim

#endif
