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

#ifndef BEAMSIM_BASELINES_HPP
#define BEAMSIM_BASELINES_HPP

#include "beamsim/protocols.hpp"

namespace beamsim {

/// Model-free narrow-beam estimate from one wide sweep: picks the strongest
/// wide beam, inverts the analytic gain ratio against its stronger measured
/// neighbor to estimate sin(AoD), and maps to the nearest narrow direction.
/// Exact on noise-free single-path channels; degrades with noise/multipath.
int baseline_power_ratio(const MeasurementVector& sweep, const Codebook& wide,
                         const Codebook& narrow);

/// Narrow-beam indices measured by the uniformly-sampled-beam predictor:
/// every s_tx-th beam starting at the first (n_tx/s_tx beams total).
std::vector<int> sampled_beam_indices(int n_tx, int s_tx);

}  // namespace beamsim

#endif
