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

#ifndef BEAMSIM_PROTOCOLS_HPP
#define BEAMSIM_PROTOCOLS_HPP

#include <cstdint>
#include <vector>

#include "beamsim/codebook.hpp"

namespace beamsim {

/// Received signals of one (possibly partial) wide-beam sweep. Unmeasured
/// entries are exactly zero and flagged false in the mask.
struct MeasurementVector {
  std::vector<cd> values;
  std::vector<uint8_t> mask;
  uint32_t t = 0;          // training index the sweep belongs to
  int budget_used = 0;     // beam measurements consumed

  int size() const { return static_cast<int>(values.size()); }
};

/// Everything a measurement needs besides the channel: transmit power, noise
/// power and the episode's keyed noise stream.
struct MeasurementContext {
  double tx_power_mw = 0.0;
  NoiseModel noise;
  NoiseStream stream;
};

/// Outcome of a beam-search protocol, with the per-measurement record kept
/// for trace logging.
struct SearchResult {
  int index = 0;
  int budget = 0;
  std::vector<int> measured;
  std::vector<cd> values;  // aligned with `measured`
};

struct PairSearchResult {
  int tx_index = 0;
  int rx_index = 0;
  int budget = 0;
};

/// Measures every wide codeword against the sub-channel.
MeasurementVector sweep_full_wide(const ChannelMatrix& h_wide, const Codebook& wide,
                                  const MeasurementContext& ctx, uint32_t t);

/// Measures only `indices` (0-based, unique); other entries stay exactly 0.
MeasurementVector sweep_partial_wide(const ChannelMatrix& h_wide, const Codebook& wide,
                                     const std::vector<int>& indices,
                                     const MeasurementContext& ctx, uint32_t t);

/// Brute-force search over all narrow beams on measured powers.
SearchResult exhaustive_search(const ChannelMatrix& h, const Codebook& narrow,
                               const MeasurementContext& ctx, uint32_t t);

/// Wide sweep first, then the narrow beams covered by the winning wide beam.
SearchResult two_level_search(const ChannelMatrix& h, const ChannelMatrix& h_wide,
                              const Codebook& narrow, const Codebook& wide,
                              const MeasurementContext& ctx, uint32_t t);

/// Transmit sweep with an omnidirectional receiver, then a receive sweep with
/// the winning transmit beam. The receive stage is skipped when m_rx == 1.
PairSearchResult interactive_search(const ChannelMatrix& h, const Codebook& tx_narrow,
                                    const Codebook& rx_narrow,
                                    const MeasurementContext& ctx, uint32_t t);

/// Measures the K_n narrow beams with the highest predicted probabilities and
/// returns the strongest; K_n = 0 returns argmax(probs) with zero budget.
SearchResult refine_topk(const ChannelMatrix& h, const Codebook& narrow,
                         std::span<const double> probs, int k_n,
                         const MeasurementContext& ctx, uint32_t t);

/// refine_topk on precomputed noise-free beam responses z
/// (z[m] = (H f_m) for the single-antenna receiver), using the same keyed
/// noise slots as the live version.
SearchResult refine_topk_from_responses(std::span<const cd> z,
                                        std::span<const double> probs, int k_n,
                                        const MeasurementContext& ctx, uint32_t t);

/// Indices of the k largest values, ties resolved toward the lower index,
/// result sorted ascending.
std::vector<int> top_k_indices(std::span<const double> values, int k);

}  // namespace beamsim

#endif
