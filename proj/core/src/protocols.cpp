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

#include "beamsim/protocols.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace beamsim {

namespace {

cd measure(const ChannelMatrix& h, std::span<const cd> beam,
           const MeasurementContext& ctx, uint32_t t, BeamDomain domain, int index) {
  return receive_keyed(h, beam, ctx.tx_power_mw, ctx.noise, ctx.stream, t, domain,
                       static_cast<uint32_t>(index));
}

int argmax_power(std::span<const cd> values) {
  int best = 0;
  double best_p = std::norm(values[0]);
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    double p = std::norm(values[i]);
    if (p > best_p) {
      best_p = p;
      best = i;
    }
  }
  return best;
}

}  // namespace

std::vector<int> top_k_indices(std::span<const double> values, int k) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  order.resize(std::min<size_t>(order.size(), static_cast<size_t>(std::max(k, 0))));
  std::sort(order.begin(), order.end());
  return order;
}

MeasurementVector sweep_full_wide(const ChannelMatrix& h_wide, const Codebook& wide,
                                  const MeasurementContext& ctx, uint32_t t) {
  std::vector<int> all(wide.size());
  std::iota(all.begin(), all.end(), 0);
  return sweep_partial_wide(h_wide, wide, all, ctx, t);
}

MeasurementVector sweep_partial_wide(const ChannelMatrix& h_wide, const Codebook& wide,
                                     const std::vector<int>& indices,
                                     const MeasurementContext& ctx, uint32_t t) {
  if (indices.empty()) throw std::invalid_argument("partial sweep needs >= 1 index");
  if (h_wide.cols != wide.antennas)
    throw std::invalid_argument("sub-channel width does not match wide codebook");
  MeasurementVector out;
  out.t = t;
  out.values.assign(wide.size(), cd(0.0, 0.0));
  out.mask.assign(wide.size(), 0);
  for (int m : indices) {
    if (m < 0 || m >= wide.size()) throw std::invalid_argument("sweep index out of range");
    if (out.mask[m]) continue;
    out.values[m] = measure(h_wide, wide.beam(m), ctx, t, BeamDomain::wide, m);
    out.mask[m] = 1;
    ++out.budget_used;
  }
  return out;
}

SearchResult exhaustive_search(const ChannelMatrix& h, const Codebook& narrow,
                               const MeasurementContext& ctx, uint32_t t) {
  SearchResult res;
  res.measured.resize(narrow.size());
  res.values.resize(narrow.size());
  for (int m = 0; m < narrow.size(); ++m) {
    res.measured[m] = m;
    res.values[m] = measure(h, narrow.beam(m), ctx, t, BeamDomain::narrow, m);
  }
  res.index = argmax_power(res.values);
  res.budget = narrow.size();
  return res;
}

SearchResult two_level_search(const ChannelMatrix& h, const ChannelMatrix& h_wide,
                              const Codebook& narrow, const Codebook& wide,
                              const MeasurementContext& ctx, uint32_t t) {
  MeasurementVector sweep = sweep_full_wide(h_wide, wide, ctx, t);
  const int wide_winner = argmax_power(sweep.values);
  const int s = wide.subsample;

  SearchResult res;
  res.budget = sweep.budget_used + s;
  for (int m = 0; m < sweep.size(); ++m) {
    res.measured.push_back(m);  // wide stage, logged with wide indexing
    res.values.push_back(sweep.values[m]);
  }
  int best = wide_winner * s;
  double best_p = -1.0;
  for (int j = 0; j < s; ++j) {
    int m = wide_winner * s + j;
    cd y = measure(h, narrow.beam(m), ctx, t, BeamDomain::narrow, m);
    res.measured.push_back(m);
    res.values.push_back(y);
    if (std::norm(y) > best_p) {
      best_p = std::norm(y);
      best = m;
    }
  }
  res.index = best;
  return res;
}

PairSearchResult interactive_search(const ChannelMatrix& h, const Codebook& tx_narrow,
                                    const Codebook& rx_narrow,
                                    const MeasurementContext& ctx, uint32_t t) {
  PairSearchResult res;

  // Transmit stage: omnidirectional receive, realized on the first antenna.
  std::vector<cd> omni(h.rows, cd(0.0, 0.0));
  omni[0] = cd(1.0, 0.0);
  std::vector<cd> tx_values(tx_narrow.size());
  for (int m = 0; m < tx_narrow.size(); ++m) {
    std::vector<cd> hf = h.apply(tx_narrow.beam(m));
    cd clean = std::sqrt(ctx.tx_power_mw) * hf[0];
    cd noise = ctx.noise.sigma2_mw > 0.0
                   ? std::sqrt(ctx.noise.sigma2_mw) *
                         ctx.stream.complex_gaussian(t, BeamDomain::narrow, m)
                   : cd(0.0, 0.0);
    tx_values[m] = clean + noise;
  }
  res.tx_index = argmax_power(tx_values);
  res.budget = tx_narrow.size();
  res.rx_index = 0;
  if (h.rows == 1) return res;

  // Receive stage with the winning transmit beam.
  std::vector<cd> hf = h.apply(tx_narrow.beam(res.tx_index));
  std::vector<cd> rx_values(rx_narrow.size());
  for (int n = 0; n < rx_narrow.size(); ++n) {
    std::span<const cd> w = rx_narrow.beam(n);
    cd combined(0.0, 0.0);
    for (int r = 0; r < h.rows; ++r) combined += std::conj(w[r]) * hf[r];
    cd noise = ctx.noise.sigma2_mw > 0.0
                   ? std::sqrt(ctx.noise.sigma2_mw) *
                         ctx.stream.complex_gaussian(t, BeamDomain::narrow,
                                                     0x10000u + n)
                   : cd(0.0, 0.0);
    rx_values[n] = std::sqrt(ctx.tx_power_mw) * combined + noise;
  }
  res.rx_index = argmax_power(rx_values);
  res.budget += rx_narrow.size();
  return res;
}

SearchResult refine_topk(const ChannelMatrix& h, const Codebook& narrow,
                         std::span<const double> probs, int k_n,
                         const MeasurementContext& ctx, uint32_t t) {
  std::vector<cd> z(narrow.size());
  for (int m = 0; m < narrow.size(); ++m) z[m] = h.apply(narrow.beam(m))[0];
  return refine_topk_from_responses(z, probs, k_n, ctx, t);
}

SearchResult refine_topk_from_responses(std::span<const cd> z,
                                        std::span<const double> probs, int k_n,
                                        const MeasurementContext& ctx, uint32_t t) {
  if (probs.size() != z.size())
    throw std::invalid_argument("probability vector length must match beam count");
  if (k_n < 0) throw std::invalid_argument("k_n must be >= 0");

  SearchResult res;
  if (k_n == 0) {
    auto it = std::max_element(probs.begin(), probs.end());
    res.index = static_cast<int>(it - probs.begin());
    res.budget = 0;
    return res;
  }

  std::vector<int> picks = top_k_indices(probs, std::min<int>(k_n, probs.size()));
  double best_p = -1.0;
  for (int m : picks) {
    cd y = std::sqrt(ctx.tx_power_mw) * z[m];
    if (ctx.noise.sigma2_mw > 0.0) {
      y += std::sqrt(ctx.noise.sigma2_mw) *
           ctx.stream.complex_gaussian(t, BeamDomain::narrow, static_cast<uint32_t>(m));
    }
    res.measured.push_back(m);
    res.values.push_back(y);
    if (std::norm(y) > best_p) {
      best_p = std::norm(y);
      res.index = m;
    }
  }
  res.budget = static_cast<int>(picks.size());
  return res;
}

}  // namespace beamsim
