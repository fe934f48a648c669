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

#include "beamsim/metrics.hpp"

#include <algorithm>

namespace beamsim {

double gain_normalized(const ChannelMatrix& h, int chosen, int oracle,
                       const Codebook& cb) {
  double num = h.beam_energy(cb.beam(chosen));
  double den = h.beam_energy(cb.beam(oracle));
  if (den <= 0.0) return 0.0;
  return num / den;
}

double overhead_factor(double tau_s, int budget, double t_s, double t_tot_s) {
  double t_tra = (t_tot_s / tau_s) * budget * t_s;
  double factor = (t_tot_s - t_tra) / t_tot_s;
  return std::max(factor, 0.0);
}

double spectral_efficiency(double chosen_power, double tx_power_mw, double sigma2_mw,
                           double tau_s, int budget, double t_s, double t_tot_s) {
  double factor = overhead_factor(tau_s, budget, t_s, t_tot_s);
  if (factor <= 0.0) return 0.0;
  double snr = sigma2_mw > 0.0 ? tx_power_mw * chosen_power / sigma2_mw
                               : std::numeric_limits<double>::infinity();
  if (!std::isfinite(snr)) return factor * 64.0;  // noise-free guard, ~2^64 cap
  return factor * std::log2(1.0 + snr);
}

double EvalReport::g_n_mean() const {
  double sum = 0.0;
  for (double v : g_n_per_t) sum += v;
  return g_n_per_t.empty() ? 0.0 : sum / g_n_per_t.size();
}

double EvalReport::g_n_converged() const {
  if (g_n_per_t.empty()) return 0.0;
  const int from = std::min<int>(5, static_cast<int>(g_n_per_t.size()) - 1);
  double sum = 0.0;
  int count = 0;
  for (int t = from; t < static_cast<int>(g_n_per_t.size()); ++t) {
    sum += g_n_per_t[t];
    ++count;
  }
  return sum / count;
}

double EvalReport::loss_n_mean() const {
  double sum = 0.0;
  for (double v : loss_n_per_t) sum += v;
  return loss_n_per_t.empty() ? 0.0 : sum / loss_n_per_t.size();
}

double EvalReport::se_mean() const {
  double sum = 0.0;
  for (double v : se_per_t) sum += v;
  return se_per_t.empty() ? 0.0 : sum / se_per_t.size();
}

namespace detail {

void accumulate_step(const Dataset& ds, const EpisodeSample& sample, int t,
                     std::span<const double> probs, int wide_budget, int k_n,
                     const EvalOptions& opts, StepAccum& acc, double* g_n_out) {
  const StepRecord& step = sample.steps[t];
  int chosen;
  if (k_n > 0) {
    MeasurementContext ctx = ds.context(sample);
    chosen = refine_topk_from_responses(step.narrow_clean, probs, k_n, ctx,
                                        static_cast<uint32_t>(t))
                 .index;
  } else {
    chosen = static_cast<int>(
        std::max_element(probs.begin(), probs.end()) - probs.begin());
  }

  const double oracle_gain = step.oracle_gain();
  const double chosen_power = std::norm(step.narrow_clean[chosen]);
  const double g_n = oracle_gain > 0.0 ? chosen_power / oracle_gain : 0.0;

  const double p_label = std::max(probs[step.narrow_label], 1e-300);
  const int budget = wide_budget + k_n;
  const double se = spectral_efficiency(
      chosen_power, ds.tx_power_mw(), ds.noise().sigma2_mw,
      ds.header.training_period_s, budget, ds.header.beam_duration_s, opts.t_tot_s);

  acc.g_n += g_n;
  acc.loss += -std::log(p_label);
  acc.se += se;
  acc.budget += budget;
  acc.count += 1;
  if (g_n_out != nullptr) *g_n_out = g_n;
}

EvalReport finalize(std::vector<StepAccum>& accs, std::vector<double>&& g_samples,
                    int n_sequences, int degenerate) {
  EvalReport rep;
  rep.steps = static_cast<int>(accs.size());
  rep.n_sequences = n_sequences;
  rep.degenerate_inputs = degenerate;
  for (const StepAccum& a : accs) {
    const double inv = a.count > 0 ? 1.0 / a.count : 0.0;
    rep.g_n_per_t.push_back(a.g_n * inv);
    rep.loss_n_per_t.push_back(a.loss * inv);
    rep.se_per_t.push_back(a.se * inv);
    rep.budget_per_t.push_back(a.budget * inv);
  }
  rep.g_n_samples = std::move(g_samples);
  return rep;
}

}  // namespace detail

EvalReport evaluate_power_ratio(const Dataset& ds, std::span<const int> indices,
                                const SchemeConfig& scfg, const EvalOptions& opts) {
  const int n_steps = static_cast<int>(ds.header.steps_per_sample);
  const int n_narrow = static_cast<int>(ds.header.n_narrow);
  const int n_wide = static_cast<int>(ds.header.n_wide);
  const Codebook narrow =
      narrow_codebook(ds.header.m_tx, n_narrow, ds.header.coverage_rad);
  const Codebook wide = wide_codebook(ds.header.m_tx, n_narrow, ds.header.s_tx,
                                      ds.header.coverage_rad);

  std::vector<detail::StepAccum> accs(n_steps);
  std::vector<double> g_samples;
  g_samples.reserve(indices.size() * n_steps);

  for (int idx : indices) {
    const EpisodeSample& sample = ds.samples[idx];
    for (int t = 0; t < n_steps; ++t) {
      MeasurementVector sweep;
      sweep.values = ds.wide_measurements(sample, t);
      sweep.mask.assign(n_wide, 1);
      sweep.t = static_cast<uint32_t>(t);
      sweep.budget_used = n_wide;
      const int estimate = baseline_power_ratio(sweep, wide, narrow);
      // Pseudo-probabilities rank beams by closeness to the estimate so the
      // generic top-K_n refinement path applies to this baseline too.
      std::vector<double> probs(n_narrow, 0.0);
      const double est_sin = std::sin(narrow.directions[estimate]);
      for (int m = 0; m < n_narrow; ++m)
        probs[m] = -std::abs(std::sin(narrow.directions[m]) - est_sin);
      probs[estimate] = 1.0;
      double g = 0.0;
      detail::accumulate_step(ds, sample, t, probs, n_wide, scfg.k_n_refine, opts,
                              accs[t], &g);
      g_samples.push_back(g);
    }
  }
  return detail::finalize(accs, std::move(g_samples),
                          static_cast<int>(indices.size()), 0);
}

}  // namespace beamsim
