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

#ifndef BEAMSIM_METRICS_HPP
#define BEAMSIM_METRICS_HPP

#include "beamsim/baselines.hpp"
#include "beamsim/schemes.hpp"

namespace beamsim {

/// Normalized beamforming gain ||H f_chosen||^2 / ||H f_oracle||^2.
double gain_normalized(const ChannelMatrix& h, int chosen, int oracle,
                       const Codebook& cb);

/// Fraction of a session left for data after beam training: with budget
/// measurements of t_s seconds every tau seconds over t_tot,
/// (t_tot - t_tra)/t_tot, floored at zero.
double overhead_factor(double tau_s, int budget, double t_s, double t_tot_s);

/// Training-overhead-discounted Shannon rate for the chosen beam.
/// `chosen_power` is ||H f||^2 of the beam actually used.
double spectral_efficiency(double chosen_power, double tx_power_mw, double sigma2_mw,
                           double tau_s, int budget, double t_s, double t_tot_s);

/// Evaluation aggregates of one trained model (or baseline) over a split.
struct EvalReport {
  int steps = 0;
  int n_sequences = 0;
  std::vector<double> g_n_per_t;
  std::vector<double> loss_n_per_t;
  std::vector<double> se_per_t;
  std::vector<double> budget_per_t;
  std::vector<double> g_n_samples;  // per (sequence, t), for the gain CDF
  int degenerate_inputs = 0;

  double g_n_mean() const;
  /// Mean over the converged tail (training periods 6..T, 1-based).
  double g_n_converged() const;
  double loss_n_mean() const;
  double se_mean() const;
};

struct EvalOptions {
  double t_tot_s = 1.0;  // session length for the spectral-efficiency metric
};

/// Per-(sequence, step) evaluation of a recurrent scheme (lstm / adaptive /
/// enhanced) on stored episodes; closed-loop selections, optional top-K_n
/// refinement.
template <typename T>
EvalReport evaluate_recurrent(nn::RecurrentNet<T>& net, const Dataset& ds,
                              std::span<const int> indices, const SchemeConfig& scfg,
                              const EvalOptions& opts = {});

/// Evaluation of the memoryless CNN predictor (full wide sweep input) or the
/// sampled-narrow-beam variant.
template <typename T>
EvalReport evaluate_cnn(nn::CnnNet<T>& net, const Dataset& ds,
                        std::span<const int> indices, const SchemeConfig& scfg,
                        const EvalOptions& opts = {});

/// Evaluation of the model-free power-ratio baseline.
EvalReport evaluate_power_ratio(const Dataset& ds, std::span<const int> indices,
                                const SchemeConfig& scfg, const EvalOptions& opts = {});

// ---------------------------------------------------------------------------
// Implementation (templated paths).

namespace detail {

struct StepAccum {
  double g_n = 0.0, loss = 0.0, se = 0.0, budget = 0.0;
  int count = 0;
};

/// Applies optional refinement and accumulates the metrics of one
/// (sequence, step) prediction.
void accumulate_step(const Dataset& ds, const EpisodeSample& sample, int t,
                     std::span<const double> probs, int wide_budget, int k_n,
                     const EvalOptions& opts, StepAccum& acc, double* g_n_out);

EvalReport finalize(std::vector<StepAccum>& accs, std::vector<double>&& g_samples,
                    int n_sequences, int degenerate);

}  // namespace detail

template <typename T>
EvalReport evaluate_recurrent(nn::RecurrentNet<T>& net, const Dataset& ds,
                              std::span<const int> indices, const SchemeConfig& scfg,
                              const EvalOptions& opts) {
  const int n_steps = static_cast<int>(ds.header.steps_per_sample);
  const int n_narrow = static_cast<int>(ds.header.n_narrow);
  const int n_wide = static_cast<int>(ds.header.n_wide);
  std::vector<detail::StepAccum> accs(n_steps);
  std::vector<double> g_samples;
  g_samples.reserve(indices.size() * n_steps);
  int degenerate = 0;

  const int eval_batch = 256;
  for (size_t start = 0; start < indices.size(); start += eval_batch) {
    const size_t end = std::min(indices.size(), start + eval_batch);
    std::vector<int> chunk(indices.begin() + start, indices.begin() + end);
    BatchEpisodeRun<T> run = run_batch_episodes(net, ds, chunk, scfg, false);
    for (int t = 0; t < n_steps; ++t) {
      degenerate += run.degenerate_inputs[t];
      for (size_t b = 0; b < chunk.size(); ++b) {
        const EpisodeSample& sample = ds.samples[chunk[b]];
        const T* row = run.narrow_logits[t].data() + b * n_narrow;
        std::vector<double> logits_row(row, row + n_narrow);
        std::vector<double> probs;
        softmax_double(logits_row, probs);
        const int wide_budget =
            (t == 0 || scfg.scheme == Scheme::lstm) ? n_wide : scfg.k_trained_wide;
        double g = 0.0;
        detail::accumulate_step(ds, sample, t, probs, wide_budget, scfg.k_n_refine,
                                opts, accs[t], &g);
        g_samples.push_back(g);
      }
    }
  }
  return detail::finalize(accs, std::move(g_samples),
                          static_cast<int>(indices.size()), degenerate);
}

template <typename T>
EvalReport evaluate_cnn(nn::CnnNet<T>& net, const Dataset& ds,
                        std::span<const int> indices, const SchemeConfig& scfg,
                        const EvalOptions& opts) {
  const int n_steps = static_cast<int>(ds.header.steps_per_sample);
  const int n_narrow = static_cast<int>(ds.header.n_narrow);
  const int n_wide = static_cast<int>(ds.header.n_wide);
  const bool sampled = scfg.scheme == Scheme::sampled_dnn;
  const std::vector<int> sampled_idx =
      sampled ? sampled_beam_indices(n_narrow, ds.header.s_tx) : std::vector<int>{};

  std::vector<detail::StepAccum> accs(n_steps);
  std::vector<double> g_samples(indices.size() * n_steps, 0.0);
  int degenerate = 0;

  nn::CnnCache<T> cache;
  std::vector<T> x, logits;
  const int batch = static_cast<int>(indices.size());
  for (int t = 0; t < n_steps; ++t) {
    x.assign(static_cast<size_t>(2) * batch * n_wide, T(0));
    for (int b = 0; b < batch; ++b) {
      const EpisodeSample& sample = ds.samples[indices[b]];
      std::vector<cd> vals;
      if (sampled) {
        vals.resize(n_wide);
        for (int j = 0; j < n_wide; ++j)
          vals[j] = ds.narrow_measurement(sample, t, sampled_idx[j]);
      } else {
        vals = ds.wide_measurements(sample, t);
      }
      if (!preprocess_into<T>(vals, {}, x.data() + static_cast<size_t>(b) * n_wide,
                              x.data() + static_cast<size_t>(batch) * n_wide +
                                  static_cast<size_t>(b) * n_wide))
        ++degenerate;
    }
    net.forward(x.data(), batch, false, cache, logits);
    for (int b = 0; b < batch; ++b) {
      const EpisodeSample& sample = ds.samples[indices[b]];
      const T* row = logits.data() + static_cast<size_t>(b) * n_narrow;
      std::vector<double> logits_row(row, row + n_narrow);
      std::vector<double> probs;
      softmax_double(logits_row, probs);
      double g = 0.0;
      detail::accumulate_step(ds, sample, t, probs, n_wide, scfg.k_n_refine, opts,
                              accs[t], &g);
      g_samples[static_cast<size_t>(b) * n_steps + t] = g;
    }
  }
  return detail::finalize(accs, std::move(g_samples),
                          static_cast<int>(indices.size()), degenerate);
}

}  // namespace beamsim

#endif
