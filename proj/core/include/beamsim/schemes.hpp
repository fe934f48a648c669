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

#ifndef BEAMSIM_SCHEMES_HPP
#define BEAMSIM_SCHEMES_HPP

#include <optional>
#include <string>

#include "beamsim/dataset.hpp"
#include "beamsim/nn/nets.hpp"
#include "beamsim/preprocess.hpp"

namespace beamsim {

enum class Scheme { cnn, lstm, adaptive, enhanced, sampled_dnn, power_ratio };
enum class SelectCriterion { onc, mpc };

Scheme scheme_from_string(const std::string& s);
std::string to_string(Scheme s);
SelectCriterion criterion_from_string(const std::string& s);
std::string to_string(SelectCriterion c);

/// Hyperparameters of one predictor scheme run.
struct SchemeConfig {
  Scheme scheme = Scheme::lstm;
  SelectCriterion criterion = SelectCriterion::onc;
  int k_trained_wide = 16;      // K, wide beams swept per period for t > 1
  int k_n_refine = 0;           // K_n, extra narrow beams after prediction
  double wide_loss_weight = 1;  // mu
  double learning_rate = 3e-4;
  int epochs = 80;
  int batch_size = 128;
  bool teacher_forced = false;  // ground-truth selection refs while training

  void validate(int n_wide) const;
};

/// Per-step predictor result.
struct PredictorOutput {
  std::vector<double> narrow_probs;
  std::vector<double> wide_probs;  // empty unless the scheme has an aux head
  int chosen = 0;                  // argmax narrow_probs
};

/// Optimal-neighboring criterion: the K wide beams whose directions are
/// nearest (|difference| mod pi) to the reference direction. Ties toward the
/// lower index; result sorted ascending.
std::vector<int> select_onc(double reference_dir_rad,
                            const std::vector<double>& wide_directions, int k);

/// Maximum-probability criterion on aggregated narrow probabilities: wide
/// beam m scores sum of its s_tx covered narrow probabilities.
std::vector<int> select_mpc_narrow(std::span<const double> narrow_probs, int s_tx,
                                   int k);

/// Maximum-probability criterion directly on wide-beam probabilities.
std::vector<int> select_mpc_wide(std::span<const double> wide_probs, int k);

/// Aggregated wide-beam probabilities (block sums of narrow probabilities).
std::vector<double> aggregate_wide_probs(std::span<const double> narrow_probs,
                                         int s_tx);

/// Row softmax on doubles (used to turn stored logits into selection
/// probabilities).
void softmax_double(const std::vector<double>& logits, std::vector<double>& probs);

// ---------------------------------------------------------------------------
// Batched closed-loop episode runs on stored samples. Used by both training
// (train = true; caches stay inside the net for backward) and evaluation.

template <typename T>
struct BatchEpisodeRun {
  int batch = 0;
  int steps = 0;
  // Step-major collections, each entry sized (batch x width).
  std::vector<std::vector<T>> narrow_logits;
  std::vector<std::vector<T>> aux_logits;  // prediction *for* step t (t >= 1)
  std::vector<std::vector<std::vector<int>>> selections;  // [t][b] swept wide beams
  std::vector<int> degenerate_inputs = {};  // count per step (all-zero vectors)
};

namespace detail {

/// Builds the channel-major (2, B*L) input block for one step from per-sample
/// measurement values/masks.
template <typename T>
void fill_step_input(const std::vector<std::vector<cd>>& values,
                     const std::vector<std::vector<uint8_t>>& masks, int n_wide,
                     std::vector<T>& x, int* degenerate_count) {
  const int batch = static_cast<int>(values.size());
  x.assign(static_cast<size_t>(2) * batch * n_wide, T(0));
  int degenerate = 0;
  for (int b = 0; b < batch; ++b) {
    bool ok = preprocess_into<T>(values[b], masks[b], x.data() + static_cast<size_t>(b) * n_wide,
                                 x.data() + static_cast<size_t>(batch) * n_wide +
                                     static_cast<size_t>(b) * n_wide);
    if (!ok) ++degenerate;
  }
  if (degenerate_count != nullptr) *degenerate_count = degenerate;
}

}  // namespace detail

/// Runs a batch of episodes through a recurrent predictor with the
/// scheme-dependent wide-beam selection in the loop: a full sweep at t = 0,
/// then K selected beams per later step. `train` keeps BPTT caches alive and
/// uses dropout/batch statistics.
template <typename T>
BatchEpisodeRun<T> run_batch_episodes(nn::RecurrentNet<T>& net, const Dataset& ds,
                                      std::span<const int> sample_indices,
                                      const SchemeConfig& scfg, bool train) {
  const int batch = static_cast<int>(sample_indices.size());
  const int n_wide = static_cast<int>(ds.header.n_wide);
  const int n_steps = static_cast<int>(ds.header.steps_per_sample);
  const int s_tx = ds.header.s_tx;
  // Only the direction grids are needed here; the antenna counts are dummies.
  const Codebook wide_cb = wide_codebook(
      s_tx, static_cast<int>(ds.header.n_narrow), s_tx, ds.header.coverage_rad);
  const Codebook narrow_cb =
      narrow_codebook(1, static_cast<int>(ds.header.n_narrow), ds.header.coverage_rad);

  BatchEpisodeRun<T> run;
  run.batch = batch;
  run.steps = n_steps;
  run.narrow_logits.resize(n_steps);
  run.aux_logits.resize(n_steps);
  run.selections.resize(n_steps);
  run.degenerate_inputs.assign(n_steps, 0);

  net.begin_sequence(batch);

  std::vector<T> x;
  std::vector<std::vector<cd>> values(batch);
  std::vector<std::vector<uint8_t>> masks(batch);

  for (int t = 0; t < n_steps; ++t) {
    // Aux prediction for this step from the signals through t-1. The first
    // step is always a full sweep, so no prediction is made for it.
    std::vector<T> aux;
    if (net.has_aux() && t >= 1) {
      net.aux_predict(train, aux);
      run.aux_logits[t] = aux;
    }

    run.selections[t].resize(batch);
    for (int b = 0; b < batch; ++b) {
      const EpisodeSample& sample = ds.samples[sample_indices[b]];
      std::vector<int>& sel = run.selections[t][b];
      if (t == 0 || scfg.scheme == Scheme::lstm) {
        sel.resize(n_wide);
        for (int m = 0; m < n_wide; ++m) sel[m] = m;
      } else if (scfg.scheme == Scheme::adaptive) {
        const bool forced = scfg.teacher_forced && train;
        if (scfg.criterion == SelectCriterion::onc) {
          int ref_narrow;
          if (forced) {
            ref_narrow = sample.steps[t - 1].narrow_label;
          } else {
            const T* row = run.narrow_logits[t - 1].data() +
                           static_cast<size_t>(b) * ds.header.n_narrow;
            ref_narrow = static_cast<int>(
                std::max_element(row, row + ds.header.n_narrow) - row);
          }
          sel = select_onc(narrow_cb.directions[ref_narrow], wide_cb.directions,
                           scfg.k_trained_wide);
        } else {
          std::vector<double> probs(ds.header.n_narrow, 0.0);
          if (forced) {
            probs[sample.steps[t - 1].narrow_label] = 1.0;
          } else {
            const T* row = run.narrow_logits[t - 1].data() +
                           static_cast<size_t>(b) * ds.header.n_narrow;
            std::vector<double> logits_row(row, row + ds.header.n_narrow);
            softmax_double(logits_row, probs);
          }
          sel = select_mpc_narrow(probs, s_tx, scfg.k_trained_wide);
        }
      } else {  // enhanced
        if (scfg.teacher_forced && train) {
          int ref_wide = sample.steps[t].wide_label;
          if (scfg.criterion == SelectCriterion::onc) {
            sel = select_onc(wide_cb.directions[ref_wide], wide_cb.directions,
                             scfg.k_trained_wide);
          } else {
            std::vector<double> onehot(n_wide, 0.0);
            onehot[ref_wide] = 1.0;
            sel = select_mpc_wide(onehot, scfg.k_trained_wide);
          }
        } else if (scfg.criterion == SelectCriterion::onc) {
          const T* row = aux.data() + static_cast<size_t>(b) * n_wide;
          int ref_wide = static_cast<int>(std::max_element(row, row + n_wide) - row);
          sel = select_onc(wide_cb.directions[ref_wide], wide_cb.directions,
                           scfg.k_trained_wide);
        } else {
          const T* row = aux.data() + static_cast<size_t>(b) * n_wide;
          std::vector<double> logits_row(row, row + n_wide);
          std::vector<double> probs(n_wide);
          softmax_double(logits_row, probs);
          sel = select_mpc_wide(probs, scfg.k_trained_wide);
        }
      }

      values[b] = ds.wide_measurements(sample, t, &sel);
      masks[b].assign(n_wide, 0);
      for (int m : sel) masks[b][m] = 1;
    }

    int degenerate = 0;
    detail::fill_step_input(values, masks, n_wide, x, &degenerate);
    run.degenerate_inputs[t] = degenerate;

    std::vector<T> logits;
    net.step(x.data(), train, logits);
    run.narrow_logits[t] = std::move(logits);
  }
  return run;
}

}  // namespace beamsim

#endif
