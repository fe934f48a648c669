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

#ifndef BEAMSIM_TRAIN_HPP
#define BEAMSIM_TRAIN_HPP

#include "beamsim/metrics.hpp"
#include "beamsim/nn/adam.hpp"

namespace beamsim {

/// One row of the training-curve CSV.
struct CurveRow {
  int epoch = 0;
  std::string split;  // "train" or "val"
  double loss_n = 0.0;
  double loss_w = 0.0;  // 0 unless the scheme has an auxiliary head
};

struct TrainResult {
  std::vector<CurveRow> curves;
};

/// Deterministic Fisher-Yates shuffle.
template <typename V>
void seeded_shuffle(std::vector<V>& v, Rng& rng) {
  for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
    int j = static_cast<int>(rng.next_u64() % static_cast<uint64_t>(i + 1));
    std::swap(v[i], v[j]);
  }
}

namespace detail {

/// Builds the (2, B*L) input block of CNN-family examples (sample, step).
template <typename T>
int build_cnn_inputs(const Dataset& ds, std::span<const std::pair<int, int>> examples,
                     bool sampled, const std::vector<int>& sampled_idx,
                     std::vector<T>& x, std::vector<int>& labels) {
  const int batch = static_cast<int>(examples.size());
  const int n_wide = static_cast<int>(ds.header.n_wide);
  x.assign(static_cast<size_t>(2) * batch * n_wide, T(0));
  labels.resize(batch);
  int degenerate = 0;
  for (int b = 0; b < batch; ++b) {
    const auto [si, t] = examples[b];
    const EpisodeSample& sample = ds.samples[si];
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
    labels[b] = sample.steps[t].narrow_label;
  }
  return degenerate;
}

}  // namespace detail

/// Trains the memoryless CNN predictor (or its sampled-narrow-beam variant)
/// on all (sample, step) pairs of the training split.
template <typename T>
TrainResult train_cnn_family(nn::CnnNet<T>& net, const Dataset& ds,
                             const SchemeConfig& scfg, uint64_t seed) {
  scfg.validate(static_cast<int>(ds.header.n_wide));
  const int n_narrow = static_cast<int>(ds.header.n_narrow);
  const bool sampled = scfg.scheme == Scheme::sampled_dnn;
  const std::vector<int> sampled_idx =
      sampled ? sampled_beam_indices(n_narrow, ds.header.s_tx) : std::vector<int>{};

  std::vector<std::pair<int, int>> train_ex, val_ex;
  for (int si : ds.train_indices())
    for (int t = 0; t < static_cast<int>(ds.header.steps_per_sample); ++t)
      train_ex.emplace_back(si, t);
  for (int si : ds.val_indices())
    for (int t = 0; t < static_cast<int>(ds.header.steps_per_sample); ++t)
      val_ex.emplace_back(si, t);

  nn::ParamList<T> params = net.params();
  nn::Adam<T> adam(static_cast<T>(scfg.learning_rate));
  adam.attach(params);
  Rng shuffle_rng(mix64(seed ^ 0x7368756666ULL));

  std::vector<T> x, logits, probs, dlogits;
  std::vector<int> labels;
  nn::CnnCache<T> cache;

  auto eval_loss = [&](std::span<const std::pair<int, int>> examples) {
    double total = 0.0;
    int count = 0;
    const int chunk = 512;
    for (size_t s = 0; s < examples.size(); s += chunk) {
      const size_t e = std::min(examples.size(), s + chunk);
      detail::build_cnn_inputs(ds, examples.subspan(s, e - s), sampled, sampled_idx,
                               x, labels);
      const int b = static_cast<int>(e - s);
      net.forward(x.data(), b, false, cache, logits);
      probs.resize(logits.size());
      total += b * static_cast<double>(nn::softmax_crossentropy(
                       logits.data(), labels.data(), b, n_narrow, probs.data(),
                       static_cast<T*>(nullptr), T(0)));
      count += b;
    }
    return count > 0 ? total / count : 0.0;
  };

  TrainResult res;
  res.curves.push_back({0, "val", eval_loss(val_ex), 0.0});

  for (int epoch = 1; epoch <= scfg.epochs; ++epoch) {
    seeded_shuffle(train_ex, shuffle_rng);
    double train_loss = 0.0;
    int train_count = 0;
    for (size_t s = 0; s < train_ex.size(); s += scfg.batch_size) {
      const size_t e = std::min(train_ex.size(), s + scfg.batch_size);
      const int b = static_cast<int>(e - s);
      detail::build_cnn_inputs(ds, std::span(train_ex).subspan(s, e - s), sampled,
                               sampled_idx, x, labels);
      net.zero_grad();
      net.forward(x.data(), b, true, cache, logits);
      probs.resize(logits.size());
      dlogits.resize(logits.size());
      T loss = nn::softmax_crossentropy(logits.data(), labels.data(), b, n_narrow,
                                        probs.data(), dlogits.data(), T(1) / T(b));
      net.backward(dlogits, cache);
      adam.step(params);
      train_loss += b * static_cast<double>(loss);
      train_count += b;
    }
    res.curves.push_back({epoch, "train", train_loss / std::max(train_count, 1), 0.0});
    res.curves.push_back({epoch, "val", eval_loss(val_ex), 0.0});
  }
  return res;
}

/// Trains a recurrent scheme (lstm / adaptive / enhanced) with the
/// scheme-dependent closed-loop sweep simulation; the enhanced scheme adds
/// the auxiliary wide-beam loss with weight mu.
template <typename T>
TrainResult train_recurrent(nn::RecurrentNet<T>& net, const Dataset& ds,
                            const SchemeConfig& scfg, uint64_t seed) {
  scfg.validate(static_cast<int>(ds.header.n_wide));
  const int n_narrow = static_cast<int>(ds.header.n_narrow);
  const int n_wide = static_cast<int>(ds.header.n_wide);
  const int n_steps = static_cast<int>(ds.header.steps_per_sample);

  std::vector<int> train_idx = ds.train_indices();
  std::vector<int> val_idx = ds.val_indices();

  nn::ParamList<T> params = net.params();
  nn::Adam<T> adam(static_cast<T>(scfg.learning_rate));
  adam.attach(params);
  Rng shuffle_rng(mix64(seed ^ 0x7368756666ULL));

  // Mean narrow (and wide) cross entropy of one batch run; fills the scaled
  // gradients when grad buffers are provided.
  auto losses_of_run = [&](BatchEpisodeRun<T>& run,
                           std::span<const int> chunk,
                           std::vector<std::vector<T>>* dlogits,
                           std::vector<std::vector<T>>* daux) -> std::pair<double, double> {
    const int b = static_cast<int>(chunk.size());
    std::vector<int> labels(b);
    std::vector<T> probs;
    double loss_n = 0.0, loss_w = 0.0;
    const int aux_preds = n_steps - 1;
    for (int t = 0; t < n_steps; ++t) {
      for (int i = 0; i < b; ++i)
        labels[i] = ds.samples[chunk[i]].steps[t].narrow_label;
      probs.resize(static_cast<size_t>(b) * n_narrow);
      T* grad = nullptr;
      if (dlogits != nullptr) {
        (*dlogits)[t].assign(static_cast<size_t>(b) * n_narrow, T(0));
        grad = (*dlogits)[t].data();
      }
      loss_n += static_cast<double>(nn::softmax_crossentropy(
          run.narrow_logits[t].data(), labels.data(), b, n_narrow, probs.data(),
          grad, T(1) / T(b * n_steps)));
      if (net.has_aux() && t >= 1) {
        // Aux gradients are indexed by prediction call order: call t-1
        // produced the prediction for step t.
        for (int i = 0; i < b; ++i)
          labels[i] = ds.samples[chunk[i]].steps[t].wide_label;
        probs.resize(static_cast<size_t>(b) * n_wide);
        T* agrad = nullptr;
        if (daux != nullptr) {
          (*daux)[t - 1].assign(static_cast<size_t>(b) * n_wide, T(0));
          agrad = (*daux)[t - 1].data();
        }
        loss_w += static_cast<double>(nn::softmax_crossentropy(
            run.aux_logits[t].data(), labels.data(), b, n_wide, probs.data(), agrad,
            static_cast<T>(scfg.wide_loss_weight) / T(b * aux_preds)));
      }
    }
    return {loss_n / n_steps, net.has_aux() ? loss_w / std::max(aux_preds, 1) : 0.0};
  };

  auto eval_losses = [&](std::span<const int> indices) -> std::pair<double, double> {
    double ln = 0.0, lw = 0.0;
    int count = 0;
    const int chunk_size = 256;
    for (size_t s = 0; s < indices.size(); s += chunk_size) {
      const size_t e = std::min(indices.size(), s + chunk_size);
      std::vector<int> chunk(indices.begin() + s, indices.begin() + e);
      BatchEpisodeRun<T> run = run_batch_episodes(net, ds, chunk, scfg, false);
      auto [a, b] = losses_of_run(run, chunk, nullptr, nullptr);
      ln += a * chunk.size();
      lw += b * chunk.size();
      count += static_cast<int>(chunk.size());
    }
    return {ln / std::max(count, 1), lw / std::max(count, 1)};
  };

  TrainResult res;
  {
    auto [vn, vw] = eval_losses(val_idx);
    res.curves.push_back({0, "val", vn, vw});
  }

  std::vector<std::vector<T>> dlogits(n_steps), daux(std::max(n_steps - 1, 0));
  for (int epoch = 1; epoch <= scfg.epochs; ++epoch) {
    seeded_shuffle(train_idx, shuffle_rng);
    double train_ln = 0.0, train_lw = 0.0;
    int count = 0;
    for (size_t s = 0; s < train_idx.size(); s += scfg.batch_size) {
      const size_t e = std::min(train_idx.size(), s + scfg.batch_size);
      std::vector<int> chunk(train_idx.begin() + s, train_idx.begin() + e);
      net.zero_grad();
      BatchEpisodeRun<T> run = run_batch_episodes(net, ds, chunk, scfg, true);
      auto [ln, lw] = losses_of_run(run, chunk, &dlogits, &daux);
      net.backward(dlogits, daux);
      adam.step(params);
      train_ln += ln * chunk.size();
      train_lw += lw * chunk.size();
      count += static_cast<int>(chunk.size());
    }
    res.curves.push_back(
        {epoch, "train", train_ln / std::max(count, 1), train_lw / std::max(count, 1)});
    auto [vn, vw] = eval_losses(val_idx);
    res.curves.push_back({epoch, "val", vn, vw});
  }
  return res;
}

}  // namespace beamsim

#endif
