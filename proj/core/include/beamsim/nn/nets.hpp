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

#ifndef BEAMSIM_NN_NETS_HPP
#define BEAMSIM_NN_NETS_HPP

#include "beamsim/nn/lstm.hpp"

namespace beamsim::nn {

/// Architecture hyperparameters of the beam predictors. The convolution
/// geometry is fixed: conv1 (kernel 3, stride 3, pad 1) and conv2 (kernel 3,
/// stride 1, pad 1).
struct NetConfig {
  int input_len = 16;    // wide-beam count (feature length)
  int n_narrow = 64;     // narrow-beam classes
  int n_wide = 16;       // wide-beam classes of the auxiliary head
  int conv1_channels = 64;
  int conv2_channels = 256;
  int hidden = 256;
  double dropout_lstm = 0.2;
  double dropout_fc = 0.3;
};

// ---------------------------------------------------------------------------
// Shared preprocessing+convolution trunk: (2, B*L) -> pooled features (B, F).

template <typename T>
struct TrunkCache {
  Conv1dCache<T> c1, c2;
  BatchNormCache<T> bn1, bn2;
  ReluCache<T> r1, r2;
  MaxPoolCache<T> pool;
  std::vector<T> y1, y2;  // activation buffers, reused as gradient buffers
  int batch = 0;
};

template <typename T>
class ConvTrunk {
 public:
  ConvTrunk() = default;
  ConvTrunk(const NetConfig& cfg, Rng& rng)
      : cfg_(cfg),
        conv1_(2, cfg.conv1_channels, 3, 3, 1, rng),
        bn1_(cfg.conv1_channels),
        conv2_(cfg.conv1_channels, cfg.conv2_channels, 3, 1, 1, rng),
        bn2_(cfg.conv2_channels),
        len1_(conv_out_len(cfg.input_len, 3, 3, 1)),
        len2_(conv_out_len(conv_out_len(cfg.input_len, 3, 3, 1), 3, 1, 1)) {}

  /// x: (2, B*L) channel-major; out resized to (B, F) sample-major.
  void forward(const T* x, int batch, bool train, TrunkCache<T>& cache,
               std::vector<T>& out) {
    cache.batch = batch;
    cache.y1.assign(static_cast<size_t>(cfg_.conv1_channels) * batch * len1_, T(0));
    conv1_.forward(x, batch, cfg_.input_len, cache.c1, cache.y1.data());
    bn1_.forward(cache.y1.data(), batch * len1_, train, cache.bn1);
    relu_forward(cache.y1.data(), cache.y1.size(), cache.r1);

    cache.y2.assign(static_cast<size_t>(cfg_.conv2_channels) * batch * len2_, T(0));
    conv2_.forward(cache.y1.data(), batch, len1_, cache.c2, cache.y2.data());
    bn2_.forward(cache.y2.data(), batch * len2_, train, cache.bn2);
    relu_forward(cache.y2.data(), cache.y2.size(), cache.r2);

    out.assign(static_cast<size_t>(batch) * cfg_.conv2_channels, T(0));
    global_maxpool_forward(cache.y2.data(), cfg_.conv2_channels, batch, len2_,
                           cache.pool, out.data());
  }

  /// dout: (B, F). Parameter gradients accumulate; input gradient discarded.
  void backward(const T* dout, TrunkCache<T>& cache) {
    std::vector<T> dy2(cache.y2.size());
    global_maxpool_backward(dout, cache.pool, dy2.data());
    relu_backward(dy2.data(), cache.r2);
    bn2_.backward(dy2.data(), cache.bn2);
    std::vector<T> dy1(cache.y1.size());
    conv2_.backward(dy2.data(), cache.c2, dy1.data());
    relu_backward(dy1.data(), cache.r1);
    bn1_.backward(dy1.data(), cache.bn1);
    conv1_.backward(dy1.data(), cache.c1, nullptr);
  }

  void params(const std::string& prefix, ParamList<T>& out) {
    conv1_.params(prefix + ".conv1", out);
    bn1_.params(prefix + ".bn1", out);
    conv2_.params(prefix + ".conv2", out);
    bn2_.params(prefix + ".bn2", out);
  }

  void state(const std::string& prefix, ParamList<T>& out) {
    bn1_.state(prefix + ".bn1", out);
    bn2_.state(prefix + ".bn2", out);
  }

  int feature_len() const { return cfg_.conv2_channels; }
  int mid_len() const { return len1_; }
  int out_len() const { return len2_; }

 private:
  NetConfig cfg_;
  Conv1d<T> conv1_;
  BatchNorm1d<T> bn1_;
  Conv1d<T> conv2_;
  BatchNorm1d<T> bn2_;
  int len1_ = 0, len2_ = 0;
};

// ---------------------------------------------------------------------------
// Memoryless predictor: trunk -> FC -> (dropout) -> logits.

template <typename T>
struct CnnCache {
  TrunkCache<T> trunk;
  DenseCache<T> fc;
  DropoutCache<T> drop;
  std::vector<T> features;
};

template <typename T>
class CnnNet {
 public:
  CnnNet(const NetConfig& cfg, uint64_t init_seed)
      : cfg_(cfg), rng_(init_seed) {
    trunk_ = ConvTrunk<T>(cfg, rng_);
    fc_ = Dense<T>(cfg.conv2_channels, cfg.n_narrow, rng_);
  }

  /// x: (2, B*L); logits resized to (B, n_narrow).
  void forward(const T* x, int batch, bool train, CnnCache<T>& cache,
               std::vector<T>& logits) {
    trunk_.forward(x, batch, train, cache.trunk, cache.features);
    logits.assign(static_cast<size_t>(batch) * cfg_.n_narrow, T(0));
    fc_.forward(cache.features.data(), batch, cache.fc, logits.data());
    dropout_forward(logits.data(), logits.size(), cfg_.dropout_fc, train, rng_,
                    cache.drop);
  }

  void backward(std::vector<T>& dlogits, CnnCache<T>& cache) {
    dropout_backward(dlogits.data(), dlogits.size(), cfg_.dropout_fc, cache.drop);
    std::vector<T> dfeat(cache.features.size());
    fc_.backward(dlogits.data(), cache.fc, dfeat.data());
    trunk_.backward(dfeat.data(), cache.trunk);
  }

  ParamList<T> params() {
    ParamList<T> out;
    trunk_.params("trunk", out);
    fc_.params("fc", out);
    return out;
  }

  ParamList<T> params_and_state() {
    ParamList<T> out = params();
    trunk_.state("trunk", out);
    return out;
  }

  void zero_grad() {
    for (auto& p : params()) p.tensor->zero_grad();
  }

  const NetConfig& config() const { return cfg_; }
  Rng& rng() { return rng_; }

  /// Forward-pass multiply count for one input (rough complexity measure).
  int64_t flop_estimate() const {
    int64_t macs = 0;
    macs += static_cast<int64_t>(cfg_.conv1_channels) * trunk_.mid_len() * 2 * 3;
    macs += static_cast<int64_t>(cfg_.conv2_channels) * trunk_.out_len() *
            cfg_.conv1_channels * 3;
    macs += static_cast<int64_t>(cfg_.conv2_channels) * cfg_.n_narrow;
    return 2 * macs;
  }

 private:
  NetConfig cfg_;
  Rng rng_;
  ConvTrunk<T> trunk_;
  Dense<T> fc_;
};

// ---------------------------------------------------------------------------
// Recurrent predictor: trunk -> LSTM x2 -> FC, optionally with an auxiliary
// LSTM x2 -> FC head that predicts the upcoming best wide beam.

template <typename T>
struct RecurrentStepCache {
  TrunkCache<T> trunk;
  std::vector<T> features;        // (B, F) trunk output
  std::vector<T> h1_dropped;      // after dropout, input of lstm2
  std::vector<T> h2_dropped;      // after dropout, input of fc
  DropoutCache<T> drop1, drop2, drop_fc;
  DenseCache<T> fc;
  // Auxiliary branch (parallel LSTM stack on the same features).
  std::vector<T> a1_dropped, a2_dropped;
  DropoutCache<T> adrop1, adrop2;
};

/// Cache of one auxiliary wide-beam prediction (made between steps).
template <typename T>
struct AuxPredictCache {
  int after_step = -1;  // index of the last consumed step
  DenseCache<T> fc;
  DropoutCache<T> drop;
};

template <typename T>
class RecurrentNet {
 public:
  RecurrentNet(const NetConfig& cfg, bool with_aux, uint64_t init_seed)
      : cfg_(cfg), with_aux_(with_aux), rng_(init_seed) {
    trunk_ = ConvTrunk<T>(cfg, rng_);
    lstm1_ = Lstm<T>(cfg.conv2_channels, cfg.hidden, rng_);
    lstm2_ = Lstm<T>(cfg.hidden, cfg.hidden, rng_);
    fc_ = Dense<T>(cfg.hidden, cfg.n_narrow, rng_);
    if (with_aux_) {
      aux1_ = Lstm<T>(cfg.conv2_channels, cfg.hidden, rng_);
      aux2_ = Lstm<T>(cfg.hidden, cfg.hidden, rng_);
      fc_wide_ = Dense<T>(cfg.hidden, cfg.n_wide, rng_);
    }
  }

  bool has_aux() const { return with_aux_; }

  void begin_sequence(int batch) {
    batch_ = batch;
    lstm1_.reset(batch);
    lstm2_.reset(batch);
    if (with_aux_) {
      aux1_.reset(batch);
      aux2_.reset(batch);
    }
    steps_.clear();
    aux_preds_.clear();
  }

  /// Consumes the step input x (2, B*L) and returns narrow-beam logits
  /// (B, n_narrow). Caches are recorded only in train mode.
  void step(const T* x, bool train, std::vector<T>& logits) {
    steps_.emplace_back();
    RecurrentStepCache<T>& sc = steps_.back();
    trunk_.forward(x, batch_, train, sc.trunk, sc.features);

    const std::vector<T>& h1 = lstm1_.step(sc.features.data(), train);
    sc.h1_dropped = h1;
    dropout_forward(sc.h1_dropped.data(), sc.h1_dropped.size(), cfg_.dropout_lstm,
                    train, rng_, sc.drop1);
    const std::vector<T>& h2 = lstm2_.step(sc.h1_dropped.data(), train);
    sc.h2_dropped = h2;
    dropout_forward(sc.h2_dropped.data(), sc.h2_dropped.size(), cfg_.dropout_lstm,
                    train, rng_, sc.drop2);
    logits.assign(static_cast<size_t>(batch_) * cfg_.n_narrow, T(0));
    fc_.forward(sc.h2_dropped.data(), batch_, sc.fc, logits.data());
    dropout_forward(logits.data(), logits.size(), cfg_.dropout_fc, train, rng_,
                    sc.drop_fc);

    if (with_aux_) {
      const std::vector<T>& a1 = aux1_.step(sc.features.data(), train);
      sc.a1_dropped = a1;
      dropout_forward(sc.a1_dropped.data(), sc.a1_dropped.size(), cfg_.dropout_lstm,
                      train, rng_, sc.adrop1);
      aux2_.step(sc.a1_dropped.data(), train);
    }
    if (!train) steps_.pop_back();
  }

  /// Wide-beam logits (B, n_wide) from the auxiliary state accumulated so
  /// far (i.e. the prediction for the *next* step, made before its sweep).
  void aux_predict(bool train, std::vector<T>& logits) {
    if (!with_aux_) throw std::logic_error("model has no auxiliary head");
    aux_preds_.emplace_back();
    AuxPredictCache<T>& pc = aux_preds_.back();
    pc.after_step = train ? static_cast<int>(steps_.size()) - 1 : -1;
    std::vector<T> h = aux2_.hidden_state();
    dropout_forward(h.data(), h.size(), cfg_.dropout_lstm, train, rng_, pc.drop);
    logits.assign(static_cast<size_t>(batch_) * cfg_.n_wide, T(0));
    fc_wide_.forward(h.data(), batch_, pc.fc, logits.data());
    if (!train) aux_preds_.pop_back();
  }

  /// BPTT through the recorded sequence. dlogits[t] is the scaled gradient of
  /// the loss w.r.t. the step-t narrow logits; daux[k] matches the k-th
  /// aux_predict() call (empty vectors are treated as zero).
  void backward(std::vector<std::vector<T>>& dlogits,
                std::vector<std::vector<T>>& daux) {
    const int n_steps = static_cast<int>(steps_.size());
    const int bh = batch_ * cfg_.hidden;

    std::vector<std::vector<T>> dh2(n_steps);
    for (int t = 0; t < n_steps; ++t) {
      RecurrentStepCache<T>& sc = steps_[t];
      dropout_backward(dlogits[t].data(), dlogits[t].size(), cfg_.dropout_fc,
                       sc.drop_fc);
      dh2[t].assign(bh, T(0));
      fc_.backward(dlogits[t].data(), sc.fc, dh2[t].data());
      dropout_backward(dh2[t].data(), dh2[t].size(), cfg_.dropout_lstm, sc.drop2);
    }
    std::vector<std::vector<T>> dh1(n_steps);
    std::vector<std::vector<T>*> dh1_ptr(n_steps);
    for (int t = 0; t < n_steps; ++t) dh1_ptr[t] = &dh1[t];
    lstm2_.backward(dh2, dh1_ptr);
    std::vector<std::vector<T>> dfeat(n_steps);
    std::vector<std::vector<T>*> dfeat_ptr(n_steps);
    for (int t = 0; t < n_steps; ++t) {
      dropout_backward(dh1[t].data(), dh1[t].size(), cfg_.dropout_lstm,
                       steps_[t].drop1);
      dfeat_ptr[t] = &dfeat[t];
    }
    lstm1_.backward(dh1, dfeat_ptr);

    if (with_aux_) {
      // Gradients flowing into the auxiliary hidden state at each step.
      std::vector<std::vector<T>> da2(n_steps);
      for (int t = 0; t < n_steps; ++t) da2[t].assign(bh, T(0));
      for (size_t k = 0; k < aux_preds_.size(); ++k) {
        if (daux.size() <= k || daux[k].empty()) continue;
        AuxPredictCache<T>& pc = aux_preds_[k];
        if (pc.after_step < 0) continue;  // prediction from the zero state
        std::vector<T> dh(bh, T(0));
        fc_wide_.backward(daux[k].data(), pc.fc, dh.data());
        dropout_backward(dh.data(), dh.size(), cfg_.dropout_lstm, pc.drop);
        for (int i = 0; i < bh; ++i) da2[pc.after_step][i] += dh[i];
      }
      std::vector<std::vector<T>> da1(n_steps);
      std::vector<std::vector<T>*> da1_ptr(n_steps);
      for (int t = 0; t < n_steps; ++t) da1_ptr[t] = &da1[t];
      aux2_.backward(da2, da1_ptr);
      std::vector<std::vector<T>> dafeat(n_steps);
      std::vector<std::vector<T>*> dafeat_ptr(n_steps);
      for (int t = 0; t < n_steps; ++t) {
        dropout_backward(da1[t].data(), da1[t].size(), cfg_.dropout_lstm,
                         steps_[t].adrop1);
        dafeat_ptr[t] = &dafeat[t];
      }
      aux1_.backward(da1, dafeat_ptr);
      for (int t = 0; t < n_steps; ++t)
        for (size_t i = 0; i < dfeat[t].size(); ++i) dfeat[t][i] += dafeat[t][i];
    }

    // Trunk backward per step (parameters shared across steps).
    if (!getenv("BEAMSIM_SKIP_TRUNK_BWD"))
      for (int t = n_steps - 1; t >= 0; --t)
        trunk_.backward(dfeat[t].data(), steps_[t].trunk);
    steps_.clear();
    aux_preds_.clear();
  }

  ParamList<T> params() {
    ParamList<T> out;
    trunk_.params("trunk", out);
    lstm1_.params("lstm1", out);
    lstm2_.params("lstm2", out);
    fc_.params("fc", out);
    if (with_aux_) {
      aux1_.params("aux_lstm1", out);
      aux2_.params("aux_lstm2", out);
      fc_wide_.params("fc_wide", out);
    }
    return out;
  }

  ParamList<T> params_and_state() {
    ParamList<T> out = params();
    trunk_.state("trunk", out);
    return out;
  }

  void zero_grad() {
    for (auto& p : params()) p.tensor->zero_grad();
  }

  const NetConfig& config() const { return cfg_; }
  Rng& rng() { return rng_; }
  int batch() const { return batch_; }

  int64_t flop_estimate() const {
    int64_t macs = 0;
    macs += static_cast<int64_t>(cfg_.conv1_channels) * trunk_.mid_len() * 2 * 3;
    macs += static_cast<int64_t>(cfg_.conv2_channels) * trunk_.out_len() *
            cfg_.conv1_channels * 3;
    const int64_t lstm_macs =
        4LL * cfg_.hidden * (cfg_.conv2_channels + cfg_.hidden) +  // layer 1
        4LL * cfg_.hidden * 2 * cfg_.hidden;                       // layer 2
    macs += lstm_macs * (with_aux_ ? 2 : 1);
    macs += static_cast<int64_t>(cfg_.hidden) * cfg_.n_narrow;
    if (with_aux_) macs += static_cast<int64_t>(cfg_.hidden) * cfg_.n_wide;
    return 2 * macs;
  }

 private:
  NetConfig cfg_;
  bool with_aux_ = false;
  int batch_ = 0;
  Rng rng_;
  ConvTrunk<T> trunk_;
  Lstm<T> lstm1_, lstm2_;
  Dense<T> fc_;
  Lstm<T> aux1_, aux2_;
  Dense<T> fc_wide_;
  std::vector<RecurrentStepCache<T>> steps_;
  std::vector<AuxPredictCache<T>> aux_preds_;
};

}  // namespace beamsim::nn

#endif
