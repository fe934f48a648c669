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

#ifndef BEAMSIM_NN_LSTM_HPP
#define BEAMSIM_NN_LSTM_HPP

#include "beamsim/nn/fastmath.hpp"
#include "beamsim/nn/layers.hpp"

namespace beamsim::nn {

/// Per-step activations kept for backpropagation through time.
template <typename T>
struct LstmStepCache {
  std::vector<T> xh;  // concatenated input [x | h_prev], (B, In+H)
  std::vector<T> c_prev;
  std::vector<T> i, f, g, o;  // post-activation gates (B, H)
  std::vector<T> c, tanh_c;
};

/// Standard LSTM cell with gates ordered [input, forget, cell, output].
/// The input and recurrent weights are fused into one matrix w (In+H, 4H)
/// so each direction of each step is a single GEMM; the forget-gate bias
/// starts at +1.
///
/// Usage: reset(batch), then step() once per time slot; backward() walks the
/// recorded steps in reverse and accumulates parameter gradients.
template <typename T>
class Lstm {
 public:
  Lstm() = default;
  Lstm(int in, int hidden, Rng& rng) : in_(in), hidden_(hidden) {
    w_.resize({in + hidden, 4 * hidden});
    b_.resize({4 * hidden});
    // Fan-in-scaled uniform on both blocks; rows 0..in-1 feed from the input,
    // the rest from the recurrent state.
    w_.init_uniform(rng, in);
    {
      double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
      for (int r = in; r < in + hidden; ++r)
        for (int c = 0; c < 4 * hidden; ++c)
          w_.v[static_cast<size_t>(r) * 4 * hidden + c] =
              static_cast<T>(rng.uniform(-bound, bound));
    }
    b_.init_uniform(rng, hidden);
    for (int j = hidden; j < 2 * hidden; ++j) b_.v[j] += T(1);
  }

  void reset(int batch) {
    batch_ = batch;
    h_.assign(static_cast<size_t>(batch) * hidden_, T(0));
    c_.assign(static_cast<size_t>(batch) * hidden_, T(0));
    steps_.clear();
  }

  /// Consumes x (B, In); returns the new hidden state (B, H). When
  /// record_cache is false no BPTT state is stored (inference).
  const std::vector<T>& step(const T* x, bool record_cache = true) {
    const int bh = batch_ * hidden_;
    const int cols = in_ + hidden_;

    std::vector<T> xh(static_cast<size_t>(batch_) * cols);
    for (int b = 0; b < batch_; ++b) {
      T* row = xh.data() + static_cast<size_t>(b) * cols;
      const T* xs = x + static_cast<size_t>(b) * in_;
      const T* hs = h_.data() + static_cast<size_t>(b) * hidden_;
      std::copy(xs, xs + in_, row);
      std::copy(hs, hs + hidden_, row + in_);
    }

    std::vector<T> gates(static_cast<size_t>(batch_) * 4 * hidden_);
    gemm(false, false, batch_, 4 * hidden_, cols, T(1), xh.data(), cols,
         w_.v.data(), 4 * hidden_, T(0), gates.data(), 4 * hidden_);

    LstmStepCache<T> cache;
    if (record_cache) {
      cache.xh = xh;
      cache.c_prev = c_;
    }
    const std::vector<T>& c_prev = record_cache ? cache.c_prev : c_;

    std::vector<T> i(bh), f(bh), g(bh), o(bh), tanh_c(bh);
    std::vector<T> c_new(bh);
    const T* bias = b_.v.data();
    for (int b = 0; b < batch_; ++b) {
      const T* gr = gates.data() + static_cast<size_t>(b) * 4 * hidden_;
      const size_t off = static_cast<size_t>(b) * hidden_;
      for (int j = 0; j < hidden_; ++j)
        i[off + j] = fast_sigmoid(gr[j] + bias[j]);
      for (int j = 0; j < hidden_; ++j)
        f[off + j] = fast_sigmoid(gr[hidden_ + j] + bias[hidden_ + j]);
      for (int j = 0; j < hidden_; ++j)
        g[off + j] = fast_tanh(gr[2 * hidden_ + j] + bias[2 * hidden_ + j]);
      for (int j = 0; j < hidden_; ++j)
        o[off + j] = fast_sigmoid(gr[3 * hidden_ + j] + bias[3 * hidden_ + j]);
      for (int j = 0; j < hidden_; ++j) {
        c_new[off + j] = f[off + j] * c_prev[off + j] + i[off + j] * g[off + j];
        tanh_c[off + j] = fast_tanh(c_new[off + j]);
        h_[off + j] = o[off + j] * tanh_c[off + j];
      }
    }
    c_ = std::move(c_new);
    if (record_cache) {
      cache.i = std::move(i);
      cache.f = std::move(f);
      cache.g = std::move(g);
      cache.o = std::move(o);
      cache.c = c_;
      cache.tanh_c = std::move(tanh_c);
      steps_.push_back(std::move(cache));
    }
    return h_;
  }

  /// dh_out[t] is the gradient flowing into h_t from the layers above. Each
  /// dx[t] receives the input gradient (may be null). Clears recorded steps.
  void backward(std::vector<std::vector<T>>& dh_out, std::vector<std::vector<T>*>& dx) {
    const int bh = batch_ * hidden_;
    const int cols = in_ + hidden_;
    std::vector<T> dh_rec(bh, T(0));
    std::vector<T> dc(bh, T(0));
    std::vector<T> dgates(static_cast<size_t>(batch_) * 4 * hidden_);
    std::vector<T> dxh(static_cast<size_t>(batch_) * cols);

    for (int t = static_cast<int>(steps_.size()) - 1; t >= 0; --t) {
      const LstmStepCache<T>& s = steps_[t];
      for (int b = 0; b < batch_; ++b) {
        T* dgr = dgates.data() + static_cast<size_t>(b) * 4 * hidden_;
        const size_t off = static_cast<size_t>(b) * hidden_;
        for (int j = 0; j < hidden_; ++j) {
          const size_t idx = off + j;
          const T dh = dh_out[t][idx] + dh_rec[idx];
          const T dct = dc[idx] + dh * s.o[idx] * (T(1) - s.tanh_c[idx] * s.tanh_c[idx]);
          const T di = dct * s.g[idx];
          const T df = dct * s.c_prev[idx];
          const T dg = dct * s.i[idx];
          const T do_ = dh * s.tanh_c[idx];
          dgr[j] = di * s.i[idx] * (T(1) - s.i[idx]);
          dgr[hidden_ + j] = df * s.f[idx] * (T(1) - s.f[idx]);
          dgr[2 * hidden_ + j] = dg * (T(1) - s.g[idx] * s.g[idx]);
          dgr[3 * hidden_ + j] = do_ * s.o[idx] * (T(1) - s.o[idx]);
          dc[idx] = dct * s.f[idx];
        }
      }
      // dW += XH^T * dG, bias gradient, then the packed input gradient.
      gemm(true, false, cols, 4 * hidden_, batch_, T(1), s.xh.data(), cols,
           dgates.data(), 4 * hidden_, T(1), w_.g.data(), 4 * hidden_);
      for (int b = 0; b < batch_; ++b) {
        const T* dgr = dgates.data() + static_cast<size_t>(b) * 4 * hidden_;
        for (int j = 0; j < 4 * hidden_; ++j) b_.g[j] += dgr[j];
      }
      gemm(false, true, batch_, cols, 4 * hidden_, T(1), dgates.data(), 4 * hidden_,
           w_.v.data(), 4 * hidden_, T(0), dxh.data(), cols);
      if (dx[t] != nullptr) {
        dx[t]->assign(static_cast<size_t>(batch_) * in_, T(0));
        for (int b = 0; b < batch_; ++b)
          std::copy(dxh.data() + static_cast<size_t>(b) * cols,
                    dxh.data() + static_cast<size_t>(b) * cols + in_,
                    dx[t]->data() + static_cast<size_t>(b) * in_);
      }
      for (int b = 0; b < batch_; ++b)
        std::copy(dxh.data() + static_cast<size_t>(b) * cols + in_,
                  dxh.data() + static_cast<size_t>(b) * cols + in_ + hidden_,
                  dh_rec.data() + static_cast<size_t>(b) * hidden_);
    }
    steps_.clear();
  }

  void params(const std::string& prefix, ParamList<T>& out) {
    out.push_back({prefix + ".w", &w_});
    out.push_back({prefix + ".bias", &b_});
  }

  const std::vector<T>& hidden_state() const { return h_; }
  const std::vector<T>& cell_state() const { return c_; }
  void set_state(std::vector<T> h, std::vector<T> c) {
    h_ = std::move(h);
    c_ = std::move(c);
  }
  int hidden_size() const { return hidden_; }
  int input_size() const { return in_; }
  int recorded_steps() const { return static_cast<int>(steps_.size()); }

 private:
  int in_ = 0, hidden_ = 0, batch_ = 0;
  Tensor<T> w_, b_;
  std::vector<T> h_, c_;
  std::vector<LstmStepCache<T>> steps_;
};

}  // namespace beamsim::nn

#endif
