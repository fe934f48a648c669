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

#ifndef BEAMSIM_NN_LAYERS_HPP
#define BEAMSIM_NN_LAYERS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "beamsim/nn/gemm.hpp"
#include "beamsim/nn/tensor.hpp"

namespace beamsim::nn {

template <typename T>
inline T sigmoid(T x) {
  return T(1) / (T(1) + std::exp(-x));
}

/// Output length of a 1-D convolution/cross-correlation.
inline int conv_out_len(int in_len, int kernel, int stride, int pad) {
  if (in_len + 2 * pad < kernel)
    throw std::invalid_argument("conv input shorter than kernel");
  return (in_len + 2 * pad - kernel) / stride + 1;
}

// ---------------------------------------------------------------------------
// Fully connected: Y (B,Out) = X (B,In) * W^T + b.

template <typename T>
struct DenseCache {
  std::vector<T> x;
  int batch = 0;
};

template <typename T>
class Dense {
 public:
  Dense() = default;
  Dense(int in, int out, Rng& rng) : in_(in), out_(out) {
    w_.resize({out, in});
    b_.resize({out});
    w_.init_uniform(rng, in);
    b_.init_uniform(rng, in);
  }

  void forward(const T* x, int batch, DenseCache<T>& cache, T* y) const {
    cache.x.assign(x, x + static_cast<size_t>(batch) * in_);
    cache.batch = batch;
    gemm(false, true, batch, out_, in_, T(1), x, in_, w_.v.data(), in_, T(0), y, out_);
    for (int i = 0; i < batch; ++i)
      for (int j = 0; j < out_; ++j) y[i * out_ + j] += b_.v[j];
  }

  /// Accumulates parameter gradients; writes input gradient into dx.
  void backward(const T* dy, const DenseCache<T>& cache, T* dx) {
    const int batch = cache.batch;
    gemm(true, false, out_, in_, batch, T(1), dy, out_, cache.x.data(), in_, T(1),
         w_.g.data(), in_);
    for (int i = 0; i < batch; ++i)
      for (int j = 0; j < out_; ++j) b_.g[j] += dy[i * out_ + j];
    if (dx != nullptr)
      gemm(false, false, batch, in_, out_, T(1), dy, out_, w_.v.data(), in_, T(0),
           dx, in_);
  }

  void params(const std::string& prefix, ParamList<T>& out) {
    out.push_back({prefix + ".weight", &w_});
    out.push_back({prefix + ".bias", &b_});
  }

  int in_features() const { return in_; }
  int out_features() const { return out_; }

 private:
  int in_ = 0, out_ = 0;
  Tensor<T> w_, b_;
};

// ---------------------------------------------------------------------------
// 1-D convolution (cross-correlation) via im2col.
//
// Layout: channel-major maps (C, B*L) with per-sample segments contiguous in
// each channel row (element index b*L + l). Batch norm and ReLU then work
// row-wise and the convolution itself is one large GEMM.

template <typename T>
struct Conv1dCache {
  std::vector<T> col;  // (C_in*K, B*L_out)
  int batch = 0;
  int in_len = 0;
  int out_len = 0;
};

template <typename T>
class Conv1d {
 public:
  Conv1d() = default;
  Conv1d(int c_in, int c_out, int kernel, int stride, int pad, Rng& rng)
      : c_in_(c_in), c_out_(c_out), kernel_(kernel), stride_(stride), pad_(pad) {
    if (kernel < 1 || stride < 1 || pad < 0)
      throw std::invalid_argument("bad conv geometry");
    w_.resize({c_out, c_in * kernel});
    b_.resize({c_out});
    w_.init_uniform(rng, c_in * kernel);
    b_.init_uniform(rng, c_in * kernel);
  }

  int out_len(int in_len) const { return conv_out_len(in_len, kernel_, stride_, pad_); }

  /// x: (C_in, B*L) -> y: (C_out, B*L_out), both channel-major.
  void forward(const T* x, int batch, int in_len, Conv1dCache<T>& cache, T* y) const {
    const int lo = out_len(in_len);
    cache.batch = batch;
    cache.in_len = in_len;
    cache.out_len = lo;
    const int cols = batch * lo;
    cache.col.assign(static_cast<size_t>(c_in_) * kernel_ * cols, T(0));
    for (int c = 0; c < c_in_; ++c) {
      const T* xrow = x + static_cast<size_t>(c) * batch * in_len;
      for (int k = 0; k < kernel_; ++k) {
        T* crow = cache.col.data() + (static_cast<size_t>(c) * kernel_ + k) * cols;
        for (int b = 0; b < batch; ++b) {
          for (int l = 0; l < lo; ++l) {
            const int src = l * stride_ - pad_ + k;
            if (src < 0 || src >= in_len) continue;
            crow[b * lo + l] = xrow[b * in_len + src];
          }
        }
      }
    }
    gemm(false, false, c_out_, cols, c_in_ * kernel_, T(1), w_.v.data(),
         c_in_ * kernel_, cache.col.data(), cols, T(0), y, cols);
    for (int c = 0; c < c_out_; ++c) {
      T bias = b_.v[c];
      T* row = y + static_cast<size_t>(c) * cols;
      for (int i = 0; i < cols; ++i) row[i] += bias;
    }
  }

  /// dy: (C_out, B*L_out). dx (optional): (C_in, B*L) channel-major.
  void backward(const T* dy, const Conv1dCache<T>& cache, T* dx) {
    const int cols = cache.batch * cache.out_len;
    gemm(false, true, c_out_, c_in_ * kernel_, cols, T(1), dy, cols,
         cache.col.data(), cols, T(1), w_.g.data(), c_in_ * kernel_);
    for (int c = 0; c < c_out_; ++c) {
      const T* row = dy + static_cast<size_t>(c) * cols;
      T acc = 0;
      for (int i = 0; i < cols; ++i) acc += row[i];
      b_.g[c] += acc;
    }
    if (dx == nullptr) return;
    std::vector<T> dcol(static_cast<size_t>(c_in_) * kernel_ * cols);
    gemm(true, false, c_in_ * kernel_, cols, c_out_, T(1), w_.v.data(),
         c_in_ * kernel_, dy, cols, T(0), dcol.data(), cols);
    std::fill(dx, dx + static_cast<size_t>(c_in_) * cache.batch * cache.in_len, T(0));
    for (int c = 0; c < c_in_; ++c) {
      T* dxrow = dx + static_cast<size_t>(c) * cache.batch * cache.in_len;
      for (int k = 0; k < kernel_; ++k) {
        const T* crow = dcol.data() + (static_cast<size_t>(c) * kernel_ + k) * cols;
        for (int b = 0; b < cache.batch; ++b) {
          for (int l = 0; l < cache.out_len; ++l) {
            const int src = l * stride_ - pad_ + k;
            if (src < 0 || src >= cache.in_len) continue;
            dxrow[b * cache.in_len + src] += crow[b * cache.out_len + l];
          }
        }
      }
    }
  }

  void params(const std::string& prefix, ParamList<T>& out) {
    out.push_back({prefix + ".weight", &w_});
    out.push_back({prefix + ".bias", &b_});
  }

  int in_channels() const { return c_in_; }
  int out_channels() const { return c_out_; }

 private:
  int c_in_ = 0, c_out_ = 0, kernel_ = 0, stride_ = 1, pad_ = 0;
  Tensor<T> w_, b_;
};

// ---------------------------------------------------------------------------
// Batch normalization over channel-major maps (C, N) with N = B*L.

template <typename T>
struct BatchNormCache {
  std::vector<T> xhat;       // (C, N)
  std::vector<T> inv_std;    // per channel
  int n = 0;
};

template <typename T>
class BatchNorm1d {
 public:
  BatchNorm1d() = default;
  explicit BatchNorm1d(int channels, T momentum = T(0.1), T eps = T(1e-5))
      : c_(channels), momentum_(momentum), eps_(eps) {
    gamma_.resize({channels});
    beta_.resize({channels});
    running_mean_.resize({channels});
    running_var_.resize({channels});
    std::fill(gamma_.v.begin(), gamma_.v.end(), T(1));
    std::fill(running_var_.v.begin(), running_var_.v.end(), T(1));
  }

  /// In-place normalization of x (C, N). Train mode uses batch moments and
  /// updates the running estimates; infer mode uses the running moments.
  void forward(T* x, int n, bool train, BatchNormCache<T>& cache) {
    cache.n = n;
    cache.inv_std.resize(c_);
    cache.xhat.resize(static_cast<size_t>(c_) * n);
    for (int c = 0; c < c_; ++c) {
      T* row = x + static_cast<size_t>(c) * n;
      T mean, var;
      if (train) {
        T sum = 0;
        for (int i = 0; i < n; ++i) sum += row[i];
        mean = sum / T(n);
        T sq = 0;
        for (int i = 0; i < n; ++i) sq += (row[i] - mean) * (row[i] - mean);
        var = sq / T(n);
        running_mean_.v[c] = (T(1) - momentum_) * running_mean_.v[c] + momentum_ * mean;
        running_var_.v[c] = (T(1) - momentum_) * running_var_.v[c] + momentum_ * var;
      } else {
        mean = running_mean_.v[c];
        var = running_var_.v[c];
      }
      const T inv = T(1) / std::sqrt(var + eps_);
      cache.inv_std[c] = inv;
      T* xh = cache.xhat.data() + static_cast<size_t>(c) * n;
      for (int i = 0; i < n; ++i) {
        xh[i] = (row[i] - mean) * inv;
        row[i] = gamma_.v[c] * xh[i] + beta_.v[c];
      }
    }
  }

  /// In-place gradient: on entry dx holds d(out), on exit d(in).
  /// Uses the train-mode dependency of the batch moments on the inputs.
  void backward(T* dx, const BatchNormCache<T>& cache) {
    const int n = cache.n;
    for (int c = 0; c < c_; ++c) {
      T* dy = dx + static_cast<size_t>(c) * n;
      const T* xh = cache.xhat.data() + static_cast<size_t>(c) * n;
      T sum_dy = 0, sum_dy_xhat = 0;
      for (int i = 0; i < n; ++i) {
        sum_dy += dy[i];
        sum_dy_xhat += dy[i] * xh[i];
      }
      gamma_.g[c] += sum_dy_xhat;
      beta_.g[c] += sum_dy;
      const T scale = gamma_.v[c] * cache.inv_std[c] / T(n);
      for (int i = 0; i < n; ++i)
        dy[i] = scale * (T(n) * dy[i] - sum_dy - xh[i] * sum_dy_xhat);
    }
  }

  void params(const std::string& prefix, ParamList<T>& out) {
    out.push_back({prefix + ".gamma", &gamma_});
    out.push_back({prefix + ".beta", &beta_});
  }

  /// Running moments are state, not optimized parameters; serialized anyway.
  void state(const std::string& prefix, ParamList<T>& out) {
    out.push_back({prefix + ".running_mean", &running_mean_});
    out.push_back({prefix + ".running_var", &running_var_});
  }

 private:
  int c_ = 0;
  T momentum_ = T(0.1), eps_ = T(1e-5);
  Tensor<T> gamma_, beta_, running_mean_, running_var_;
};

// ---------------------------------------------------------------------------
// ReLU, global max pooling, dropout.

template <typename T>
struct ReluCache {
  std::vector<uint8_t> active;
};

template <typename T>
inline void relu_forward(T* x, size_t n, ReluCache<T>& cache) {
  cache.active.resize(n);
  for (size_t i = 0; i < n; ++i) {
    cache.active[i] = x[i] > T(0);
    if (!cache.active[i]) x[i] = T(0);
  }
}

template <typename T>
inline void relu_backward(T* dx, const ReluCache<T>& cache) {
  for (size_t i = 0; i < cache.active.size(); ++i)
    if (!cache.active[i]) dx[i] = T(0);
}

template <typename T>
struct MaxPoolCache {
  std::vector<int> argmax;  // (B, C)
  int batch = 0, channels = 0, len = 0;
};

/// x: (C, B*L) channel-major -> y: (B, C) sample-major, per-channel maximum.
template <typename T>
inline void global_maxpool_forward(const T* x, int channels, int batch, int len,
                                   MaxPoolCache<T>& cache, T* y) {
  cache.batch = batch;
  cache.channels = channels;
  cache.len = len;
  cache.argmax.resize(static_cast<size_t>(batch) * channels);
  for (int c = 0; c < channels; ++c) {
    const T* row = x + static_cast<size_t>(c) * batch * len;
    for (int b = 0; b < batch; ++b) {
      const T* seg = row + static_cast<size_t>(b) * len;
      int arg = 0;
      T best = seg[0];
      for (int l = 1; l < len; ++l) {
        if (seg[l] > best) {
          best = seg[l];
          arg = l;
        }
      }
      y[static_cast<size_t>(b) * channels + c] = best;
      cache.argmax[static_cast<size_t>(b) * channels + c] = arg;
    }
  }
}

/// dy: (B, C) -> dx: (C, B*L); gradient routed to the argmax position only.
template <typename T>
inline void global_maxpool_backward(const T* dy, const MaxPoolCache<T>& cache, T* dx) {
  std::fill(dx, dx + static_cast<size_t>(cache.channels) * cache.batch * cache.len, T(0));
  for (int b = 0; b < cache.batch; ++b) {
    for (int c = 0; c < cache.channels; ++c) {
      int arg = cache.argmax[static_cast<size_t>(b) * cache.channels + c];
      dx[(static_cast<size_t>(c) * cache.batch + b) * cache.len + arg] =
          dy[static_cast<size_t>(b) * cache.channels + c];
    }
  }
}

template <typename T>
struct DropoutCache {
  std::vector<uint8_t> keep;
};

/// Inverted dropout: survivors scaled by 1/(1-rate) in train mode; identity
/// in inference mode or at rate 0.
template <typename T>
inline void dropout_forward(T* x, size_t n, double rate, bool train, Rng& rng,
                            DropoutCache<T>& cache) {
  if (!train || rate <= 0.0) {
    cache.keep.clear();
    return;
  }
  if (rate >= 1.0) throw std::invalid_argument("dropout rate must be < 1");
  cache.keep.resize(n);
  const T scale = T(1.0 / (1.0 - rate));
  for (size_t i = 0; i < n; ++i) {
    cache.keep[i] = rng.uniform() >= rate;
    x[i] = cache.keep[i] ? x[i] * scale : T(0);
  }
}

template <typename T>
inline void dropout_backward(T* dx, size_t n, double rate, const DropoutCache<T>& cache) {
  if (cache.keep.empty()) return;
  const T scale = T(1.0 / (1.0 - rate));
  for (size_t i = 0; i < n; ++i) dx[i] = cache.keep[i] ? dx[i] * scale : T(0);
}

// ---------------------------------------------------------------------------
// Softmax and cross entropy.

/// Row-wise, numerically shifted softmax; probs may alias logits.
template <typename T>
inline void softmax(const T* logits, int batch, int n, T* probs) {
  for (int b = 0; b < batch; ++b) {
    const T* in = logits + static_cast<size_t>(b) * n;
    T* out = probs + static_cast<size_t>(b) * n;
    T mx = in[0];
    for (int i = 1; i < n; ++i) mx = std::max(mx, in[i]);
    T sum = 0;
    for (int i = 0; i < n; ++i) {
      out[i] = std::exp(in[i] - mx);
      sum += out[i];
    }
    const T inv = T(1) / sum;
    for (int i = 0; i < n; ++i) out[i] *= inv;
  }
}

/// Mean cross entropy over the batch. If dlogits is non-null it receives
/// weight*(probs - onehot), the gradient of weight*sum_b CE_b.
template <typename T>
inline T softmax_crossentropy(const T* logits, const int* labels, int batch, int n,
                              T* probs, T* dlogits, T weight) {
  softmax(logits, batch, n, probs);
  T loss = 0;
  for (int b = 0; b < batch; ++b) {
    const T* p = probs + static_cast<size_t>(b) * n;
    const T p_label = std::max(p[labels[b]], std::numeric_limits<T>::min());
    loss -= std::log(p_label);
    if (dlogits != nullptr) {
      T* d = dlogits + static_cast<size_t>(b) * n;
      for (int i = 0; i < n; ++i) d[i] = weight * p[i];
      d[labels[b]] -= weight;
    }
  }
  return loss / T(batch);
}

}  // namespace beamsim::nn

#endif
