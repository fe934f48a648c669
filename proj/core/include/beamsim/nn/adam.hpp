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

#ifndef BEAMSIM_NN_ADAM_HPP
#define BEAMSIM_NN_ADAM_HPP

#include "beamsim/nn/tensor.hpp"

namespace beamsim::nn {

/// Adam with bias correction; beta1 = 0.9, beta2 = 0.999, eps = 1e-8.
template <typename T>
class Adam {
 public:
  Adam() = default;
  explicit Adam(T lr, T beta1 = T(0.9), T beta2 = T(0.999), T eps = T(1e-8))
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void attach(const ParamList<T>& params) {
    m_.resize(params.size());
    v_.resize(params.size());
    for (size_t p = 0; p < params.size(); ++p) {
      m_[p].assign(params[p].tensor->v.size(), T(0));
      v_[p].assign(params[p].tensor->v.size(), T(0));
    }
    step_count_ = 0;
  }

  /// One update from the accumulated gradients; gradients are left intact
  /// (callers zero them at the start of the next accumulation).
  void step(const ParamList<T>& params) {
    ++step_count_;
    const T bc1 = T(1) - std::pow(beta1_, T(step_count_));
    const T bc2 = T(1) - std::pow(beta2_, T(step_count_));
    for (size_t p = 0; p < params.size(); ++p) {
      Tensor<T>& t = *params[p].tensor;
      T* m = m_[p].data();
      T* v = v_[p].data();
      for (size_t i = 0; i < t.v.size(); ++i) {
        const T g = t.g[i];
        m[i] = beta1_ * m[i] + (T(1) - beta1_) * g;
        v[i] = beta2_ * v[i] + (T(1) - beta2_) * g * g;
        const T mhat = m[i] / bc1;
        const T vhat = v[i] / bc2;
        t.v[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
      }
    }
  }

  void set_lr(T lr) { lr_ = lr; }
  T lr() const { return lr_; }
  int64_t step_count() const { return step_count_; }
  const std::vector<std::vector<T>>& first_moments() const { return m_; }
  const std::vector<std::vector<T>>& second_moments() const { return v_; }

 private:
  T lr_ = T(1e-3), beta1_ = T(0.9), beta2_ = T(0.999), eps_ = T(1e-8);
  int64_t step_count_ = 0;
  std::vector<std::vector<T>> m_, v_;
};

}  // namespace beamsim::nn

#endif
