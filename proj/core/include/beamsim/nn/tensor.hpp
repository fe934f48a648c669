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

#ifndef BEAMSIM_NN_TENSOR_HPP
#define BEAMSIM_NN_TENSOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "beamsim/rng.hpp"

namespace beamsim::nn {

/// Dense value buffer with shape metadata and a same-shape gradient buffer.
/// Layouts are row-major; layers document the dimension meaning at use sites.
template <typename T>
struct Tensor {
  std::vector<int> shape;
  std::vector<T> v;
  std::vector<T> g;

  Tensor() = default;
  explicit Tensor(std::vector<int> dims) { resize(std::move(dims)); }

  void resize(std::vector<int> dims) {
    shape = std::move(dims);
    v.assign(numel(), T(0));
    g.assign(numel(), T(0));
  }

  int64_t numel() const {
    int64_t n = 1;
    for (int d : shape) n *= d;
    return n;
  }

  void zero_grad() { std::fill(g.begin(), g.end(), T(0)); }

  /// Fan-in-scaled uniform init in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  void init_uniform(Rng& rng, int fan_in) {
    double bound = 1.0 / std::sqrt(static_cast<double>(fan_in > 0 ? fan_in : 1));
    for (auto& x : v) x = static_cast<T>(rng.uniform(-bound, bound));
  }
};

/// Named handle on a parameter tensor; the unit the optimizer and the
/// checkpoint serializer iterate over.
template <typename T>
struct ParamRef {
  std::string name;
  Tensor<T>* tensor = nullptr;
};

template <typename T>
using ParamList = std::vector<ParamRef<T>>;

}  // namespace beamsim::nn

#endif
