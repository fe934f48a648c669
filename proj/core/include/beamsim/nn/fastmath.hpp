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

#ifndef BEAMSIM_NN_FASTMATH_HPP
#define BEAMSIM_NN_FASTMATH_HPP

#include <bit>
#include <cmath>
#include <cstdint>

namespace beamsim::nn {

/// Vectorizable single-precision exp: exponent extraction plus a degree-5
/// polynomial on the reduced interval (relative error ~3e-7). The gate
/// activations of float training are the only consumers; the double
/// overload stays on libm for the test/oracle paths.
inline float fast_exp(float x) {
  x = std::min(std::max(x, -87.0f), 88.0f);
  const float log2e = 1.4426950408889634f;
  float t = x * log2e;
  float fk = std::floor(t);
  float f = t - fk;  // f in [0, 1)
  // 2^f on [0,1) via a degree-5 minimax-style fit.
  float p = 1.0f +
            f * (0.6931471805599453f +
                 f * (0.2401596780024136f +
                      f * (0.0555041086648216f +
                           f * (0.0096181291076285f + f * 0.0013333558146428f))));
  int32_t k = static_cast<int32_t>(fk);
  uint32_t bits = std::bit_cast<uint32_t>(p) + (static_cast<uint32_t>(k) << 23);
  return std::bit_cast<float>(bits);
}

inline double fast_exp(double x) { return std::exp(x); }

template <typename T>
inline T fast_sigmoid(T x) {
  return T(1) / (T(1) + fast_exp(-x));
}

template <typename T>
inline T fast_tanh(T x) {
  // tanh(x) = 2*sigmoid(2x) - 1 keeps a single exp evaluation.
  return T(2) / (T(1) + fast_exp(T(-2) * x)) - T(1);
}

}  // namespace beamsim::nn

#endif
