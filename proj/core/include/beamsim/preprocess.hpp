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

#ifndef BEAMSIM_PREPROCESS_HPP
#define BEAMSIM_PREPROCESS_HPP

#include <span>
#include <stdexcept>

#include "beamsim/protocols.hpp"

namespace beamsim {

/// Normalizes a measurement vector by the maximum magnitude over its
/// *measured* entries and splits it into real/imaginary feature rows.
/// Unmeasured entries stay exactly zero. Returns false (rows zeroed) when
/// every measured entry is zero, the degenerate case the caller must handle.
template <typename T>
bool preprocess_into(std::span<const cd> values, std::span<const uint8_t> mask,
                     T* re_row, T* im_row) {
  const int n = static_cast<int>(values.size());
  double max_mag = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!mask.empty() && !mask[i]) continue;
    max_mag = std::max(max_mag, std::abs(values[i]));
  }
  if (max_mag <= 0.0) {
    for (int i = 0; i < n; ++i) re_row[i] = im_row[i] = T(0);
    return false;
  }
  const double inv = 1.0 / max_mag;
  for (int i = 0; i < n; ++i) {
    if (!mask.empty() && !mask[i]) {
      re_row[i] = im_row[i] = T(0);
      continue;
    }
    re_row[i] = static_cast<T>(values[i].real() * inv);
    im_row[i] = static_cast<T>(values[i].imag() * inv);
  }
  return true;
}

/// Two-channel feature block (row 0 = real parts, row 1 = imaginary parts)
/// for a single measurement vector. Throws std::domain_error when the vector
/// has no nonzero measured entry.
template <typename T>
std::vector<T> preprocess(const MeasurementVector& y) {
  std::vector<T> out(2 * y.values.size());
  if (!preprocess_into<T>(y.values, y.mask, out.data(), out.data() + y.values.size()))
    throw std::domain_error("measurement vector has no nonzero measured entry");
  return out;
}

}  // namespace beamsim

#endif
