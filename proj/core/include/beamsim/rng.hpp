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

#ifndef BEAMSIM_RNG_HPP
#define BEAMSIM_RNG_HPP

#include <cmath>
#include <cstdint>

#include "beamsim/common.hpp"

namespace beamsim {

/// splitmix64 finalizer; used for seeding and for keyed (counter-based) draws.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic xoshiro256++ generator. Self-contained so that streams are
/// bit-stable across standard libraries and platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& word : s_) {
      x += 0x9e3779b97f4a7c15ULL;
      uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Standard normal via Box-Muller (pairwise, one value cached).
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the log finite.
    double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * pi * u2);
  }

  /// Circularly-symmetric complex normal CN(0, 1).
  cd cgaussian() {
    double re = gaussian();
    double im = gaussian();
    return cd(re * std::sqrt(0.5), im * std::sqrt(0.5));
  }

 private:
  static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Which measurement family a noise draw belongs to. Keeps wide-sweep and
/// narrow-beam measurements on disjoint noise streams within a training step.
enum class BeamDomain : uint32_t { wide = 0, narrow = 1 };

/// Counter-based noise stream: the draw for (t, domain, beam) is a pure
/// function of the key, so a partial sweep reproduces exactly the entries of
/// the full sweep it is a subset of.
struct NoiseStream {
  uint64_t seed = 0;

  /// CN(0,1) draw for the keyed measurement slot.
  cd complex_gaussian(uint32_t t, BeamDomain domain, uint32_t beam_index) const {
    uint64_t key = mix64(seed ^ mix64((uint64_t(t) << 40) ^
                                      (uint64_t(domain) << 32) ^ beam_index));
    uint64_t a = mix64(key ^ 0x6a09e667f3bcc909ULL);
    uint64_t b = mix64(key ^ 0xbb67ae8584caa73bULL);
    double u1 = static_cast<double>((a >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;        // [0, 1)
    double r = std::sqrt(-std::log(u1));  // Rayleigh for unit complex variance
    return cd(r * std::cos(2.0 * pi * u2), r * std::sin(2.0 * pi * u2));
  }
};

}  // namespace beamsim

#endif
