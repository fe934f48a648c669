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

#ifndef BEAMSIM_COMMON_HPP
#define BEAMSIM_COMMON_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace beamsim {

using cd = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// All dB <-> linear conversions live here. The linear power unit throughout
// the library is the milliwatt, so dBm values convert with the same formulas
// as plain dB ratios.
//
//   linear = 10^(dB/10)        dB = 10*log10(linear)
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }
inline double mw_to_dbm(double mw) { return linear_to_db(mw); }

/// 2-D position/direction in meters, BS at the origin.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

/// Azimuth of `p` as seen from the origin, in (-pi, pi].
inline double azimuth(const Vec2& p) {
  double a = std::atan2(p.y, p.x);
  if (a <= -pi) a = pi;
  return a;
}

}  // namespace beamsim

#endif
