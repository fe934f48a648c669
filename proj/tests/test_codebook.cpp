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

#include <doctest.h>

#include "beamsim/codebook.hpp"

using namespace beamsim;

namespace {

/// Reference gain via the explicit inner product a_tx(phi)^H f_m.
cd direct_gain(double phi, std::span<const cd> beam) {
  std::vector<cd> a = steering_vector(phi, static_cast<int>(beam.size()));
  cd acc(0.0, 0.0);
  for (size_t k = 0; k < beam.size(); ++k) acc += std::conj(a[k]) * beam[k];
  return acc;
}

}  // namespace

TEST_CASE("narrow codebook directions follow the uniform grid") {
  Codebook cb = narrow_codebook(64, 64, pi);
  CHECK(cb.directions.front() == doctest::Approx(-pi / 2 + pi / 128).epsilon(1e-12));
  CHECK(cb.directions.back() == doctest::Approx(pi / 2 - pi / 128).epsilon(1e-12));
  CHECK(cb.directions.front() == doctest::Approx(-cb.directions.back()));
  for (size_t m = 1; m < cb.directions.size(); ++m) {
    CHECK(cb.directions[m] - cb.directions[m - 1] ==
          doctest::Approx(pi / 64).epsilon(1e-12));
  }
}

TEST_CASE("every codeword is unit norm") {
  for (const Codebook& cb :
       {narrow_codebook(64, 64, pi), wide_codebook(64, 64, 4, pi)}) {
    for (int m = 0; m < cb.size(); ++m) {
      double norm2 = 0.0;
      for (const cd& v : cb.beams[m]) norm2 += std::norm(v);
      CHECK(std::abs(norm2 - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("wide codebook geometry") {
  Codebook wide = wide_codebook(64, 64, 4, pi);
  CHECK(wide.size() == 16);
  CHECK(wide.antennas == 16);
  for (size_t m = 1; m < wide.directions.size(); ++m)
    CHECK(wide.directions[m] - wide.directions[m - 1] ==
          doctest::Approx(pi / 16).epsilon(1e-12));

  // Each wide direction is the mean of its covered narrow directions.
  Codebook narrow = narrow_codebook(64, 64, pi);
  for (int m = 0; m < wide.size(); ++m) {
    double mean = 0.0;
    for (int j = 0; j < 4; ++j) mean += narrow.directions[m * 4 + j];
    mean /= 4.0;
    CHECK(wide.directions[m] == doctest::Approx(mean).epsilon(1e-12));
  }

  // s = 1 degenerates to the narrow codebook.
  Codebook w1 = wide_codebook(64, 64, 1, pi);
  REQUIRE(w1.size() == narrow.size());
  for (int m = 0; m < w1.size(); ++m) {
    CHECK(w1.directions[m] == narrow.directions[m]);
    CHECK(w1.beams[m] == narrow.beams[m]);
  }
}

TEST_CASE("leakage gain: aligned limit, null and analytic profile") {
  Codebook cb = narrow_codebook(16, 16, pi);
  const int m = 9;
  CHECK(std::abs(leakage_gain(cb.directions[m], m, cb)) == doctest::Approx(1.0));

  // Exact Dirichlet null at a sin-domain offset of 2/M.
  const double null_phi = std::asin(std::sin(cb.directions[m]) - 2.0 / 16.0);
  const double x = std::sin(cb.directions[m]) - std::sin(null_phi);
  if (16.0 * x / 2.0 == std::round(16.0 * x / 2.0)) {
    CHECK(leakage_gain(null_phi, m, cb) == cd(0.0, 0.0));
  } else {
    CHECK(std::abs(leakage_gain(null_phi, m, cb)) < 1e-9);
  }
}

TEST_CASE("leakage profile: argmax location and match to inner products") {
  Codebook cb = narrow_codebook(16, 16, pi);
  const double phi = 0.02 * pi;
  int argmax = 0;
  double best = -1.0;
  for (int m = 0; m < cb.size(); ++m) {
    cd q = leakage_gain(phi, m, cb);
    cd ref = direct_gain(phi, cb.beam(m));
    CHECK(std::abs(std::abs(q) - std::abs(ref)) < 1e-9);
    if (std::abs(q) > best) {
      best = std::abs(q);
      argmax = m;
    }
  }
  CHECK(cb.directions[argmax] == doctest::Approx(pi / 32).epsilon(1e-12));
}

TEST_CASE("leakage gain equals inner products over random pairs") {
  Rng rng(123);
  for (int m_ant : {8, 16, 64}) {
    Codebook cb = narrow_codebook(m_ant, m_ant, pi);
    for (int trial = 0; trial < 500; ++trial) {
      double phi = rng.uniform(-pi / 2, pi / 2);
      int m = static_cast<int>(rng.next_u64() % cb.size());
      cd q = leakage_gain(phi, m, cb);
      cd ref = direct_gain(phi, cb.beam(m));
      CHECK(std::abs(std::abs(q) - std::abs(ref)) < 1e-9);
    }
  }
}

TEST_CASE("leakage gain depends on the AoD only through its sine") {
  Codebook cb = narrow_codebook(32, 32, pi);
  for (double phi : {0.13, 0.71, -0.4}) {
    for (int m : {0, 7, 31}) {
      cd a = leakage_gain(phi, m, cb);
      cd b = leakage_gain(pi - phi, m, cb);
      CHECK(a.real() == doctest::Approx(b.real()).epsilon(1e-12));
      CHECK(a.imag() == doctest::Approx(b.imag()).epsilon(1e-12));
    }
  }
}

TEST_CASE("best_beam_oracle picks the sin-domain nearest beam for LOS") {
  Codebook cb = narrow_codebook(64, 64, pi);
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    double aod = rng.uniform(-pi / 2 + 0.02, pi / 2 - 0.02);
    PathSet p;
    p.los.aod_rad = aod;
    p.los.pathloss_db = 0.0;
    ChannelMatrix h = assemble(p, 64, 1);
    int best = best_beam_oracle(h, cb);
    int nearest = 0;
    double nd = 1e9;
    for (int m = 0; m < cb.size(); ++m) {
      double d = std::abs(std::sin(cb.directions[m]) - std::sin(aod));
      if (d < nd) {
        nd = d;
        nearest = m;
      }
    }
    CHECK(best == nearest);
  }
}

TEST_CASE("best_beam_oracle tie and degenerate cases") {
  PathSet p;
  p.los.aod_rad = 0.0;
  p.los.pathloss_db = 0.0;
  ChannelMatrix h = assemble(p, 8, 1);

  Codebook one = narrow_codebook(8, 1, pi);
  CHECK(best_beam_oracle(h, one) == 0);

  // A zero channel makes every beam tie; the lowest index must win.
  ChannelMatrix zero = h;
  std::fill(zero.h.begin(), zero.h.end(), cd(0.0, 0.0));
  Codebook cb = narrow_codebook(8, 8, pi);
  CHECK(best_beam_oracle(zero, cb) == 0);
}
