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

#include "beamsim/baselines.hpp"

#include <stdexcept>

namespace beamsim {

namespace {

// |Dirichlet kernel| of an M-element array at sin-domain offset u.
double pattern_mag(double u, int m_ant) {
  if (u == 0.0) return 1.0;
  double den = m_ant * std::sin(pi * u / 2.0);
  if (den == 0.0) return 1.0;
  return std::abs(std::sin(pi * m_ant * u / 2.0) / den);
}

int nearest_in_sin(double sin_phi, const std::vector<double>& directions) {
  int best = 0;
  double best_d = std::abs(std::sin(directions[0]) - sin_phi);
  for (int m = 1; m < static_cast<int>(directions.size()); ++m) {
    double d = std::abs(std::sin(directions[m]) - sin_phi);
    if (d < best_d) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

}  // namespace

int baseline_power_ratio(const MeasurementVector& sweep, const Codebook& wide,
                         const Codebook& narrow) {
  if (sweep.size() != wide.size())
    throw std::invalid_argument("sweep length does not match wide codebook");

  auto measured = [&](int m) {
    return m >= 0 && m < sweep.size() && (sweep.mask.empty() || sweep.mask[m]);
  };

  int strongest = -1;
  double p_max = -1.0;
  for (int m = 0; m < sweep.size(); ++m) {
    if (!measured(m)) continue;
    double p = std::norm(sweep.values[m]);
    if (p > p_max) {
      p_max = p;
      strongest = m;
    }
  }
  if (strongest < 0) throw std::invalid_argument("sweep has no measured entry");

  // Single wide beam: no neighbor information, fall back to its center.
  if (wide.size() == 1)
    return nearest_in_sin(std::sin(wide.directions[0]), narrow.directions);

  int neighbor = -1;
  double p_nb = -1.0;
  for (int cand : {strongest - 1, strongest + 1}) {
    if (!measured(cand)) continue;
    double p = std::norm(sweep.values[cand]);
    if (p > p_nb) {
      p_nb = p;
      neighbor = cand;
    }
  }
  if (neighbor < 0)
    return nearest_in_sin(std::sin(wide.directions[strongest]), narrow.directions);

  const int m_ant = wide.antennas;
  const double s_main = std::sin(wide.directions[strongest]);
  const double s_nb = std::sin(wide.directions[neighbor]);
  const double ratio =
      std::sqrt(std::max(p_max, 0.0) / std::max(p_nb, 1e-300));

  // Search the strongest beam's sin-domain cell for AoDs whose model ratio
  // |q_main| / |q_nb| equals the measured one. Past the neighbor's first
  // pattern null the ratio is no longer monotone, so the equation can have
  // several roots across the cell; all are collected and disambiguated below.
  double cell_lo, cell_hi;
  {
    double left = strongest > 0 ? 0.5 * (std::sin(wide.directions[strongest - 1]) + s_main)
                                : -1.0;
    double right = strongest + 1 < wide.size()
                       ? 0.5 * (std::sin(wide.directions[strongest + 1]) + s_main)
                       : 1.0;
    cell_lo = left;
    cell_hi = right;
  }
  auto f = [&](double x) {
    double nb = pattern_mag(s_nb - x, m_ant);
    return pattern_mag(s_main - x, m_ant) / std::max(nb, 1e-300) - ratio;
  };
  std::vector<double> roots;
  const int grid = 4096;
  double prev_x = cell_lo;
  double prev_f = f(prev_x);
  for (int g = 1; g <= grid; ++g) {
    double x = cell_lo + (cell_hi - cell_lo) * g / grid;
    double fx = f(x);
    if (prev_f == 0.0) roots.push_back(prev_x);
    if (prev_f * fx < 0.0) {
      double a = prev_x, b = x, fa = prev_f;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (a + b);
        double fm = f(mid);
        if (fa * fm <= 0.0)
          b = mid;
        else {
          a = mid;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_f = fx;
  }
  if (roots.empty()) roots.push_back(s_main);

  double sin_est = roots.front();
  if (roots.size() > 1) {
    // Disambiguate with the strongest measured beam outside the ratio pair:
    // the model predicts its magnitude relative to the main beam.
    int witness = -1;
    double p_w = -1.0;
    for (int m = 0; m < sweep.size(); ++m) {
      if (m == strongest || m == neighbor || !measured(m)) continue;
      double p = std::norm(sweep.values[m]);
      if (p > p_w) {
        p_w = p;
        witness = m;
      }
    }
    if (witness >= 0) {
      const double s_w = std::sin(wide.directions[witness]);
      const double measured_ratio =
          std::sqrt(std::max(p_w, 0.0) / std::max(p_max, 1e-300));
      double best_err = 1e300;
      for (double root : roots) {
        double model = pattern_mag(s_w - root, m_ant) /
                       std::max(pattern_mag(s_main - root, m_ant), 1e-300);
        double err = std::abs(model - measured_ratio);
        if (err < best_err) {
          best_err = err;
          sin_est = root;
        }
      }
    } else {
      // No witness beam: prefer the root nearest the midpoint side.
      sin_est = roots.back();
    }
  }
  return nearest_in_sin(sin_est, narrow.directions);
}

std::vector<int> sampled_beam_indices(int n_tx, int s_tx) {
  if (n_tx < 1 || s_tx < 1 || n_tx % s_tx != 0)
    throw std::invalid_argument("bad sampled-beam geometry");
  std::vector<int> out;
  for (int m = 0; m < n_tx; m += s_tx) out.push_back(m);
  return out;
}

}  // namespace beamsim
