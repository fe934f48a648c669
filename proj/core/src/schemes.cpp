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

#include "beamsim/schemes.hpp"

#include <algorithm>
#include <stdexcept>

namespace beamsim {

Scheme scheme_from_string(const std::string& s) {
  if (s == "cnn") return Scheme::cnn;
  if (s == "lstm") return Scheme::lstm;
  if (s == "adaptive") return Scheme::adaptive;
  if (s == "enhanced") return Scheme::enhanced;
  if (s == "sampled-dnn" || s == "sampled_dnn") return Scheme::sampled_dnn;
  if (s == "power-ratio" || s == "power_ratio") return Scheme::power_ratio;
  throw std::invalid_argument("unknown scheme: " + s);
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::cnn: return "cnn";
    case Scheme::lstm: return "lstm";
    case Scheme::adaptive: return "adaptive";
    case Scheme::enhanced: return "enhanced";
    case Scheme::sampled_dnn: return "sampled-dnn";
    case Scheme::power_ratio: return "power-ratio";
  }
  return "?";
}

SelectCriterion criterion_from_string(const std::string& s) {
  if (s == "onc") return SelectCriterion::onc;
  if (s == "mpc") return SelectCriterion::mpc;
  throw std::invalid_argument("unknown selection criterion: " + s);
}

std::string to_string(SelectCriterion c) {
  return c == SelectCriterion::onc ? "onc" : "mpc";
}

void SchemeConfig::validate(int n_wide) const {
  if (k_trained_wide < 1 || k_trained_wide > n_wide)
    throw std::invalid_argument("k_trained_wide must be in [1, n_wide]");
  if (k_n_refine < 0) throw std::invalid_argument("k_n_refine must be >= 0");
  if (wide_loss_weight < 0.0) throw std::invalid_argument("wide loss weight must be >= 0");
  if (learning_rate <= 0.0) throw std::invalid_argument("learning rate must be > 0");
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
}

std::vector<int> select_onc(double reference_dir_rad,
                            const std::vector<double>& wide_directions, int k) {
  const int n = static_cast<int>(wide_directions.size());
  std::vector<double> neg_dist(n);
  for (int m = 0; m < n; ++m) {
    double d = std::fmod(std::abs(wide_directions[m] - reference_dir_rad), pi);
    neg_dist[m] = -d;  // top_k on negated distance = k smallest distances
  }
  return top_k_indices(neg_dist, std::min(k, n));
}

std::vector<double> aggregate_wide_probs(std::span<const double> narrow_probs,
                                         int s_tx) {
  if (narrow_probs.size() % s_tx != 0)
    throw std::invalid_argument("narrow probability count must divide by s_tx");
  std::vector<double> wide(narrow_probs.size() / s_tx, 0.0);
  for (size_t m = 0; m < narrow_probs.size(); ++m) wide[m / s_tx] += narrow_probs[m];
  return wide;
}

std::vector<int> select_mpc_narrow(std::span<const double> narrow_probs, int s_tx,
                                   int k) {
  std::vector<double> wide = aggregate_wide_probs(narrow_probs, s_tx);
  return top_k_indices(wide, std::min<int>(k, wide.size()));
}

std::vector<int> select_mpc_wide(std::span<const double> wide_probs, int k) {
  return top_k_indices(wide_probs, std::min<int>(k, wide_probs.size()));
}

void softmax_double(const std::vector<double>& logits, std::vector<double>& probs) {
  probs.resize(logits.size());
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - mx);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
}

}  // namespace beamsim
