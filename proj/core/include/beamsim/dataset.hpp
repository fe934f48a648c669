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

#ifndef BEAMSIM_DATASET_HPP
#define BEAMSIM_DATASET_HPP

#include <string>

#include "beamsim/protocols.hpp"

namespace beamsim {

enum class LabelSource : uint8_t { oracle = 0, two_level = 1 };

/// One beam-training period of an episode. Clean beam responses are kept so
/// any measurement (full, partial, refinement) can be materialized later with
/// the episode's keyed noise stream.
struct StepRecord {
  int narrow_label = 0;           // best narrow beam (training target)
  int wide_label = 0;             // strongest wide beam of the noisy sweep
  std::vector<cd> wide_clean;     // (H_w f_w,m), single-antenna receiver
  std::vector<cd> narrow_clean;   // (H f_m)

  int oracle_narrow() const;      // argmax |narrow_clean|^2, ties low
  double oracle_gain() const;     // max_m |narrow_clean[m]|^2
};

struct EpisodeSample {
  uint64_t episode_seed = 0;
  float speed_mps = 0.0f;
  float accel_mps2 = 0.0f;
  uint8_t is_validation = 0;
  std::vector<StepRecord> steps;
};

struct DatasetHeader {
  uint32_t version = 1;
  uint32_t n_samples = 0;
  uint32_t steps_per_sample = 0;  // T
  uint32_t n_wide = 0;
  uint32_t n_narrow = 0;
  int32_t s_tx = 1;
  int32_t m_tx = 64;
  double coverage_rad = pi;
  double tx_power_dbm = 15.0;
  double sigma2_dbm = -104.99;
  double training_period_s = 0.1;
  double beam_duration_s = 1e-4;
  uint64_t base_seed = 0;
  uint8_t label_source = 0;
  std::string config_echo;  // JSON snapshot of the generating config
};

struct Dataset {
  DatasetHeader header;
  std::vector<EpisodeSample> samples;

  std::vector<int> train_indices() const;
  std::vector<int> val_indices() const;

  double tx_power_mw() const { return dbm_to_mw(header.tx_power_dbm); }
  NoiseModel noise() const { return NoiseModel{dbm_to_mw(header.sigma2_dbm)}; }

  /// Measurement context of one episode (keyed noise stream seeded by the
  /// episode seed).
  MeasurementContext context(const EpisodeSample& s) const {
    return MeasurementContext{tx_power_mw(), noise(), NoiseStream{s.episode_seed}};
  }

  /// Noisy wide-sweep values for a step, restricted to `indices` (nullptr for
  /// the full sweep). Identical bits to a live sweep with the same keys.
  std::vector<cd> wide_measurements(const EpisodeSample& s, int t,
                                    const std::vector<int>* indices = nullptr) const;

  /// Noisy narrow-beam measurement of one beam (used by the sampled-beam
  /// baseline and by top-K refinement).
  cd narrow_measurement(const EpisodeSample& s, int t, int beam) const;
};

struct GenConfig {
  SystemConfig system;
  ClusterSpec clusters;
  int n_samples = 1024;
  double train_fraction = 0.8;
  LabelSource label_source = LabelSource::oracle;
  std::string config_echo;
};

/// Simulates n_samples episodes of T training periods each and packages the
/// labeled measurement sequences, with a seeded deterministic 80/20 split.
Dataset generate_dataset(const GenConfig& cfg, uint64_t base_seed);

void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace beamsim

#endif
