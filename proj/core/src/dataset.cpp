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

#include "beamsim/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace beamsim {

namespace {
constexpr uint64_t kSplitTag = 0x73706c69742e7467ULL;
}

int StepRecord::oracle_narrow() const {
  int best = 0;
  double best_p = std::norm(narrow_clean[0]);
  for (int m = 1; m < static_cast<int>(narrow_clean.size()); ++m) {
    double p = std::norm(narrow_clean[m]);
    if (p > best_p) {
      best_p = p;
      best = m;
    }
  }
  return best;
}

double StepRecord::oracle_gain() const {
  double best = 0.0;
  for (const cd& z : narrow_clean) best = std::max(best, std::norm(z));
  return best;
}

std::vector<int> Dataset::train_indices() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(samples.size()); ++i)
    if (!samples[i].is_validation) out.push_back(i);
  return out;
}

std::vector<int> Dataset::val_indices() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(samples.size()); ++i)
    if (samples[i].is_validation) out.push_back(i);
  return out;
}

std::vector<cd> Dataset::wide_measurements(const EpisodeSample& s, int t,
                                           const std::vector<int>* indices) const {
  const StepRecord& step = s.steps[t];
  const MeasurementContext ctx = context(s);
  const double amp = std::sqrt(ctx.tx_power_mw);
  const double noise_amp = std::sqrt(ctx.noise.sigma2_mw);
  std::vector<cd> out(step.wide_clean.size(), cd(0.0, 0.0));
  auto fill = [&](int m) {
    cd y = amp * step.wide_clean[m];
    if (noise_amp > 0.0)
      y += noise_amp * ctx.stream.complex_gaussian(static_cast<uint32_t>(t),
                                                   BeamDomain::wide,
                                                   static_cast<uint32_t>(m));
    out[m] = y;
  };
  if (indices == nullptr) {
    for (int m = 0; m < static_cast<int>(out.size()); ++m) fill(m);
  } else {
    for (int m : *indices) fill(m);
  }
  return out;
}

cd Dataset::narrow_measurement(const EpisodeSample& s, int t, int beam) const {
  const MeasurementContext ctx = context(s);
  cd y = std::sqrt(ctx.tx_power_mw) * s.steps[t].narrow_clean[beam];
  if (ctx.noise.sigma2_mw > 0.0)
    y += std::sqrt(ctx.noise.sigma2_mw) *
         ctx.stream.complex_gaussian(static_cast<uint32_t>(t), BeamDomain::narrow,
                                     static_cast<uint32_t>(beam));
  return y;
}

Dataset generate_dataset(const GenConfig& cfg, uint64_t base_seed) {
  cfg.system.validate();
  cfg.clusters.validate();
  if (cfg.system.m_rx != 1)
    throw std::invalid_argument("dataset generation assumes a single-antenna receiver");
  if (cfg.n_samples < 1) throw std::invalid_argument("need at least one sample");
  if (cfg.train_fraction <= 0.0 || cfg.train_fraction >= 1.0)
    throw std::invalid_argument("train fraction must be in (0, 1)");

  const SystemConfig& sys = cfg.system;
  const Codebook narrow = narrow_codebook(sys.m_tx, sys.n_tx, sys.coverage_tx_rad);
  const Codebook wide = wide_codebook(sys.m_tx, sys.n_tx, sys.s_tx, sys.coverage_tx_rad);
  const NoiseModel noise =
      sys.noise_disabled ? NoiseModel::disabled() : NoiseModel::from_config(sys);
  const double p_mw = dbm_to_mw(sys.tx_power_dbm);
  const int t_steps = sys.trainings_per_episode;

  Dataset ds;
  ds.header.n_samples = cfg.n_samples;
  ds.header.steps_per_sample = t_steps;
  ds.header.n_wide = sys.n_wide_tx();
  ds.header.n_narrow = sys.n_tx;
  ds.header.s_tx = sys.s_tx;
  ds.header.m_tx = sys.m_tx;
  ds.header.coverage_rad = sys.coverage_tx_rad;
  ds.header.tx_power_dbm = sys.tx_power_dbm;
  ds.header.sigma2_dbm = noise.sigma2_dbm();
  ds.header.training_period_s = sys.training_period_s;
  ds.header.beam_duration_s = sys.beam_duration_s;
  ds.header.base_seed = base_seed;
  ds.header.label_source = static_cast<uint8_t>(cfg.label_source);
  ds.header.config_echo = cfg.config_echo;

  ds.samples.resize(cfg.n_samples);
  for (int i = 0; i < cfg.n_samples; ++i) {
    const uint64_t episode_seed = base_seed + static_cast<uint64_t>(i);
    EpisodeState state = init_episode(sys, cfg.clusters, episode_seed);
    EpisodeSample& sample = ds.samples[i];
    sample.episode_seed = episode_seed;
    sample.speed_mps = static_cast<float>(state.ue.speed_mps);
    sample.accel_mps2 = static_cast<float>(state.ue.accel_mps2);
    sample.steps.resize(t_steps);
    const MeasurementContext ctx{p_mw, noise, NoiseStream{episode_seed}};

    for (int t = 0; t < t_steps; ++t) {
      PathSet paths = snapshot_paths(state);
      ChannelMatrix h = assemble(paths, sys);
      ChannelMatrix h_w = wide_subchannel(paths, sys);
      StepRecord& step = sample.steps[t];
      step.narrow_clean.resize(narrow.size());
      for (int m = 0; m < narrow.size(); ++m)
        step.narrow_clean[m] = h.apply(narrow.beam(m))[0];
      step.wide_clean.resize(wide.size());
      for (int m = 0; m < wide.size(); ++m)
        step.wide_clean[m] = h_w.apply(wide.beam(m))[0];

      if (cfg.label_source == LabelSource::oracle) {
        step.narrow_label = step.oracle_narrow();
      } else {
        step.narrow_label =
            two_level_search(h, h_w, narrow, wide, ctx, static_cast<uint32_t>(t)).index;
      }

      std::vector<cd> sweep = ds.wide_measurements(sample, t);
      int wl = 0;
      double wl_p = std::norm(sweep[0]);
      for (int m = 1; m < static_cast<int>(sweep.size()); ++m) {
        if (std::norm(sweep[m]) > wl_p) {
          wl_p = std::norm(sweep[m]);
          wl = m;
        }
      }
      step.wide_label = wl;

      if (t + 1 < t_steps) state = advance(state, sys.training_period_s);
    }
  }

  // Deterministic shuffled split.
  std::vector<int> order(cfg.n_samples);
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng(mix64(base_seed ^ kSplitTag));
  for (int i = cfg.n_samples - 1; i > 0; --i) {
    int j = static_cast<int>(split_rng.next_u64() % static_cast<uint64_t>(i + 1));
    std::swap(order[i], order[j]);
  }
  const int n_train = static_cast<int>(cfg.n_samples * cfg.train_fraction + 1e-9);
  for (int k = 0; k < cfg.n_samples; ++k)
    ds.samples[order[k]].is_validation = k >= n_train;
  return ds;
}

// ---------------------------------------------------------------------------
// Binary container, little-endian fixed-width fields (see docs/formats.md).

namespace {

void put_bytes(std::FILE* f, const void* p, size_t n) {
  if (std::fwrite(p, 1, n, f) != n) throw std::runtime_error("dataset write failed");
}
void get_bytes(std::FILE* f, void* p, size_t n) {
  if (std::fread(p, 1, n, f) != n) throw std::runtime_error("dataset truncated");
}
template <typename V>
void put(std::FILE* f, V v) {
  put_bytes(f, &v, sizeof(V));
}
template <typename V>
V get(std::FILE* f) {
  V v;
  get_bytes(f, &v, sizeof(V));
  return v;
}

void put_cvec(std::FILE* f, const std::vector<cd>& v) {
  put_bytes(f, v.data(), v.size() * sizeof(cd));
}
void get_cvec(std::FILE* f, std::vector<cd>& v, size_t n) {
  v.resize(n);
  get_bytes(f, v.data(), n * sizeof(cd));
}

}  // namespace

void save_dataset(const Dataset& ds, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw std::runtime_error("cannot open dataset for writing: " + path);
  const DatasetHeader& h = ds.header;
  put_bytes(f, "BSDS", 4);
  put<uint32_t>(f, h.version);
  put<uint32_t>(f, h.n_samples);
  put<uint32_t>(f, h.steps_per_sample);
  put<uint32_t>(f, h.n_wide);
  put<uint32_t>(f, h.n_narrow);
  put<int32_t>(f, h.s_tx);
  put<int32_t>(f, h.m_tx);
  put<double>(f, h.coverage_rad);
  put<double>(f, h.tx_power_dbm);
  put<double>(f, h.sigma2_dbm);
  put<double>(f, h.training_period_s);
  put<double>(f, h.beam_duration_s);
  put<uint64_t>(f, h.base_seed);
  put<uint8_t>(f, h.label_source);
  put<uint32_t>(f, static_cast<uint32_t>(h.config_echo.size()));
  put_bytes(f, h.config_echo.data(), h.config_echo.size());
  for (const EpisodeSample& s : ds.samples) {
    put<uint64_t>(f, s.episode_seed);
    put<float>(f, s.speed_mps);
    put<float>(f, s.accel_mps2);
    put<uint8_t>(f, s.is_validation);
    for (const StepRecord& st : s.steps) {
      put<uint32_t>(f, static_cast<uint32_t>(st.narrow_label));
      put<uint32_t>(f, static_cast<uint32_t>(st.wide_label));
      put_cvec(f, st.wide_clean);
      put_cvec(f, st.narrow_clean);
    }
  }
  std::fclose(f);
}

Dataset load_dataset(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (f == nullptr) throw std::runtime_error("cannot open dataset: " + path);
  char magic[4];
  get_bytes(f, magic, 4);
  if (std::string(magic, 4) != "BSDS") {
    std::fclose(f);
    throw std::runtime_error("bad dataset magic in " + path);
  }
  Dataset ds;
  DatasetHeader& h = ds.header;
  h.version = get<uint32_t>(f);
  if (h.version != 1) {
    std::fclose(f);
    throw std::runtime_error("unsupported dataset version in " + path);
  }
  h.n_samples = get<uint32_t>(f);
  h.steps_per_sample = get<uint32_t>(f);
  h.n_wide = get<uint32_t>(f);
  h.n_narrow = get<uint32_t>(f);
  h.s_tx = get<int32_t>(f);
  h.m_tx = get<int32_t>(f);
  h.coverage_rad = get<double>(f);
  h.tx_power_dbm = get<double>(f);
  h.sigma2_dbm = get<double>(f);
  h.training_period_s = get<double>(f);
  h.beam_duration_s = get<double>(f);
  h.base_seed = get<uint64_t>(f);
  h.label_source = get<uint8_t>(f);
  uint32_t echo_len = get<uint32_t>(f);
  h.config_echo.resize(echo_len);
  if (echo_len > 0) get_bytes(f, h.config_echo.data(), echo_len);
  ds.samples.resize(h.n_samples);
  for (EpisodeSample& s : ds.samples) {
    s.episode_seed = get<uint64_t>(f);
    s.speed_mps = get<float>(f);
    s.accel_mps2 = get<float>(f);
    s.is_validation = get<uint8_t>(f);
    s.steps.resize(h.steps_per_sample);
    for (StepRecord& st : s.steps) {
      st.narrow_label = static_cast<int>(get<uint32_t>(f));
      st.wide_label = static_cast<int>(get<uint32_t>(f));
      get_cvec(f, st.wide_clean, h.n_wide);
      get_cvec(f, st.narrow_clean, h.n_narrow);
    }
  }
  std::fclose(f);
  return ds;
}

}  // namespace beamsim
