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

#include "beamsim/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace beamsim {

using nlohmann::json;

namespace {

void parse_system(const json& j, SystemConfig& s) {
  s.carrier_hz = j.value("carrier_hz", s.carrier_hz);
  s.bandwidth_hz = j.value("bandwidth_hz", s.bandwidth_hz);
  s.m_tx = j.value("m_tx", s.m_tx);
  s.m_rx = j.value("m_rx", s.m_rx);
  s.n_tx = j.value("n_tx", s.n_tx);
  s.n_rx = j.value("n_rx", s.n_rx);
  s.s_tx = j.value("s_tx", s.s_tx);
  s.s_rx = j.value("s_rx", s.s_rx);
  s.coverage_tx_rad = j.value("coverage_tx_rad", s.coverage_tx_rad);
  s.coverage_rx_rad = j.value("coverage_rx_rad", s.coverage_rx_rad);
  s.tx_power_dbm = j.value("tx_power_dbm", s.tx_power_dbm);
  s.noise_figure_db = j.value("noise_figure_db", s.noise_figure_db);
  s.noise_disabled = j.value("noise_disabled", s.noise_disabled);
  s.training_period_s = j.value("training_period_s", s.training_period_s);
  s.trainings_per_episode = j.value("trainings_per_episode", s.trainings_per_episode);
  s.beam_duration_s = j.value("beam_duration_s", s.beam_duration_s);
  s.cell_radius_m = j.value("cell_radius_m", s.cell_radius_m);
  s.rng_seed = j.value("rng_seed", s.rng_seed);
  s.speed_min_mps = j.value("speed_min_mps", s.speed_min_mps);
  s.speed_max_mps = j.value("speed_max_mps", s.speed_max_mps);
  s.accel_min_mps2 = j.value("accel_min_mps2", s.accel_min_mps2);
  s.accel_max_mps2 = j.value("accel_max_mps2", s.accel_max_mps2);
}

void parse_clusters(const json& j, ClusterSpec& c) {
  c.visible_radius_m = j.value("visible_radius_m", c.visible_radius_m);
  c.n_paths = j.value("paths_per_cluster", c.n_paths);
  c.aod_spread_rad = j.value("aod_spread_rad", c.aod_spread_rad);
  c.delay_spread_s = j.value("delay_spread_s", c.delay_spread_s);
  c.shadow_sigma_db = j.value("shadow_sigma_db", c.shadow_sigma_db);
  c.ricean_k_db = j.value("ricean_k_db", c.ricean_k_db);
  c.n_groups = j.value("n_groups", c.n_groups);
}

void parse_scheme(const json& j, SchemeConfig& s) {
  if (j.contains("scheme")) s.scheme = scheme_from_string(j["scheme"].get<std::string>());
  if (j.contains("criterion"))
    s.criterion = criterion_from_string(j["criterion"].get<std::string>());
  s.k_trained_wide = j.value("k_trained_wide", s.k_trained_wide);
  s.k_n_refine = j.value("k_n_refine", s.k_n_refine);
  s.wide_loss_weight = j.value("wide_loss_weight", s.wide_loss_weight);
  s.learning_rate = j.value("learning_rate", s.learning_rate);
  s.epochs = j.value("epochs", s.epochs);
  s.batch_size = j.value("batch_size", s.batch_size);
  s.teacher_forced = j.value("teacher_forced", s.teacher_forced);
}

}  // namespace

SimConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  SimConfig cfg;
  cfg.raw_json = text;
  if (j.contains("system")) parse_system(j["system"], cfg.system);
  if (j.contains("clusters")) parse_clusters(j["clusters"], cfg.clusters);
  if (j.contains("dataset")) {
    const json& d = j["dataset"];
    cfg.n_samples = d.value("n_samples", cfg.n_samples);
    cfg.train_fraction = d.value("train_fraction", cfg.train_fraction);
    if (d.contains("label_source")) {
      const std::string ls = d["label_source"].get<std::string>();
      if (ls == "oracle")
        cfg.label_source = LabelSource::oracle;
      else if (ls == "two-level" || ls == "two_level")
        cfg.label_source = LabelSource::two_level;
      else
        throw std::invalid_argument("unknown label_source: " + ls);
    }
  }
  if (j.contains("scheme")) parse_scheme(j["scheme"], cfg.scheme);
  if (j.contains("eval")) {
    cfg.runs = j["eval"].value("runs", cfg.runs);
    cfg.t_tot_s = j["eval"].value("t_tot_s", cfg.t_tot_s);
  }
  cfg.system.validate();
  cfg.clusters.validate();
  // Default K to a full sweep when the config did not set it.
  if (!j.contains("scheme") || !j["scheme"].contains("k_trained_wide"))
    cfg.scheme.k_trained_wide = cfg.system.n_wide_tx();
  cfg.scheme.validate(cfg.system.n_wide_tx());
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

std::string default_config_json() {
  SimConfig d;
  json j;
  j["system"] = {{"carrier_hz", d.system.carrier_hz},
                 {"bandwidth_hz", d.system.bandwidth_hz},
                 {"m_tx", d.system.m_tx},
                 {"m_rx", d.system.m_rx},
                 {"n_tx", d.system.n_tx},
                 {"n_rx", d.system.n_rx},
                 {"s_tx", d.system.s_tx},
                 {"s_rx", d.system.s_rx},
                 {"coverage_tx_rad", d.system.coverage_tx_rad},
                 {"coverage_rx_rad", d.system.coverage_rx_rad},
                 {"tx_power_dbm", d.system.tx_power_dbm},
                 {"noise_figure_db", d.system.noise_figure_db},
                 {"noise_disabled", d.system.noise_disabled},
                 {"training_period_s", d.system.training_period_s},
                 {"trainings_per_episode", d.system.trainings_per_episode},
                 {"beam_duration_s", d.system.beam_duration_s},
                 {"cell_radius_m", d.system.cell_radius_m},
                 {"rng_seed", d.system.rng_seed},
                 {"speed_min_mps", d.system.speed_min_mps},
                 {"speed_max_mps", d.system.speed_max_mps},
                 {"accel_min_mps2", d.system.accel_min_mps2},
                 {"accel_max_mps2", d.system.accel_max_mps2}};
  j["clusters"] = {{"n_groups", d.clusters.n_groups},
                   {"paths_per_cluster", d.clusters.n_paths},
                   {"visible_radius_m", d.clusters.visible_radius_m},
                   {"aod_spread_rad", d.clusters.aod_spread_rad},
                   {"delay_spread_s", d.clusters.delay_spread_s},
                   {"shadow_sigma_db", d.clusters.shadow_sigma_db},
                   {"ricean_k_db", d.clusters.ricean_k_db}};
  j["dataset"] = {{"n_samples", d.n_samples},
                  {"train_fraction", d.train_fraction},
                  {"label_source", "oracle"}};
  j["scheme"] = {{"scheme", to_string(d.scheme.scheme)},
                 {"criterion", to_string(d.scheme.criterion)},
                 {"k_trained_wide", d.system.n_wide_tx()},
                 {"k_n_refine", d.scheme.k_n_refine},
                 {"wide_loss_weight", d.scheme.wide_loss_weight},
                 {"learning_rate", d.scheme.learning_rate},
                 {"epochs", d.scheme.epochs},
                 {"batch_size", d.scheme.batch_size},
                 {"teacher_forced", d.scheme.teacher_forced}};
  j["eval"] = {{"runs", d.runs}, {"t_tot_s", d.t_tot_s}};
  return j.dump(2) + "\n";
}

}  // namespace beamsim
