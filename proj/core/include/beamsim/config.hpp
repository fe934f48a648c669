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

#ifndef BEAMSIM_CONFIG_HPP
#define BEAMSIM_CONFIG_HPP

#include <string>

#include "beamsim/dataset.hpp"
#include "beamsim/schemes.hpp"

namespace beamsim {

/// A full experiment description: world, dataset, scheme and evaluation
/// parameters. Loaded from a JSON file; missing keys keep their defaults
/// (see docs/formats.md for the schema and configs/ for examples).
struct SimConfig {
  SystemConfig system;
  ClusterSpec clusters;
  int n_samples = 1024;
  double train_fraction = 0.8;
  LabelSource label_source = LabelSource::oracle;
  SchemeConfig scheme;
  int runs = 3;          // independent training runs averaged at evaluation
  double t_tot_s = 1.0;  // session length for the spectral-efficiency metric
  std::string raw_json;  // verbatim source text (echoed into datasets)

  GenConfig gen_config() const {
    return GenConfig{system, clusters, n_samples, train_fraction, label_source,
                     raw_json};
  }
};

SimConfig config_from_json_text(const std::string& text);
SimConfig load_config(const std::string& path);

/// JSON text with every field at its default value.
std::string default_config_json();

}  // namespace beamsim

#endif
