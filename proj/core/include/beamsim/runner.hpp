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

#ifndef BEAMSIM_RUNNER_HPP
#define BEAMSIM_RUNNER_HPP

#include <string>
#include <vector>

namespace beamsim::runner {

/// Flags shared by every subcommand.
struct CommonOptions {
  std::string config_path;  // empty = built-in defaults
  uint64_t seed = 1;
  std::string out_dir = ".";
  int precision = 32;  // 32 or 64
  int threads = 1;
};

struct GenDataOptions {
  CommonOptions common;
  int n_samples_override = -1;
  bool write_episode_trace = false;
};

struct TrainOptions {
  CommonOptions common;
  std::string data_path;
  std::string scheme_override;  // empty = from config
  int epochs_override = -1;
  bool save_optimizer = false;
  std::string model_name = "model.ckpt";
};

struct EvalOptions {
  CommonOptions common;
  std::string data_path;
  std::vector<std::string> model_paths;  // one report per model, averaged
  std::string scheme_override;
  int k_n_override = -1;
  bool write_trace = false;  // classic protocols only
};

struct SweepOptions {
  CommonOptions common;
  std::string grid_path;
  int jobs = 1;
};

struct DumpCodebookOptions {
  CommonOptions common;
  int grid_points = 256;
};

struct GradcheckOptions {
  CommonOptions common;
};

// Each returns a process exit status (0 = success) and prints a diagnostic
// to stderr on failure.
int run_gen_data(const GenDataOptions& opts);
int run_train(const TrainOptions& opts);
int run_eval(const EvalOptions& opts);
int run_sweep(const SweepOptions& opts);
int run_dump_codebook(const DumpCodebookOptions& opts);
int run_gradcheck(const GradcheckOptions& opts);

}  // namespace beamsim::runner

#endif
