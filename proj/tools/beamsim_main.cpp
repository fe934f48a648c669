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

#include <CLI11.hpp>

#include "beamsim/nn/gemm.hpp"
#include "beamsim/runner.hpp"

int main(int argc, char** argv) {
  beamsim::nn::ensure_fast_blas_kernel(argc, argv);
  CLI::App app{"mmWave beam-training simulator and learned beam predictors"};
  app.require_subcommand(1);

  beamsim::runner::CommonOptions common;
  auto add_common = [&common](CLI::App* cmd) {
    cmd->add_option("--config", common.config_path, "JSON config file");
    cmd->add_option("--seed", common.seed, "top-level seed");
    cmd->add_option("--out", common.out_dir, "output directory");
    cmd->add_option("--precision", common.precision, "model precision (32 or 64)")
        ->check(CLI::IsMember({32, 64}));
    cmd->add_option("--threads", common.threads, "BLAS threads (1 = deterministic)");
  };

  beamsim::runner::GenDataOptions gen_opts;
  CLI::App* gen = app.add_subcommand("gen-data", "generate a labeled episode dataset");
  add_common(gen);
  gen->add_option("--samples", gen_opts.n_samples_override, "override sample count");
  gen->add_flag("--episode-trace", gen_opts.write_episode_trace,
                "also write episodes.jsonl replay trace");

  beamsim::runner::TrainOptions train_opts;
  CLI::App* train = app.add_subcommand("train", "train a beam predictor");
  add_common(train);
  train->add_option("--data", train_opts.data_path, "dataset file")->required();
  train->add_option("--scheme", train_opts.scheme_override,
                    "cnn | lstm | adaptive | enhanced | sampled-dnn");
  train->add_option("--epochs", train_opts.epochs_override, "override epoch count");
  train->add_option("--model-name", train_opts.model_name, "checkpoint file name");
  train->add_flag("--save-optimizer", train_opts.save_optimizer,
                  "include optimizer state in the checkpoint");

  beamsim::runner::EvalOptions eval_opts;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a model or baseline");
  add_common(eval);
  eval->add_option("--data", eval_opts.data_path, "dataset file")->required();
  eval->add_option("--model", eval_opts.model_paths,
                   "model checkpoint(s); repeat for multi-run averaging");
  eval->add_option("--scheme", eval_opts.scheme_override,
                   "cnn | lstm | adaptive | enhanced | sampled-dnn | power-ratio");
  eval->add_option("--kn", eval_opts.k_n_override, "override K_n refinement beams");

  beamsim::runner::SweepOptions sweep_opts;
  CLI::App* sweep = app.add_subcommand("sweep", "run an experiment grid");
  add_common(sweep);
  sweep->add_option("--grid", sweep_opts.grid_path, "grid JSON file")->required();
  sweep->add_option("--jobs", sweep_opts.jobs, "max concurrent cells");

  beamsim::runner::DumpCodebookOptions dump_opts;
  CLI::App* dump = app.add_subcommand("dump-codebook",
                                      "emit per-beam gain profiles as CSV");
  add_common(dump);
  dump->add_option("--grid-points", dump_opts.grid_points, "AoD grid resolution");

  CLI::App* gradcheck =
      app.add_subcommand("gradcheck", "finite-difference gradient verification");
  add_common(gradcheck);

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    gen_opts.common = common;
    return beamsim::runner::run_gen_data(gen_opts);
  }
  if (train->parsed()) {
    train_opts.common = common;
    return beamsim::runner::run_train(train_opts);
  }
  if (eval->parsed()) {
    eval_opts.common = common;
    return beamsim::runner::run_eval(eval_opts);
  }
  if (sweep->parsed()) {
    sweep_opts.common = common;
    return beamsim::runner::run_sweep(sweep_opts);
  }
  if (dump->parsed()) {
    dump_opts.common = common;
    return beamsim::runner::run_dump_codebook(dump_opts);
  }
  if (gradcheck->parsed()) {
    beamsim::runner::GradcheckOptions opts;
    opts.common = common;
    return beamsim::runner::run_gradcheck(opts);
  }
  return 1;
}
