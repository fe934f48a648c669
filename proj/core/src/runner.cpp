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

#include "beamsim/runner.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "beamsim/config.hpp"
#include "beamsim/gradcheck.hpp"
#include "beamsim/nn/checkpoint.hpp"
#include "beamsim/train.hpp"

namespace beamsim::runner {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

SimConfig load_or_default(const CommonOptions& common) {
  SimConfig cfg = common.config_path.empty()
                      ? config_from_json_text(default_config_json())
                      : load_config(common.config_path);
  return cfg;
}

void ensure_out_dir(const CommonOptions& common) {
  if (!common.out_dir.empty()) fs::create_directories(common.out_dir);
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

nn::NetConfig net_config_for(const Dataset& ds) {
  nn::NetConfig nc;
  nc.input_len = static_cast<int>(ds.header.n_wide);
  nc.n_narrow = static_cast<int>(ds.header.n_narrow);
  nc.n_wide = static_cast<int>(ds.header.n_wide);
  return nc;
}

void write_curves_csv(const std::string& path, const std::vector<CurveRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  out << "epoch,split,loss_n,loss_w\n";
  for (const CurveRow& r : rows)
    out << r.epoch << ',' << r.split << ',' << fmt(r.loss_n) << ',' << fmt(r.loss_w)
        << '\n';
}

// One training run: builds the scheme's model, trains, saves the checkpoint.
template <typename T>
void train_one(const SimConfig& cfg, const Dataset& ds, uint64_t seed,
               const std::string& ckpt_path, const std::string& curves_path,
               bool save_optimizer) {
  const SchemeConfig& scfg = cfg.scheme;
  TrainResult result;
  if (scfg.scheme == Scheme::cnn || scfg.scheme == Scheme::sampled_dnn) {
    nn::CnnNet<T> net(net_config_for(ds), seed);
    result = train_cnn_family(net, ds, scfg, seed);
    nn::ParamList<T> ps = net.params_and_state();
    nn::save_checkpoint(ckpt_path, ps);
    (void)save_optimizer;
  } else if (scfg.scheme == Scheme::lstm || scfg.scheme == Scheme::adaptive ||
             scfg.scheme == Scheme::enhanced) {
    nn::RecurrentNet<T> net(net_config_for(ds), scfg.scheme == Scheme::enhanced, seed);
    result = train_recurrent(net, ds, scfg, seed);
    nn::ParamList<T> ps = net.params_and_state();
    nn::save_checkpoint(ckpt_path, ps);
  } else {
    throw std::invalid_argument("scheme '" + to_string(scfg.scheme) +
                                "' has no trainable model");
  }
  write_curves_csv(curves_path, result.curves);
}

template <typename T>
EvalReport eval_one(const SimConfig& cfg, const Dataset& ds,
                    const std::string& ckpt_path, const std::vector<int>& indices) {
  const SchemeConfig& scfg = cfg.scheme;
  beamsim::EvalOptions opt;
  opt.t_tot_s = cfg.t_tot_s;
  if (scfg.scheme == Scheme::cnn || scfg.scheme == Scheme::sampled_dnn) {
    nn::CnnNet<T> net(net_config_for(ds), 0);
    nn::ParamList<T> ps = net.params_and_state();
    nn::load_checkpoint(ckpt_path, ps);
    return evaluate_cnn(net, ds, indices, scfg, opt);
  }
  nn::RecurrentNet<T> net(net_config_for(ds), scfg.scheme == Scheme::enhanced, 0);
  nn::ParamList<T> ps = net.params_and_state();
  nn::load_checkpoint(ckpt_path, ps);
  return evaluate_recurrent(net, ds, indices, scfg, opt);
}

json report_to_json(const EvalReport& rep) {
  json j;
  j["g_n_per_t"] = rep.g_n_per_t;
  j["loss_n_per_t"] = rep.loss_n_per_t;
  j["se_per_t"] = rep.se_per_t;
  j["budget_per_t"] = rep.budget_per_t;
  j["g_n_mean"] = rep.g_n_mean();
  j["g_n_converged"] = rep.g_n_converged();
  j["loss_n_mean"] = rep.loss_n_mean();
  j["se_mean"] = rep.se_mean();
  j["n_sequences"] = rep.n_sequences;
  j["degenerate_inputs"] = rep.degenerate_inputs;
  return j;
}

EvalReport average_reports(const std::vector<EvalReport>& reports) {
  EvalReport avg = reports.front();
  for (size_t r = 1; r < reports.size(); ++r) {
    const EvalReport& rep = reports[r];
    for (size_t t = 0; t < avg.g_n_per_t.size(); ++t) {
      avg.g_n_per_t[t] += rep.g_n_per_t[t];
      avg.loss_n_per_t[t] += rep.loss_n_per_t[t];
      avg.se_per_t[t] += rep.se_per_t[t];
      avg.budget_per_t[t] += rep.budget_per_t[t];
    }
    avg.g_n_samples.insert(avg.g_n_samples.end(), rep.g_n_samples.begin(),
                           rep.g_n_samples.end());
    avg.degenerate_inputs += rep.degenerate_inputs;
  }
  const double inv = 1.0 / reports.size();
  for (size_t t = 0; t < avg.g_n_per_t.size(); ++t) {
    avg.g_n_per_t[t] *= inv;
    avg.loss_n_per_t[t] *= inv;
    avg.se_per_t[t] *= inv;
    avg.budget_per_t[t] *= inv;
  }
  return avg;
}

}  // namespace

int run_gen_data(const GenDataOptions& opts) {
  try {
    nn::set_blas_threads(opts.common.threads);
    SimConfig cfg = load_or_default(opts.common);
    if (opts.n_samples_override > 0) cfg.n_samples = opts.n_samples_override;
    ensure_out_dir(opts.common);
    Dataset ds = generate_dataset(cfg.gen_config(), opts.common.seed);
    save_dataset(ds, join(opts.common.out_dir, "dataset.bin"));

    if (opts.write_episode_trace) {
      std::ofstream trace(join(opts.common.out_dir, "episodes.jsonl"), std::ios::binary);
      for (uint32_t i = 0; i < ds.header.n_samples; ++i) {
        const EpisodeSample& sample = ds.samples[i];
        EpisodeState st = init_episode(cfg.system, cfg.clusters, sample.episode_seed);
        for (uint32_t t = 0; t < ds.header.steps_per_sample; ++t) {
          PathSet paths = snapshot_paths(st);
          json row;
          row["episode"] = i;
          row["seed"] = sample.episode_seed;
          row["t"] = t;
          row["pos"] = {st.ue.position.x, st.ue.position.y};
          row["speed_mps"] = st.ue.speed_mps;
          row["heading_rad"] = st.ue.heading_rad;
          row["aod_los_rad"] = paths.los.aod_rad;
          row["pathloss_los_db"] = paths.los.pathloss_db;
          row["active_clusters"] = paths.clusters.size();
          row["narrow_label"] = sample.steps[t].narrow_label;
          row["wide_label"] = sample.steps[t].wide_label;
          trace << row.dump() << '\n';
          if (t + 1 < ds.header.steps_per_sample)
            st = advance(st, cfg.system.training_period_s);
        }
      }
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "gen-data: " << e.what() << '\n';
    return 1;
  }
}

int run_train(const TrainOptions& opts) {
  try {
    nn::set_blas_threads(opts.common.threads);
    SimConfig cfg = load_or_default(opts.common);
    if (!opts.scheme_override.empty())
      cfg.scheme.scheme = scheme_from_string(opts.scheme_override);
    if (opts.epochs_override >= 0) cfg.scheme.epochs = opts.epochs_override;
    if (opts.data_path.empty()) throw std::invalid_argument("train needs --data");
    ensure_out_dir(opts.common);
    Dataset ds = load_dataset(opts.data_path);
    const std::string ckpt = join(opts.common.out_dir, opts.model_name);
    const std::string curves = join(opts.common.out_dir, "curves.csv");
    if (opts.common.precision == 64)
      train_one<double>(cfg, ds, opts.common.seed, ckpt, curves, opts.save_optimizer);
    else
      train_one<float>(cfg, ds, opts.common.seed, ckpt, curves, opts.save_optimizer);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "train: " << e.what() << '\n';
    return 1;
  }
}

int run_eval(const EvalOptions& opts) {
  try {
    nn::set_blas_threads(opts.common.threads);
    SimConfig cfg = load_or_default(opts.common);
    if (!opts.scheme_override.empty())
      cfg.scheme.scheme = scheme_from_string(opts.scheme_override);
    if (opts.k_n_override >= 0) cfg.scheme.k_n_refine = opts.k_n_override;
    if (opts.data_path.empty()) throw std::invalid_argument("eval needs --data");
    ensure_out_dir(opts.common);
    Dataset ds = load_dataset(opts.data_path);
    std::vector<int> val = ds.val_indices();

    std::vector<EvalReport> reports;
    const Scheme scheme = cfg.scheme.scheme;
    if (scheme == Scheme::power_ratio) {
      beamsim::EvalOptions eopt;
      eopt.t_tot_s = cfg.t_tot_s;
      reports.push_back(evaluate_power_ratio(ds, val, cfg.scheme, eopt));
    } else {
      if (opts.model_paths.empty())
        throw std::invalid_argument("eval of a learned scheme needs --model");
      for (const std::string& path : opts.model_paths) {
        if (opts.common.precision == 64)
          reports.push_back(eval_one<double>(cfg, ds, path, val));
        else
          reports.push_back(eval_one<float>(cfg, ds, path, val));
      }
    }

    // metrics.csv: one row per (run, t).
    std::ofstream metrics(join(opts.common.out_dir, "metrics.csv"), std::ios::binary);
    metrics << "scheme,criterion,k,k_n,run,t,g_n,loss_n,se,budget\n";
    for (size_t r = 0; r < reports.size(); ++r) {
      const EvalReport& rep = reports[r];
      for (int t = 0; t < rep.steps; ++t) {
        metrics << to_string(scheme) << ',' << to_string(cfg.scheme.criterion) << ','
                << cfg.scheme.k_trained_wide << ',' << cfg.scheme.k_n_refine << ','
                << r << ',' << (t + 1) << ',' << fmt(rep.g_n_per_t[t]) << ','
                << fmt(rep.loss_n_per_t[t]) << ',' << fmt(rep.se_per_t[t]) << ','
                << fmt(rep.budget_per_t[t]) << '\n';
      }
    }

    EvalReport avg = average_reports(reports);
    json summary;
    summary["scheme"] = to_string(scheme);
    summary["criterion"] = to_string(cfg.scheme.criterion);
    summary["k"] = cfg.scheme.k_trained_wide;
    summary["k_n"] = cfg.scheme.k_n_refine;
    summary["runs"] = reports.size();
    summary["average"] = report_to_json(avg);
    std::ofstream(join(opts.common.out_dir, "summary.json"), std::ios::binary)
        << summary.dump(2) << '\n';

    // Gain CDF over all (sequence, t) samples, pooled across runs.
    std::vector<double> gains = avg.g_n_samples;
    std::sort(gains.begin(), gains.end());
    std::ofstream cdf(join(opts.common.out_dir, "cdf.csv"), std::ios::binary);
    cdf << "g_n,cum_prob\n";
    for (size_t i = 0; i < gains.size(); ++i)
      cdf << fmt(gains[i]) << ',' << fmt((i + 1.0) / gains.size()) << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "eval: " << e.what() << '\n';
    return 1;
  }
}

int run_dump_codebook(const DumpCodebookOptions& opts) {
  try {
    SimConfig cfg = load_or_default(opts.common);
    ensure_out_dir(opts.common);
    const Codebook narrow =
        narrow_codebook(cfg.system.m_tx, cfg.system.n_tx, cfg.system.coverage_tx_rad);
    std::ofstream out(join(opts.common.out_dir, "codebook.csv"), std::ios::binary);
    out << "beam_index,direction_rad,phi_rad,magnitude\n";
    for (int m = 0; m < narrow.size(); ++m) {
      for (int g = 0; g < opts.grid_points; ++g) {
        const double phi = -pi / 2.0 + pi * (g + 0.5) / opts.grid_points;
        const double mag = std::abs(leakage_gain(phi, m, narrow));
        out << m << ',' << fmt(narrow.directions[m]) << ',' << fmt(phi) << ','
            << fmt(mag) << '\n';
      }
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "dump-codebook: " << e.what() << '\n';
    return 1;
  }
}

int run_gradcheck(const GradcheckOptions& opts) {
  (void)opts;
  nn::set_blas_threads(opts.common.threads);
  std::vector<GradCheckResult> results = run_gradient_suite();
  bool ok = gradient_suite_passed(results);
  for (const auto& r : results) {
    std::printf("%-22s rel_err %.3e (threshold %.0e)  %s\n", r.name.c_str(),
                r.max_rel_err, r.threshold, r.pass ? "PASS" : "FAIL");
  }
  return ok ? 0 : 1;
}

int run_sweep(const SweepOptions& opts) {
  try {
    nn::set_blas_threads(opts.common.threads);
    if (opts.grid_path.empty()) throw std::invalid_argument("sweep needs --grid");
    std::ifstream gin(opts.grid_path);
    if (!gin) throw std::runtime_error("cannot open grid file: " + opts.grid_path);
    json grid = json::parse(gin);
    SimConfig base = load_or_default(opts.common);
    if (grid.contains("scheme"))
      base.scheme.scheme = scheme_from_string(grid["scheme"].get<std::string>());
    if (grid.contains("criterion"))
      base.scheme.criterion =
          criterion_from_string(grid["criterion"].get<std::string>());
    if (grid.contains("epochs")) base.scheme.epochs = grid["epochs"].get<int>();
    if (grid.contains("n_samples")) base.n_samples = grid["n_samples"].get<int>();
    if (grid.contains("runs")) base.runs = grid["runs"].get<int>();

    // Cartesian product of the sweep variables, row-major in listed order.
    std::vector<std::string> var_names;
    std::vector<std::vector<double>> var_values;
    if (grid.contains("vars")) {
      for (auto& [key, vals] : grid["vars"].items()) {
        var_names.push_back(key);
        var_values.push_back(vals.get<std::vector<double>>());
      }
    }
    size_t n_cells = 1;
    for (const auto& v : var_values) n_cells *= v.size();

    ensure_out_dir(opts.common);
    std::ofstream out(join(opts.common.out_dir, "sweep.csv"), std::ios::binary);
    out << "cell";
    for (const auto& name : var_names) out << ',' << name;
    out << ",scheme,criterion,g_n_mean,g_n_converged,loss_n,se_mean\n";

    for (size_t cell = 0; cell < n_cells; ++cell) {
      SimConfig cfg = base;
      size_t rem = cell;
      std::vector<double> assignment(var_names.size());
      for (size_t v = var_names.size(); v-- > 0;) {
        assignment[v] = var_values[v][rem % var_values[v].size()];
        rem /= var_values[v].size();
      }
      for (size_t v = 0; v < var_names.size(); ++v) {
        const std::string& name = var_names[v];
        const double value = assignment[v];
        if (name == "k_n_refine") cfg.scheme.k_n_refine = static_cast<int>(value);
        else if (name == "k_trained_wide")
          cfg.scheme.k_trained_wide = static_cast<int>(value);
        else if (name == "tx_power_dbm") cfg.system.tx_power_dbm = value;
        else if (name == "speed_mps") {
          cfg.system.speed_min_mps = value;
          cfg.system.speed_max_mps = value;
        } else if (name == "n_tx") {
          cfg.system.n_tx = static_cast<int>(value);
          cfg.scheme.k_trained_wide =
              std::min(cfg.scheme.k_trained_wide, cfg.system.n_wide_tx());
        } else if (name == "training_period_s") {
          cfg.system.training_period_s = value;
        } else {
          throw std::invalid_argument("unknown sweep variable: " + name);
        }
      }
      cfg.system.validate();
      cfg.scheme.validate(cfg.system.n_wide_tx());

      // Isolated stream per cell.
      const uint64_t cell_seed = opts.common.seed + 7919 * (cell + 1);
      Dataset ds = generate_dataset(cfg.gen_config(), cell_seed);
      std::vector<int> val = ds.val_indices();
      std::vector<EvalReport> reports;
      for (int run = 0; run < std::max(cfg.runs, 1); ++run) {
        const uint64_t run_seed = cell_seed + 1000003ULL * (run + 1);
        if (cfg.scheme.scheme == Scheme::power_ratio) {
          beamsim::EvalOptions eopt;
          eopt.t_tot_s = cfg.t_tot_s;
          reports.push_back(evaluate_power_ratio(ds, val, cfg.scheme, eopt));
          break;
        }
        const std::string tmp_ckpt =
            join(opts.common.out_dir, "sweep_cell_model.ckpt");
        if (opts.common.precision == 64) {
          train_one<double>(cfg, ds, run_seed, tmp_ckpt,
                            join(opts.common.out_dir, "sweep_cell_curves.csv"), false);
          reports.push_back(eval_one<double>(cfg, ds, tmp_ckpt, val));
        } else {
          train_one<float>(cfg, ds, run_seed, tmp_ckpt,
                           join(opts.common.out_dir, "sweep_cell_curves.csv"), false);
          reports.push_back(eval_one<float>(cfg, ds, tmp_ckpt, val));
        }
      }
      EvalReport avg = average_reports(reports);
      out << cell;
      for (double v : assignment) out << ',' << fmt(v);
      out << ',' << to_string(cfg.scheme.scheme) << ','
          << to_string(cfg.scheme.criterion) << ',' << fmt(avg.g_n_mean()) << ','
          << fmt(avg.g_n_converged()) << ',' << fmt(avg.loss_n_mean()) << ','
          << fmt(avg.se_mean()) << '\n';
    }
    for (const char* scratch : {"sweep_cell_model.ckpt", "sweep_cell_curves.csv"}) {
      std::error_code ec;
      fs::remove(fs::path(opts.common.out_dir) / scratch, ec);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "sweep: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace beamsim::runner
