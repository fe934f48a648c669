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
//
// End-to-end acceptance suite. Each numbered check prints one PASS/FAIL
// line; the process exits nonzero if any check fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "beamsim/config.hpp"
#include "beamsim/gradcheck.hpp"
#include "beamsim/metrics.hpp"
#include "beamsim/runner.hpp"
#include "beamsim/train.hpp"

using namespace beamsim;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("CRITERION %d %s - %s (%s)\n", id, pass ? "PASS" : "FAIL",
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

void criterion_1_leakage_oracle() {
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(1001);
  double worst = 0.0;
  long checked = 0;
  for (int m_ant : {8, 16, 64}) {
    Codebook cb = narrow_codebook(m_ant, m_ant, pi);
    for (int i = 0; i < 10000; ++i) {
      const double phi = rng.uniform(-pi / 2, pi / 2);
      const int m = static_cast<int>(rng.next_u64() % cb.size());
      const double analytic = std::abs(leakage_gain(phi, m, cb));
      std::vector<cd> a = steering_vector(phi, m_ant);
      cd acc(0.0, 0.0);
      for (int k = 0; k < m_ant; ++k) acc += std::conj(a[k]) * cb.beams[m][k];
      worst = std::max(worst, std::abs(analytic - std::abs(acc)));
      ++checked;
    }
  }
  const double elapsed = seconds_since(t0);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%ld pairs, max |analytic - direct| = %.3e, %.2fs", checked, worst,
                elapsed);
  report(1, "leakage profile matches direct inner products",
         worst < 1e-9 && elapsed < 1.0, detail);
}

void criterion_2_gradient_suite() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<GradCheckResult> results = run_gradient_suite();
  const double elapsed = seconds_since(t0);
  bool pass = gradient_suite_passed(results) && elapsed < 60.0;
  double worst = 0.0;
  for (const auto& r : results) worst = std::max(worst, r.max_rel_err);
  char detail[160];
  std::snprintf(detail, sizeof(detail), "%zu checks, worst rel err %.3e, %.1fs",
                results.size(), worst, elapsed);
  report(2, "finite-difference gradient suite", pass, detail);
}

void criterion_3_protocol_oracle() {
  SystemConfig sys;
  sys.noise_disabled = true;
  ClusterSpec clusters;
  clusters.n_groups = 0;  // LOS only
  const Codebook narrow = narrow_codebook(sys.m_tx, sys.n_tx, sys.coverage_tx_rad);
  const Codebook wide =
      wide_codebook(sys.m_tx, sys.n_tx, sys.s_tx, sys.coverage_tx_rad);
  const MeasurementContext ctx{dbm_to_mw(sys.tx_power_dbm), NoiseModel::disabled(),
                               NoiseStream{0}};
  int exhaustive_match = 0, contained = 0, contained_match = 0;
  const int n_episodes = 1000;
  for (int i = 0; i < n_episodes; ++i) {
    EpisodeState st = init_episode(sys, clusters, 5000 + i);
    PathSet paths = snapshot_paths(st);
    ChannelMatrix h = assemble(paths, sys);
    ChannelMatrix hw = wide_subchannel(paths, sys);
    const int oracle = best_beam_oracle(h, narrow);
    SearchResult ex = exhaustive_search(h, narrow, ctx, 0);
    if (ex.index == oracle) ++exhaustive_match;
    SearchResult tl = two_level_search(h, hw, narrow, wide, ctx, 0);
    const int wide_winner = best_beam_oracle(hw, wide);
    if (oracle / sys.s_tx == wide_winner) {
      ++contained;
      if (tl.index == oracle) ++contained_match;
    }
  }
  const double containment = static_cast<double>(contained) / n_episodes;
  const bool pass = exhaustive_match == n_episodes && contained_match == contained &&
                    containment > 0.95;
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "exhaustive %d/%d, containment rate %.3f, two-level exact in "
                "%d/%d contained cases",
                exhaustive_match, n_episodes, containment, contained_match, contained);
  report(3, "noise-free protocol oracle equivalence", pass, detail);
}

void criterion_4_shape_budget_contract() {
  bool pass = true;
  std::string why;

  // Shape chain (2,16) -> (64,6) -> (256,6) -> (256,) -> (64,).
  nn::NetConfig nc;
  nc.input_len = 16;
  nc.n_narrow = 64;
  nc.n_wide = 16;
  nn::CnnNet<float> net(nc, 3);
  std::vector<float> x(2 * 16, 0.3f);
  nn::CnnCache<float> cache;
  std::vector<float> logits;
  net.forward(x.data(), 1, false, cache, logits);
  if (cache.trunk.c1.out_len != 6 || cache.trunk.c2.out_len != 6 ||
      cache.features.size() != 256 || logits.size() != 64) {
    pass = false;
    why += "shape chain broken; ";
  }

  // Classic-protocol budgets at the default scale.
  SystemConfig sys;
  sys.noise_disabled = true;
  ClusterSpec clusters;
  clusters.n_groups = 0;
  EpisodeState st = init_episode(sys, clusters, 42);
  PathSet paths = snapshot_paths(st);
  ChannelMatrix h = assemble(paths, sys);
  ChannelMatrix hw = wide_subchannel(paths, sys);
  const Codebook narrow = narrow_codebook(sys.m_tx, sys.n_tx, sys.coverage_tx_rad);
  const Codebook wide =
      wide_codebook(sys.m_tx, sys.n_tx, sys.s_tx, sys.coverage_tx_rad);
  const MeasurementContext ctx{1.0, NoiseModel::disabled(), NoiseStream{1}};
  if (exhaustive_search(h, narrow, ctx, 0).budget != 64) pass = false;
  if (two_level_search(h, hw, narrow, wide, ctx, 0).budget != 20) pass = false;
  if (sweep_full_wide(hw, wide, ctx, 0).budget_used != 16) pass = false;

  // Closed-loop episode budget: n_wide + (T-1)K + T*K_n with T = 10.
  SimConfig cfg = config_from_json_text(R"({
    "dataset": {"n_samples": 4},
    "scheme": {"scheme": "adaptive", "k_trained_wide": 3, "k_n_refine": 2}
  })");
  Dataset ds = generate_dataset(cfg.gen_config(), 77);
  nn::NetConfig rc;
  rc.input_len = 16;
  rc.n_narrow = 64;
  rc.n_wide = 16;
  nn::RecurrentNet<float> rnet(rc, false, 5);
  std::vector<int> idx = {0, 1, 2, 3};
  EvalReport rep = evaluate_recurrent(rnet, ds, idx, cfg.scheme);
  double total = 0.0;
  for (double b : rep.budget_per_t) total += b;
  const double expected = 16 + 9 * 3 + 10 * 2;
  if (total != expected) {
    pass = false;
    why += "episode budget " + std::to_string(total) + " != " +
           std::to_string(expected) + "; ";
  }
  report(4, "shape and budget contracts", pass,
         why.empty() ? "64/20/16 budgets, (2,16)->(256,)->(64,), 16+9K+10Kn" : why);
}

struct DeskMeans {
  double cnn = 0.0, sampled = 0.0, lstm = 0.0;
  double lstm_t1 = 0.0, lstm_tail = 0.0, lstm_refined = 0.0;
};

void criterion_5_desk_scale_learning() {
  auto t0 = std::chrono::steady_clock::now();
  SimConfig cfg = config_from_json_text(R"({
    "system": {"m_tx": 32, "n_tx": 32, "s_tx": 4},
    "dataset": {"n_samples": 4096},
    "scheme": {"learning_rate": 3e-4, "epochs": 40, "batch_size": 256,
               "k_trained_wide": 8}
  })");
  Dataset ds = generate_dataset(cfg.gen_config(), 90000);
  std::vector<int> val = ds.val_indices();
  nn::NetConfig nc;
  nc.input_len = 8;
  nc.n_narrow = 32;
  nc.n_wide = 8;

  DeskMeans mean;
  const int n_seeds = 3;
  for (int run = 0; run < n_seeds; ++run) {
    const uint64_t seed = 101 + 37 * run;

    SchemeConfig cnn_cfg = cfg.scheme;
    cnn_cfg.scheme = Scheme::cnn;
    nn::CnnNet<float> cnn(nc, seed);
    train_cnn_family(cnn, ds, cnn_cfg, seed);
    EvalReport cnn_rep = evaluate_cnn(cnn, ds, val, cnn_cfg);
    mean.cnn += cnn_rep.g_n_mean() / n_seeds;

    SchemeConfig sampled_cfg = cfg.scheme;
    sampled_cfg.scheme = Scheme::sampled_dnn;
    nn::CnnNet<float> sampled(nc, seed);
    train_cnn_family(sampled, ds, sampled_cfg, seed);
    EvalReport sampled_rep = evaluate_cnn(sampled, ds, val, sampled_cfg);
    mean.sampled += sampled_rep.g_n_mean() / n_seeds;

    SchemeConfig lstm_cfg = cfg.scheme;
    lstm_cfg.scheme = Scheme::lstm;
    nn::RecurrentNet<float> lstm(nc, false, seed);
    train_recurrent(lstm, ds, lstm_cfg, seed);
    EvalReport lstm_rep = evaluate_recurrent(lstm, ds, val, lstm_cfg);
    mean.lstm += lstm_rep.g_n_mean() / n_seeds;
    mean.lstm_t1 += lstm_rep.g_n_per_t.front() / n_seeds;
    mean.lstm_tail += lstm_rep.g_n_converged() / n_seeds;

    SchemeConfig refined_cfg = lstm_cfg;
    refined_cfg.k_n_refine = 4;
    EvalReport refined_rep = evaluate_recurrent(lstm, ds, val, refined_cfg);
    mean.lstm_refined += refined_rep.g_n_mean() / n_seeds;

    std::printf("  [desk seed %d] cnn %.4f sampled %.4f lstm %.4f (t1 %.4f "
                "tail %.4f refined %.4f)\n",
                run, cnn_rep.g_n_mean(), sampled_rep.g_n_mean(), lstm_rep.g_n_mean(),
                lstm_rep.g_n_per_t.front(), lstm_rep.g_n_converged(),
                refined_rep.g_n_mean());
    std::fflush(stdout);
  }

  const double elapsed = seconds_since(t0);
  const bool a = mean.cnn >= 0.75 && mean.cnn > mean.sampled;
  const bool b = mean.lstm >= mean.cnn - 0.02 && mean.lstm_tail > mean.lstm_t1;
  const bool c = mean.lstm_refined - mean.lstm >= 0.03;
  const bool pass = a && b && c && elapsed < 1800.0;
  char detail[240];
  std::snprintf(detail, sizeof(detail),
                "cnn %.3f sampled %.3f lstm %.3f t1 %.3f tail %.3f refined %.3f, "
                "%.0fs (a=%d b=%d c=%d)",
                mean.cnn, mean.sampled, mean.lstm, mean.lstm_t1, mean.lstm_tail,
                mean.lstm_refined, elapsed, a, b, c);
  report(5, "desk-scale learning targets", pass, detail);
}

void criterion_6_adaptive_lstm_equivalence() {
  SimConfig cfg = config_from_json_text(R"({"dataset": {"n_samples": 12}})");
  Dataset ds = generate_dataset(cfg.gen_config(), 31);
  std::vector<int> idx = {0, 1, 2, 3, 4, 5, 6, 7};
  nn::NetConfig nc;
  nc.input_len = 16;
  nc.n_narrow = 64;
  nc.n_wide = 16;
  nn::RecurrentNet<float> net_a(nc, false, 55);
  nn::RecurrentNet<float> net_b(nc, false, 55);
  SchemeConfig lstm_cfg = cfg.scheme;
  lstm_cfg.scheme = Scheme::lstm;
  SchemeConfig adaptive_cfg = cfg.scheme;
  adaptive_cfg.scheme = Scheme::adaptive;
  adaptive_cfg.k_trained_wide = 16;
  BatchEpisodeRun<float> ra = run_batch_episodes(net_a, ds, idx, lstm_cfg, false);
  BatchEpisodeRun<float> rb = run_batch_episodes(net_b, ds, idx, adaptive_cfg, false);
  bool pass = ra.narrow_logits.size() == rb.narrow_logits.size();
  for (size_t t = 0; pass && t < ra.narrow_logits.size(); ++t)
    pass = ra.narrow_logits[t] == rb.narrow_logits[t];
  report(6, "adaptive K=n_wide reproduces the plain recurrent scheme bit-for-bit",
         pass, pass ? "identical logits at every step" : "logit mismatch");
}

void criterion_7_refine_monotonicity() {
  SystemConfig sys;
  sys.noise_disabled = true;
  ClusterSpec clusters;
  clusters.n_groups = 0;
  const Codebook narrow = narrow_codebook(sys.m_tx, sys.n_tx, sys.coverage_tx_rad);
  const MeasurementContext ctx{1.0, NoiseModel::disabled(), NoiseStream{2}};
  Rng rng(2024);
  bool pass = true;
  for (int i = 0; i < 1000 && pass; ++i) {
    EpisodeState st = init_episode(sys, clusters, 90000 + i);
    PathSet paths = snapshot_paths(st);
    ChannelMatrix h = assemble(paths, sys);
    std::vector<double> probs(narrow.size());
    double sum = 0.0;
    for (double& p : probs) {
      p = rng.uniform();
      sum += p;
    }
    for (double& p : probs) p /= sum;
    double prev = -1.0;
    for (int k : {0, 1, 2, 4, 8, 16, 32, 64}) {
      SearchResult res = refine_topk(h, narrow, probs, k, ctx, 0);
      double gain = h.beam_energy(narrow.beam(res.index));
      if (gain < prev) pass = false;
      prev = gain;
    }
  }
  report(7, "noise-free top-K refinement gain is monotone in K_n", pass,
         pass ? "1000 random (probs, episode) instances" : "monotonicity violated");
}

void criterion_8_metric_arithmetic() {
  const double overhead = overhead_factor(0.1, 16, 1e-4, 1.0);
  SystemConfig sys;
  const double sigma = NoiseModel::from_config(sys).sigma2_dbm();
  const double pl = pathloss_db(100.0, 28e9);
  const bool pass = overhead == 0.984 && std::abs(sigma + 104.99) < 0.01 &&
                    std::abs(pl - 113.38) < 0.01;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "overhead %.6g, sigma2 %.4f dBm, PL(100m) %.4f dB", overhead, sigma,
                pl);
  report(8, "metric arithmetic pins", pass, detail);
}

void criterion_9_cli_determinism() {
  const std::string dir = "acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cfg_path = dir + "/cfg.json";
  std::ofstream(cfg_path) << R"({
    "system": {"m_tx": 16, "n_tx": 16, "s_tx": 4, "trainings_per_episode": 4},
    "dataset": {"n_samples": 24},
    "scheme": {"scheme": "cnn", "epochs": 2, "batch_size": 16, "k_trained_wide": 4},
    "eval": {"runs": 1}
  })";

  auto run_pipeline = [&](const std::string& sub) {
    const std::string out = dir + "/" + sub;
    runner::GenDataOptions gen;
    gen.common = {cfg_path, 7, out, 32, 1};
    if (runner::run_gen_data(gen) != 0) return false;
    runner::TrainOptions train;
    train.common = {cfg_path, 7, out, 32, 1};
    train.data_path = out + "/dataset.bin";
    if (runner::run_train(train) != 0) return false;
    runner::EvalOptions eval;
    eval.common = {cfg_path, 7, out, 32, 1};
    eval.data_path = out + "/dataset.bin";
    eval.model_paths = {out + "/model.ckpt"};
    return runner::run_eval(eval) == 0;
  };

  bool pass = run_pipeline("a") && run_pipeline("b");
  for (const char* name : {"dataset.bin", "model.ckpt", "curves.csv", "metrics.csv",
                           "summary.json", "cdf.csv"}) {
    if (!pass) break;
    pass = file_bytes(dir + "/a/" + name) == file_bytes(dir + "/b/" + name) &&
           !file_bytes(dir + "/a/" + name).empty();
  }
  fs::remove_all(dir);
  report(9, "gen-data / train / eval reruns are byte-identical", pass,
         pass ? "six artifacts compared" : "artifact mismatch");
}

}  // namespace

int main(int argc, char** argv) {
  nn::ensure_fast_blas_kernel(argc, argv);
  nn::set_blas_threads(1);
  auto t0 = std::chrono::steady_clock::now();
  criterion_1_leakage_oracle();
  criterion_2_gradient_suite();
  criterion_3_protocol_oracle();
  criterion_4_shape_budget_contract();
  criterion_6_adaptive_lstm_equivalence();
  criterion_7_refine_monotonicity();
  criterion_8_metric_arithmetic();
  criterion_9_cli_determinism();
  criterion_5_desk_scale_learning();  // the long one last
  std::printf("acceptance total: %.0fs, %d failure(s)\n", seconds_since(t0),
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
