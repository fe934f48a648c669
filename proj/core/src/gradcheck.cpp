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

#include "beamsim/gradcheck.hpp"

#include <functional>

#include "beamsim/nn/nets.hpp"

namespace beamsim {

namespace {

using nn::ParamList;
using nn::Tensor;

constexpr double kStep = 1e-5;

double rel_err(double analytic, double fd) {
  const double denom = std::max(std::abs(analytic) + std::abs(fd), 1e-8);
  return std::abs(analytic - fd) / denom;
}

/// Central difference at the given coordinate, with a half-step consistency
/// probe. Networks with max-pooling and ReLU are only piecewise smooth;
/// where the two step sizes disagree the coordinate straddles a kink and the
/// finite difference itself is invalid, so it is reported as unusable.
struct FdEstimate {
  double value = 0.0;
  bool smooth = false;
};

FdEstimate central_diff(double& coord, const std::function<double()>& loss) {
  const double keep = coord;
  auto fd_at = [&](double h) {
    coord = keep + h;
    const double up = loss();
    coord = keep - h;
    const double down = loss();
    coord = keep;
    return (up - down) / (2.0 * h);
  };
  FdEstimate est;
  est.value = fd_at(kStep);
  const double half = fd_at(kStep / 2.0);
  est.smooth = rel_err(est.value, half) < 1e-4 ||
               std::abs(est.value - half) < 1e-9;
  return est;
}

/// Checks sampled coordinates of every parameter tensor against central
/// differences of `loss`. The loss must be a pure function of the parameter
/// values (callers reseed any internal rng per evaluation). Coordinates on a
/// kink are skipped; more than 30% skipped counts as failure.
double check_params(const ParamList<double>& params,
                    const std::function<double()>& loss,
                    const std::function<void()>& backward_once, int samples_per_tensor,
                    uint64_t seed) {
  // Analytic gradients.
  for (const auto& p : params) p.tensor->zero_grad();
  backward_once();
  std::vector<std::vector<double>> analytic;
  for (const auto& p : params) analytic.push_back(p.tensor->g);

  Rng rng(seed);
  double worst = 0.0;
  int checked = 0, skipped = 0;
  for (size_t pi = 0; pi < params.size(); ++pi) {
    Tensor<double>& t = *params[pi].tensor;
    const int n = static_cast<int>(t.v.size());
    const int count = std::min(samples_per_tensor, n);
    for (int s = 0; s < count; ++s) {
      const int i = count == n ? s : static_cast<int>(rng.next_u64() % n);
      FdEstimate fd = central_diff(t.v[i], loss);
      if (!fd.smooth) {
        ++skipped;
        continue;
      }
      ++checked;
      // Coordinates with a true zero gradient (for example conv biases
      // absorbed by batch norm) leave only rounding noise in the finite
      // difference; an absolute floor keeps them from dominating.
      if (std::abs(analytic[pi][i] - fd.value) < 1e-8) continue;
      worst = std::max(worst, rel_err(analytic[pi][i], fd.value));
    }
  }
  if (checked == 0 || skipped * 10 > (checked + skipped) * 3) return 1.0;
  return worst;
}

/// Same check for an input buffer.
double check_input(std::vector<double>& x, const std::vector<double>& dx,
                   const std::function<double()>& loss, int samples, uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  int checked = 0, skipped = 0;
  const int n = static_cast<int>(x.size());
  const int count = std::min(samples, n);
  for (int s = 0; s < count; ++s) {
    const int i = count == n ? s : static_cast<int>(rng.next_u64() % n);
    FdEstimate fd = central_diff(x[i], loss);
    if (!fd.smooth) {
      ++skipped;
      continue;
    }
    ++checked;
    if (std::abs(dx[i] - fd.value) < 1e-8) continue;
    worst = std::max(worst, rel_err(dx[i], fd.value));
  }
  if (checked == 0 || skipped * 10 > (checked + skipped) * 3) return 1.0;
  return worst;
}

std::vector<double> random_vec(size_t n, Rng& rng, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-scale, scale);
  return v;
}

GradCheckResult make_result(const std::string& name, double err, double threshold) {
  return {name, err, threshold, err < threshold};
}

// --------------------------------------------------------------------------
// Layerwise checks. Each uses the linear probe loss sum_i w_i * out_i so the
// backward pass is exercised with a dense, non-trivial output gradient.

GradCheckResult check_dense() {
  Rng rng(11);
  const int in = 5, out = 4, batch = 3;
  nn::Dense<double> layer(in, out, rng);
  std::vector<double> x = random_vec(batch * in, rng);
  std::vector<double> w = random_vec(batch * out, rng);
  nn::DenseCache<double> cache;
  std::vector<double> y(batch * out);

  auto loss = [&]() {
    layer.forward(x.data(), batch, cache, y.data());
    double acc = 0;
    for (size_t i = 0; i < y.size(); ++i) acc += w[i] * y[i];
    return acc;
  };
  ParamList<double> params;
  layer.params("dense", params);
  std::vector<double> dx(x.size());
  auto backward = [&]() {
    loss();
    layer.backward(w.data(), cache, dx.data());
  };
  double err = check_params(params, loss, backward, 1000, 21);
  err = std::max(err, check_input(x, dx, loss, 1000, 22));
  return make_result("dense", err, 1e-4);
}

GradCheckResult check_conv() {
  Rng rng(13);
  const int c_in = 2, c_out = 3, batch = 2, len = 16;
  nn::Conv1d<double> layer(c_in, c_out, 3, 3, 1, rng);
  const int lo = layer.out_len(len);
  std::vector<double> x = random_vec(static_cast<size_t>(c_in) * batch * len, rng);
  std::vector<double> w = random_vec(static_cast<size_t>(c_out) * batch * lo, rng);
  nn::Conv1dCache<double> cache;
  std::vector<double> y(w.size());

  auto loss = [&]() {
    layer.forward(x.data(), batch, len, cache, y.data());
    double acc = 0;
    for (size_t i = 0; i < y.size(); ++i) acc += w[i] * y[i];
    return acc;
  };
  ParamList<double> params;
  layer.params("conv", params);
  std::vector<double> dx(x.size());
  auto backward = [&]() {
    loss();
    layer.backward(w.data(), cache, dx.data());
  };
  double err = check_params(params, loss, backward, 1000, 31);
  err = std::max(err, check_input(x, dx, loss, 1000, 32));
  return make_result("conv1d", err, 1e-4);
}

GradCheckResult check_batchnorm() {
  Rng rng(17);
  const int c = 3, n = 8;
  nn::BatchNorm1d<double> layer(c);
  std::vector<double> x = random_vec(static_cast<size_t>(c) * n, rng);
  std::vector<double> w = random_vec(x.size(), rng);
  nn::BatchNormCache<double> cache;

  auto loss = [&]() {
    std::vector<double> y = x;
    layer.forward(y.data(), n, true, cache);
    double acc = 0;
    for (size_t i = 0; i < y.size(); ++i) acc += w[i] * y[i];
    return acc;
  };
  ParamList<double> params;
  layer.params("bn", params);
  std::vector<double> dx;
  auto backward = [&]() {
    loss();
    dx = w;
    layer.backward(dx.data(), cache);
  };
  double err = check_params(params, loss, backward, 1000, 41);
  backward();
  err = std::max(err, check_input(x, dx, loss, 1000, 42));
  return make_result("batchnorm", err, 1e-4);
}

GradCheckResult check_relu() {
  Rng rng(19);
  std::vector<double> x = random_vec(24, rng);
  std::vector<double> w = random_vec(24, rng);
  nn::ReluCache<double> cache;
  auto loss = [&]() {
    std::vector<double> y = x;
    nn::relu_forward(y.data(), y.size(), cache);
    double acc = 0;
    for (size_t i = 0; i < y.size(); ++i) acc += w[i] * y[i];
    return acc;
  };
  loss();
  std::vector<double> dx = w;
  nn::relu_backward(dx.data(), cache);
  double err = check_input(x, dx, loss, 1000, 43);
  return make_result("relu", err, 1e-4);
}

GradCheckResult check_maxpool() {
  Rng rng(23);
  const int c = 3, batch = 2, len = 5;
  std::vector<double> x = random_vec(static_cast<size_t>(c) * batch * len, rng);
  std::vector<double> w = random_vec(static_cast<size_t>(batch) * c, rng);
  nn::MaxPoolCache<double> cache;
  std::vector<double> y(static_cast<size_t>(batch) * c);
  auto loss = [&]() {
    nn::global_maxpool_forward(x.data(), c, batch, len, cache, y.data());
    double acc = 0;
    for (size_t i = 0; i < y.size(); ++i) acc += w[i] * y[i];
    return acc;
  };
  loss();
  std::vector<double> dx(x.size());
  nn::global_maxpool_backward(w.data(), cache, dx.data());
  double err = check_input(x, dx, loss, 1000, 44);
  return make_result("maxpool_global", err, 1e-4);
}

GradCheckResult check_dropout() {
  Rng probe(29);
  std::vector<double> x = random_vec(64, probe);
  std::vector<double> w = random_vec(64, probe);
  nn::DropoutCache<double> cache;
  const double rate = 0.3;
  auto loss = [&]() {
    Rng rng(77);  // fixed mask across evaluations
    std::vector<double> y = x;
    nn::dropout_forward(y.data(), y.size(), rate, true, rng, cache);
    double acc = 0;
    for (size_t i = 0; i < y.size(); ++i) acc += w[i] * y[i];
    return acc;
  };
  loss();
  std::vector<double> dx = w;
  nn::dropout_backward(dx.data(), dx.size(), rate, cache);
  double err = check_input(x, dx, loss, 1000, 45);
  return make_result("dropout", err, 1e-4);
}

GradCheckResult check_softmax_xent() {
  Rng rng(31);
  const int batch = 3, n = 7;
  std::vector<double> logits = random_vec(static_cast<size_t>(batch) * n, rng, 2.0);
  std::vector<int> labels = {1, 6, 3};
  std::vector<double> probs(logits.size());
  auto loss = [&]() {
    return nn::softmax_crossentropy<double>(logits.data(), labels.data(), batch, n,
                                            probs.data(), nullptr, 0.0);
  };
  std::vector<double> dlogits(logits.size());
  nn::softmax_crossentropy<double>(logits.data(), labels.data(), batch, n,
                                   probs.data(), dlogits.data(), 1.0 / batch);
  double err = check_input(logits, dlogits, loss, 1000, 46);
  return make_result("softmax_crossentropy", err, 1e-4);
}

GradCheckResult check_lstm() {
  Rng rng(37);
  const int in = 4, hidden = 5, batch = 2, steps = 3;
  nn::Lstm<double> layer(in, hidden, rng);
  std::vector<std::vector<double>> xs(steps);
  std::vector<std::vector<double>> ws(steps);
  for (int t = 0; t < steps; ++t) {
    xs[t] = random_vec(static_cast<size_t>(batch) * in, rng);
    ws[t] = random_vec(static_cast<size_t>(batch) * hidden, rng);
  }
  auto loss = [&]() {
    layer.reset(batch);
    double acc = 0;
    for (int t = 0; t < steps; ++t) {
      const std::vector<double>& h = layer.step(xs[t].data(), false);
      for (size_t i = 0; i < h.size(); ++i) acc += ws[t][i] * h[i];
    }
    return acc;
  };
  ParamList<double> params;
  layer.params("lstm", params);
  std::vector<std::vector<double>> dx(steps);
  auto backward = [&]() {
    layer.reset(batch);
    for (int t = 0; t < steps; ++t) layer.step(xs[t].data(), true);
    std::vector<std::vector<double>> dh = ws;
    std::vector<std::vector<double>*> dxp(steps);
    for (int t = 0; t < steps; ++t) dxp[t] = &dx[t];
    layer.backward(dh, dxp);
  };
  double err = check_params(params, loss, backward, 400, 47);
  backward();
  err = std::max(err, check_input(xs[0], dx[0], loss, 400, 48));
  return make_result("lstm", err, 1e-4);
}

// --------------------------------------------------------------------------
// Full stacks with the production layer sizes and cross-entropy losses.
// Dropout stays active; the model rng is reseeded before every forward so
// the masks are identical across finite-difference evaluations.

GradCheckResult check_cnn_stack() {
  nn::NetConfig cfg;
  cfg.input_len = 16;
  cfg.n_narrow = 64;
  cfg.n_wide = 16;
  nn::CnnNet<double> net(cfg, 91);
  const int batch = 2;
  Rng data_rng(51);
  std::vector<double> x = random_vec(static_cast<size_t>(2) * batch * cfg.input_len,
                                     data_rng);
  std::vector<int> labels = {7, 42};
  nn::CnnCache<double> cache;
  std::vector<double> logits, probs;

  auto loss = [&]() {
    net.rng() = Rng(1234);
    net.forward(x.data(), batch, true, cache, logits);
    probs.resize(logits.size());
    return nn::softmax_crossentropy<double>(logits.data(), labels.data(), batch,
                                            cfg.n_narrow, probs.data(), nullptr, 0.0);
  };
  auto backward = [&]() {
    double l = loss();
    (void)l;
    std::vector<double> dlogits(logits.size());
    nn::softmax_crossentropy<double>(logits.data(), labels.data(), batch,
                                     cfg.n_narrow, probs.data(), dlogits.data(),
                                     1.0 / batch);
    net.backward(dlogits, cache);
  };
  double err = check_params(net.params(), loss, backward, 25, 52);
  return make_result("cnn_stack", err, 1e-4);
}

GradCheckResult check_recurrent_stack(bool with_aux) {
  nn::NetConfig cfg;
  cfg.input_len = 16;
  cfg.n_narrow = 64;
  cfg.n_wide = 16;
  nn::RecurrentNet<double> net(cfg, with_aux, 93);
  const int batch = 2, steps = 10;
  Rng data_rng(53);
  std::vector<std::vector<double>> xs(steps);
  std::vector<std::vector<int>> labels(steps, std::vector<int>(batch));
  std::vector<std::vector<int>> wide_labels(steps, std::vector<int>(batch));
  for (int t = 0; t < steps; ++t) {
    xs[t] = random_vec(static_cast<size_t>(2) * batch * cfg.input_len, data_rng);
    for (int b = 0; b < batch; ++b) {
      labels[t][b] = static_cast<int>(data_rng.next_u64() % cfg.n_narrow);
      wide_labels[t][b] = static_cast<int>(data_rng.next_u64() % cfg.n_wide);
    }
  }
  const double mu = 1.0;
  std::vector<std::vector<double>> narrow_logits(steps), aux_logits(steps);
  std::vector<double> probs;

  // Train-mode forward (the loss whose gradient backward computes); the
  // model rng is reseeded so dropout masks repeat across evaluations, and
  // begin_sequence discards the previous run's caches.
  auto run_forward = [&]() {
    net.rng() = Rng(4321);
    net.begin_sequence(batch);
    double total = 0.0;
    for (int t = 0; t < steps; ++t) {
      if (with_aux && t >= 1) {
        net.aux_predict(true, aux_logits[t]);
        probs.resize(aux_logits[t].size());
        total += mu / (steps - 1) *
                 nn::softmax_crossentropy<double>(
                     aux_logits[t].data(), wide_labels[t].data(), batch, cfg.n_wide,
                     probs.data(), nullptr, 0.0);
      }
      net.step(xs[t].data(), true, narrow_logits[t]);
      probs.resize(narrow_logits[t].size());
      total += 1.0 / steps *
               nn::softmax_crossentropy<double>(
                   narrow_logits[t].data(), labels[t].data(), batch, cfg.n_narrow,
                   probs.data(), nullptr, 0.0);
    }
    return total;
  };
  auto loss = [&]() { return run_forward(); };
  auto backward = [&]() {
    run_forward();
    std::vector<std::vector<double>> dlogits(steps), daux(steps - 1);
    for (int t = 0; t < steps; ++t) {
      dlogits[t].assign(static_cast<size_t>(batch) * cfg.n_narrow, 0.0);
      probs.resize(dlogits[t].size());
      nn::softmax_crossentropy<double>(narrow_logits[t].data(), labels[t].data(),
                                       batch, cfg.n_narrow, probs.data(),
                                       dlogits[t].data(), 1.0 / (batch * steps));
      if (with_aux && t >= 1) {
        daux[t - 1].assign(static_cast<size_t>(batch) * cfg.n_wide, 0.0);
        probs.resize(daux[t - 1].size());
        nn::softmax_crossentropy<double>(aux_logits[t].data(), wide_labels[t].data(),
                                         batch, cfg.n_wide, probs.data(),
                                         daux[t - 1].data(),
                                         mu / (batch * (steps - 1)));
      }
    }
    net.backward(dlogits, daux);
  };
  double err = check_params(net.params(), loss, backward, 12, 54);
  return make_result(with_aux ? "recurrent_stack_aux" : "recurrent_stack", err, 1e-3);
}

}  // namespace

std::vector<GradCheckResult> run_gradient_suite() {
  std::vector<GradCheckResult> out;
  out.push_back(check_dense());
  out.push_back(check_conv());
  out.push_back(check_batchnorm());
  out.push_back(check_relu());
  out.push_back(check_maxpool());
  out.push_back(check_dropout());
  out.push_back(check_softmax_xent());
  out.push_back(check_lstm());
  out.push_back(check_cnn_stack());
  out.push_back(check_recurrent_stack(false));
  out.push_back(check_recurrent_stack(true));
  return out;
}

bool gradient_suite_passed(const std::vector<GradCheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return !results.empty();
}

}  // namespace beamsim
