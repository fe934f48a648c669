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

#include <doctest.h>

#include <cstdio>

#include "beamsim/nn/checkpoint.hpp"
#include "beamsim/nn/nets.hpp"

using namespace beamsim;
using namespace beamsim::nn;

TEST_CASE("conv output-length arithmetic") {
  CHECK(conv_out_len(16, 3, 3, 1) == 6);
  CHECK(conv_out_len(6, 3, 1, 1) == 6);
  CHECK(conv_out_len(8, 3, 3, 1) == 3);
  CHECK(conv_out_len(4, 3, 3, 1) == 2);
  CHECK_THROWS_AS(conv_out_len(1, 5, 1, 1), std::invalid_argument);
}

TEST_CASE("conv with an identity kernel reproduces its input") {
  Rng rng(1);
  Conv1d<double> conv(1, 1, 3, 1, 1, rng);
  ParamList<double> ps;
  conv.params("c", ps);
  // kernel [0, 1, 0], zero bias
  ps[0].tensor->v = {0.0, 1.0, 0.0};
  ps[1].tensor->v = {0.0};
  const int batch = 2, len = 7;
  std::vector<double> x(batch * len);
  Rng data(2);
  for (auto& v : x) v = data.uniform(-1, 1);
  std::vector<double> y(batch * len);
  Conv1dCache<double> cache;
  conv.forward(x.data(), batch, len, cache, y.data());
  for (size_t i = 0; i < x.size(); ++i) CHECK(y[i] == doctest::Approx(x[i]));
}

TEST_CASE("batchnorm train/infer semantics") {
  BatchNorm1d<double> bn(2);
  BatchNormCache<double> cache;

  // Constant channels normalize to the (zero) shift.
  std::vector<double> x = {3.0, 3.0, 3.0, 3.0, -1.5, -1.5, -1.5, -1.5};
  bn.forward(x.data(), 4, true, cache);
  for (double v : x) CHECK(v == doctest::Approx(0.0));

  // With running stats equal to batch stats, train == infer.
  BatchNorm1d<double> bn2(1, 1.0);  // momentum 1: running stats = batch stats
  std::vector<double> data = {0.2, -0.4, 1.7, 0.9};
  std::vector<double> train_out = data;
  bn2.forward(train_out.data(), 4, true, cache);
  std::vector<double> infer_out = data;
  bn2.forward(infer_out.data(), 4, false, cache);
  for (size_t i = 0; i < data.size(); ++i)
    CHECK(train_out[i] == doctest::Approx(infer_out[i]).epsilon(1e-12));

  // Batch of one sample: zero variance handled by the epsilon floor.
  BatchNorm1d<double> bn3(1);
  std::vector<double> one = {5.0};
  bn3.forward(one.data(), 1, true, cache);
  CHECK(std::isfinite(one[0]));
  CHECK(one[0] == doctest::Approx(0.0));
}

TEST_CASE("lstm degenerate behaviors") {
  Rng rng(3);
  const int in = 4, hidden = 3, batch = 2;

  // All-zero weights and state: h' = o * tanh(0) = 0.
  Lstm<double> zero(in, hidden, rng);
  ParamList<double> ps;
  zero.params("l", ps);
  for (auto& p : ps) std::fill(p.tensor->v.begin(), p.tensor->v.end(), 0.0);
  zero.reset(batch);
  std::vector<double> x(batch * in, 0.7);
  const std::vector<double>& h = zero.step(x.data(), false);
  for (double v : h) CHECK(v == 0.0);

  // Saturated forget gate with zero input: the cell state persists.
  Lstm<double> keeper(in, hidden, rng);
  ParamList<double> ps2;
  keeper.params("k", ps2);
  std::fill(ps2[0].tensor->v.begin(), ps2[0].tensor->v.end(), 0.0);  // fused w
  std::fill(ps2[1].tensor->v.begin(), ps2[1].tensor->v.end(), 0.0);  // bias
  for (int j = hidden; j < 2 * hidden; ++j) ps2[1].tensor->v[j] = 25.0;
  keeper.reset(batch);
  std::vector<double> c0(batch * hidden);
  for (size_t i = 0; i < c0.size(); ++i) c0[i] = 0.3 + 0.1 * i;
  keeper.set_state(std::vector<double>(batch * hidden, 0.0), c0);
  std::vector<double> zero_x(batch * in, 0.0);
  keeper.step(zero_x.data(), false);
  for (size_t i = 0; i < c0.size(); ++i)
    CHECK(keeper.cell_state()[i] == doctest::Approx(c0[i]).epsilon(1e-9));
}

TEST_CASE("softmax cross entropy basics") {
  const int n = 64;
  std::vector<double> logits(n, 1.234);
  std::vector<double> probs(n);
  int label = 17;
  double loss = softmax_crossentropy<double>(logits.data(), &label, 1, n,
                                             probs.data(), nullptr, 0.0);
  for (double p : probs) CHECK(p == doctest::Approx(1.0 / 64).epsilon(1e-9));
  CHECK(loss == doctest::Approx(std::log(64.0)).epsilon(1e-9));
  double sum = 0.0;
  for (double p : probs) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

  // Shift invariance.
  std::vector<double> shifted(n);
  Rng rng(4);
  for (int i = 0; i < n; ++i) logits[i] = rng.uniform(-2, 2);
  for (int i = 0; i < n; ++i) shifted[i] = logits[i] + 123.25;
  std::vector<double> p1(n), p2(n);
  softmax(logits.data(), 1, n, p1.data());
  softmax(shifted.data(), 1, n, p2.data());
  for (int i = 0; i < n; ++i) CHECK(p1[i] == doctest::Approx(p2[i]).epsilon(1e-9));

  // A dominant true-class logit drives the loss toward zero.
  std::fill(logits.begin(), logits.end(), 0.0);
  logits[label] = 60.0;
  loss = softmax_crossentropy<double>(logits.data(), &label, 1, n, probs.data(),
                                      nullptr, 0.0);
  CHECK(loss < 1e-12);
}

TEST_CASE("dropout modes and empirical rate") {
  Rng rng(5);
  DropoutCache<double> cache;

  std::vector<double> x(128, 1.0);
  dropout_forward(x.data(), x.size(), 0.0, true, rng, cache);
  for (double v : x) CHECK(v == 1.0);
  dropout_forward(x.data(), x.size(), 0.5, false, rng, cache);
  for (double v : x) CHECK(v == 1.0);

  const size_t n = 100000;
  std::vector<double> big(n, 1.0);
  dropout_forward(big.data(), n, 0.3, true, rng, cache);
  size_t zeros = 0;
  for (double v : big) {
    if (v == 0.0)
      ++zeros;
    else
      CHECK(v == doctest::Approx(1.0 / 0.7));
  }
  CHECK(std::abs(static_cast<double>(zeros) / n - 0.3) < 0.01);
}

TEST_CASE("adam: signed first step, zero-grad fixpoint, reproducibility") {
  Tensor<double> w({4});
  w.v = {1.0, -2.0, 0.5, 3.0};
  w.g = {0.2, -0.3, 0.0, 1e-12};
  ParamList<double> ps = {{"w", &w}};
  Adam<double> adam(0.01);
  adam.attach(ps);
  std::vector<double> before = w.v;
  adam.step(ps);
  CHECK(w.v[0] == doctest::Approx(before[0] - 0.01).epsilon(1e-6));
  CHECK(w.v[1] == doctest::Approx(before[1] + 0.01).epsilon(1e-6));
  CHECK(w.v[2] == before[2]);  // zero gradient, no movement

  // Same seed state, same trajectory.
  Tensor<double> w2({4});
  w2.v = before;
  w2.g = {0.2, -0.3, 0.0, 1e-12};
  ParamList<double> ps2 = {{"w", &w2}};
  Adam<double> adam2(0.01);
  adam2.attach(ps2);
  adam2.step(ps2);
  CHECK(w2.v == w.v);
}

TEST_CASE("table stack shape contract: (2,16) -> (256,) -> (64,)") {
  NetConfig cfg;
  cfg.input_len = 16;
  cfg.n_narrow = 64;
  CnnNet<float> net(cfg, 7);
  const int batch = 3;
  std::vector<float> x(2 * batch * 16, 0.25f);
  CnnCache<float> cache;
  std::vector<float> logits;
  net.forward(x.data(), batch, false, cache, logits);
  CHECK(cache.trunk.c1.out_len == 6);
  CHECK(cache.trunk.c2.out_len == 6);
  CHECK(cache.trunk.y1.size() == 64u * batch * 6);
  CHECK(cache.trunk.y2.size() == 256u * batch * 6);
  CHECK(cache.features.size() == 256u * batch);
  CHECK(logits.size() == 64u * batch);
}

TEST_CASE("zeroed output head produces exactly uniform probabilities") {
  NetConfig cfg;
  cfg.input_len = 16;
  cfg.n_narrow = 64;
  CnnNet<float> net(cfg, 8);
  ParamList<float> ps = net.params();
  for (auto& p : ps) {
    if (p.name.rfind("fc.", 0) == 0)
      std::fill(p.tensor->v.begin(), p.tensor->v.end(), 0.0f);
  }
  std::vector<float> x(2 * 16, 0.5f);
  CnnCache<float> cache;
  std::vector<float> logits;
  net.forward(x.data(), 1, false, cache, logits);
  std::vector<float> probs(64);
  softmax(logits.data(), 1, 64, probs.data());
  for (float p : probs) CHECK(p == doctest::Approx(1.0 / 64).epsilon(1e-6));
}

TEST_CASE("two-sample memorization drives the loss below 1e-2") {
  NetConfig cfg;
  cfg.input_len = 16;
  cfg.n_narrow = 64;
  cfg.dropout_fc = 0.0;  // capacity/optimizer smoke test, no regularization
  CnnNet<double> net(cfg, 21);
  Rng data(9);
  std::vector<double> x(2 * 2 * 16);
  for (auto& v : x) v = data.uniform(-1, 1);
  std::vector<int> labels = {12, 50};

  ParamList<double> ps = net.params();
  Adam<double> adam(1e-3);
  adam.attach(ps);
  CnnCache<double> cache;
  std::vector<double> logits, probs(2 * 64), dlogits(2 * 64);
  double loss = 0.0;
  for (int step = 0; step < 500; ++step) {
    net.zero_grad();
    net.forward(x.data(), 2, true, cache, logits);
    loss = softmax_crossentropy<double>(logits.data(), labels.data(), 2, 64,
                                        probs.data(), dlogits.data(), 0.5);
    std::vector<double> d(dlogits);
    net.backward(d, cache);
    adam.step(ps);
    if (loss < 1e-2) break;
  }
  CHECK(loss < 1e-2);
}

TEST_CASE("checkpoint round trip restores parameters bit-exactly") {
  NetConfig cfg;
  cfg.input_len = 8;
  cfg.n_narrow = 32;
  cfg.n_wide = 8;
  RecurrentNet<float> a(cfg, true, 31);
  const std::string path = "test_ckpt_roundtrip.bin";
  {
    ParamList<float> ps = a.params_and_state();
    save_checkpoint(path, ps);
  }
  RecurrentNet<float> b(cfg, true, 99);  // different init
  ParamList<float> pb = b.params_and_state();
  load_checkpoint(path, pb);
  ParamList<float> pa = a.params_and_state();
  REQUIRE(pa.size() == pb.size());
  for (size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].name == pb[i].name);
    CHECK(pa[i].tensor->v == pb[i].tensor->v);
  }
  std::remove(path.c_str());

  // Mismatched architecture must be rejected.
  RecurrentNet<float> c(cfg, false, 1);
  ParamList<float> pc = c.params_and_state();
  save_checkpoint(path, pc);
  RecurrentNet<float> d(cfg, true, 1);
  ParamList<float> pd = d.params_and_state();
  CHECK_THROWS(load_checkpoint(path, pd));
  std::remove(path.c_str());
}

TEST_CASE("flop estimates scale with the architecture") {
  NetConfig small;
  small.input_len = 8;
  small.n_narrow = 32;
  small.n_wide = 8;
  NetConfig big;
  big.input_len = 16;
  big.n_narrow = 64;
  big.n_wide = 16;
  CnnNet<float> cnn_small(small, 1), cnn_big(big, 1);
  CHECK(cnn_small.flop_estimate() < cnn_big.flop_estimate());
  RecurrentNet<float> rec(big, false, 1), rec_aux(big, true, 1);
  CHECK(rec.flop_estimate() < rec_aux.flop_estimate());
  CHECK(cnn_big.flop_estimate() < rec.flop_estimate());
}
