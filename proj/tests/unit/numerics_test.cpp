// Copyright 2026 The guides-kit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <filesystem>
#include <fstream>

#include "guides/numerics/checkpoint.hpp"
#include "guides/numerics/layers.hpp"
#include "guides/numerics/ops.hpp"
#include "test_support.hpp"

using namespace guides;
using namespace guides::numerics;
using guides::testing::expect_param_grads;
using guides::testing::inner;
using guides::testing::input_fd;
using guides::testing::random_tensor;

namespace {

std::vector<double> softmax_oracle(const std::vector<double>& x) {
  long double m = x[0];
  for (double v : x) m = std::max<long double>(m, v);
  long double z = 0;
  for (double v : x) z += std::exp(static_cast<long double>(v) - m);
  std::vector<double> out;
  for (double v : x) out.push_back(static_cast<double>(std::exp(static_cast<long double>(v) - m) / z));
  return out;
}

}  // namespace

TEST(Softmax, NormalizesAndIgnoresShift) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(1 + rng.below(12));
    for (double& v : x) v = rng.uniform(-30, 30);
    const auto p = softmax(x);
    double s = 0;
    for (double v : p) s += v;
    EXPECT_NEAR(s, 1.0, 1e-9);
    const double c = rng.uniform(-500, 500);
    auto shifted = x;
    for (double& v : shifted) v += c;
    const auto q = softmax(shifted);
    const auto o = softmax_oracle(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_NEAR(p[i], q[i], 1e-9);
      EXPECT_NEAR(p[i], o[i], 1e-12);
    }
  }
}

TEST(Softmax, RejectsNonFinite) {
  const std::vector<double> x = {0.0, std::nan("")};
  EXPECT_THROW(softmax(x), std::invalid_argument);
}

TEST(CrossEntropy, MatchesNegativeLogSoftmax) {
  const std::vector<double> x = {0.3, -1.2, 2.0, 0.0};
  const auto o = softmax_oracle(x);
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(cross_entropy(x, k), -std::log(o[k]), 1e-12);
}

TEST(CrossEntropy, BatchGradientMatchesFiniteDifferences) {
  Rng rng(3);
  Tensor2 logits = random_tensor(5, 7, rng);
  const std::vector<std::size_t> targets = {0, 6, 3, 3, 1};
  const auto batch = cross_entropy_batch(logits, targets);
  const auto fd = input_fd([&] { return cross_entropy_batch(logits, targets).mean_loss; }, logits);
  EXPECT_LT(max_relative_error(batch.grad_logits, fd), 1e-6);
}

TEST(Linear, GradientsMatchFiniteDifferences) {
  Rng rng(11);
  ParamStore store;
  const auto lin = Linear::create(store, "l", 4, 3, rng);
  store.value(lin.bias) = random_tensor(1, 3, rng);
  Tensor2 x = random_tensor(5, 4, rng);
  const Tensor2 r = random_tensor(5, 3, rng);
  auto loss = [&] { return inner(lin.forward(store, x), r); };
  store.zero_grad();
  const Tensor2 dx = lin.backward(store, x, r);
  expect_param_grads(loss, store, {lin.weight, lin.bias});
  EXPECT_LT(max_relative_error(dx, input_fd(loss, x)), 1e-4);
}

TEST(Mlp2, GradientsMatchFiniteDifferences) {
  Rng rng(12);
  ParamStore store;
  const auto mlp = Mlp2::create(store, "m", 6, 9, 4, rng);
  Tensor2 x = random_tensor(3, 6, rng);
  const Tensor2 r = random_tensor(3, 4, rng);
  auto loss = [&] { return inner(mlp.forward(store, x), r); };
  Mlp2::Trace trace;
  mlp.forward(store, x, &trace);
  store.zero_grad();
  const Tensor2 dx = mlp.backward(store, trace, r);
  expect_param_grads(loss, store, mlp.blocks());
  EXPECT_LT(max_relative_error(dx, input_fd(loss, x)), 1e-4);
}

TEST(CrossAttention, GradientsMatchFiniteDifferences) {
  Rng rng(13);
  ParamStore store;
  const auto att = CrossAttention::create(store, "a", 5, rng);
  Tensor2 q = random_tensor(2, 5, rng);
  Tensor2 ctx = random_tensor(4, 5, rng);
  const Tensor2 r = random_tensor(2, 5, rng);
  auto loss = [&] { return inner(att.forward(store, q, ctx), r); };
  CrossAttention::Trace trace;
  att.forward(store, q, ctx, &trace);
  store.zero_grad();
  const auto g = att.backward(store, trace, r);
  expect_param_grads(loss, store, att.blocks());
  EXPECT_LT(max_relative_error(g.query, input_fd(loss, q)), 1e-4);
  EXPECT_LT(max_relative_error(g.context, input_fd(loss, ctx)), 1e-4);
}

TEST(CrossAttention, ContextOrderDoesNotMatter) {
  Rng rng(14);
  ParamStore store;
  const auto att = CrossAttention::create(store, "a", 4, rng);
  const Tensor2 q = random_tensor(1, 4, rng);
  const Tensor2 ctx = random_tensor(3, 4, rng);
  Tensor2 rev(3, 4);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 4; ++j) rev(i, j) = ctx(2 - i, j);
  }
  const auto a = att.forward(store, q, ctx);
  const auto b = att.forward(store, q, rev);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(a(0, j), b(0, j), 1e-12);
}

TEST(ParamStore, FrozenBlocksKeepTheirBytes) {
  ParamStore store;
  store.add("a", Tensor2(2, 2, 1.0));
  store.add("b", Tensor2(1, 3, 2.0));
  store.set_frozen("a", true);
  store.accumulate_grad("a", Tensor2(2, 2, 5.0));
  store.accumulate_grad("b", Tensor2(1, 3, 1.0));
  sgd_step(store, 0.5);
  EXPECT_EQ(store.value("a").values()[0], 1.0);
  EXPECT_EQ(store.value("b").values()[0], 1.5);
  EXPECT_THROW(sgd_step(store, 0.0), std::invalid_argument);
  store.zero_grad();
  EXPECT_THROW(sgd_step(store, 0.1), std::logic_error);
}

TEST(Checkpoint, RoundTripsValuesAndFlags) {
  Rng rng(5);
  ParamStore store;
  store.add("enc.fc1.weight", random_tensor(3, 4, rng));
  store.add("dec.fc1.bias", random_tensor(1, 4, rng));
  store.set_frozen("enc.fc1.weight", true);
  const auto path = std::filesystem::temp_directory_path() / "guides_ckpt_test.bin";
  save_checkpoint(store, path);
  const ParamStore back = load_checkpoint(path);
  ASSERT_EQ(back.names(), store.names());
  for (const auto& n : store.names()) {
    EXPECT_EQ(back.value(n).values().size(), store.value(n).values().size());
    EXPECT_TRUE(std::equal(back.value(n).values().begin(), back.value(n).values().end(),
                           store.value(n).values().begin()));
    EXPECT_EQ(back.frozen(n), store.frozen(n));
  }
  std::filesystem::remove(path);
  std::filesystem::remove(manifest_path(path));
  EXPECT_THROW(load_checkpoint(path), std::runtime_error);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs |= x != c.next_u64();
  }
  EXPECT_TRUE(differs);
  EXPECT_NE(mix_seed(1, 2), mix_seed(2, 1));
}
