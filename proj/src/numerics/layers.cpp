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

#include "guides/numerics/layers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "guides/numerics/ops.hpp"

namespace guides::numerics {

Tensor2 glorot(std::size_t rows, std::size_t cols, Rng& rng, double scale) {
  const double a = scale * std::sqrt(6.0 / static_cast<double>(rows + cols));
  Tensor2 t(rows, cols);
  for (double& v : t.values()) v = rng.uniform(-a, a);
  return t;
}

Linear Linear::create(ParamStore& store, const std::string& prefix, std::size_t in,
                      std::size_t out, Rng& rng) {
  Linear l{prefix + ".weight", prefix + ".bias"};
  store.add(l.weight, glorot(in, out, rng));
  store.add(l.bias, Tensor2(1, out));
  return l;
}

Tensor2 Linear::forward(const ParamStore& store, const Tensor2& x) const {
  const Tensor2& w = store.value(weight);
  if (x.cols() != w.rows()) {
    throw std::invalid_argument(weight + ": expected input width " + std::to_string(w.rows()) +
                                ", got " + std::to_string(x.cols()));
  }
  Tensor2 y = matmul(x, w);
  add_row_broadcast(y, store.value(bias));
  return y;
}

Tensor2 Linear::backward(ParamStore& store, const Tensor2& x, const Tensor2& dy,
                         bool need_input_grad) const {
  const Tensor2& w = store.value(weight);
  if (dy.rows() != x.rows() || dy.cols() != w.cols()) {
    throw std::invalid_argument(weight + ": output gradient shape mismatch");
  }
  if (!store.frozen(weight)) store.accumulate_grad(weight, matmul_tn(x, dy));
  if (!store.frozen(bias)) store.accumulate_grad(bias, column_sums(dy));
  if (!need_input_grad) return {};
  return matmul_nt(dy, w);
}

Tensor2 relu(const Tensor2& x) {
  Tensor2 y = x;
  for (double& v : y.values()) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor2 relu_backward(const Tensor2& pre_activation, const Tensor2& dy) {
  if (!pre_activation.same_shape(dy)) throw std::invalid_argument("relu_backward: shape mismatch");
  Tensor2 dx = dy;
  auto pre = pre_activation.values();
  auto g = dx.values();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (pre[i] <= 0.0) g[i] = 0.0;
  }
  return dx;
}

Mlp2 Mlp2::create(ParamStore& store, const std::string& prefix, std::size_t in,
                  std::size_t hidden, std::size_t out, Rng& rng) {
  Mlp2 m;
  m.fc1 = Linear::create(store, prefix + ".fc1", in, hidden, rng);
  m.fc2 = Linear::create(store, prefix + ".fc2", hidden, out, rng);
  return m;
}

Tensor2 Mlp2::forward(const ParamStore& store, const Tensor2& x, Trace* trace) const {
  Tensor2 pre = fc1.forward(store, x);
  Tensor2 hidden = relu(pre);
  Tensor2 out = fc2.forward(store, hidden);
  if (trace != nullptr) {
    trace->input = x;
    trace->pre_hidden = std::move(pre);
    trace->hidden = std::move(hidden);
  }
  return out;
}

Tensor2 Mlp2::backward(ParamStore& store, const Trace& trace, const Tensor2& dy,
                       bool need_input_grad) const {
  Tensor2 dhidden = fc2.backward(store, trace.hidden, dy);
  Tensor2 dpre = relu_backward(trace.pre_hidden, dhidden);
  return fc1.backward(store, trace.input, dpre, need_input_grad);
}

CrossAttention CrossAttention::create(ParamStore& store, const std::string& prefix,
                                      std::size_t dim, Rng& rng) {
  CrossAttention a{prefix + ".wq", prefix + ".wk", prefix + ".wv"};
  store.add(a.wq, glorot(dim, dim, rng));
  store.add(a.wk, glorot(dim, dim, rng));
  store.add(a.wv, glorot(dim, dim, rng));
  return a;
}

Tensor2 CrossAttention::forward(const ParamStore& store, const Tensor2& query,
                                const Tensor2& context, Trace* trace) const {
  const Tensor2& w_q = store.value(wq);
  if (query.cols() != w_q.rows() || context.cols() != w_q.rows()) {
    throw std::invalid_argument("CrossAttention: width mismatch");
  }
  if (context.rows() == 0) throw std::invalid_argument("CrossAttention: empty context");
  Tensor2 q = matmul(query, w_q);
  Tensor2 k = matmul(context, store.value(wk));
  Tensor2 v = matmul(context, store.value(wv));
  const double scale = 1.0 / std::sqrt(static_cast<double>(q.cols()));
  Tensor2 scores = matmul_nt(q, k);
  Tensor2 weights(scores.rows(), scores.cols());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    std::vector<double> row(scores.row(r).begin(), scores.row(r).end());
    for (double& s : row) s *= scale;
    const auto p = softmax(row);
    std::copy(p.begin(), p.end(), weights.row(r).begin());
  }
  Tensor2 out = matmul(weights, v);
  if (trace != nullptr) {
    trace->query_in = query;
    trace->context_in = context;
    trace->q = std::move(q);
    trace->k = std::move(k);
    trace->v = std::move(v);
    trace->weights = std::move(weights);
  }
  return out;
}

CrossAttention::InputGrads CrossAttention::backward(ParamStore& store, const Trace& trace,
                                                    const Tensor2& dy) const {
  const double scale = 1.0 / std::sqrt(static_cast<double>(trace.q.cols()));
  // out = A·V
  Tensor2 d_weights = matmul_nt(dy, trace.v);
  Tensor2 dv = matmul_tn(trace.weights, dy);
  // A = softmax(S) row-wise
  Tensor2 d_scores(d_weights.rows(), d_weights.cols());
  for (std::size_t r = 0; r < d_weights.rows(); ++r) {
    auto a = trace.weights.row(r);
    auto da = d_weights.row(r);
    const double inner = dot(a, da);
    auto ds = d_scores.row(r);
    for (std::size_t c = 0; c < ds.size(); ++c) ds[c] = a[c] * (da[c] - inner) * scale;
  }
  Tensor2 dq = matmul(d_scores, trace.k);
  Tensor2 dk = matmul_tn(d_scores, trace.q);

  store.accumulate_grad(wq, matmul_tn(trace.query_in, dq));
  store.accumulate_grad(wk, matmul_tn(trace.context_in, dk));
  store.accumulate_grad(wv, matmul_tn(trace.context_in, dv));

  InputGrads g;
  g.query = matmul_nt(dq, store.value(wq));
  g.context = matmul_nt(dk, store.value(wk));
  add_inplace(g.context, matmul_nt(dv, store.value(wv)));
  return g;
}

Tensor2 gather_rows(const Tensor2& table, std::span<const std::size_t> rows) {
  Tensor2 out(rows.size(), table.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= table.rows()) {
      throw std::invalid_argument("gather_rows: index " + std::to_string(rows[i]) +
                                  " out of range for table with " +
                                  std::to_string(table.rows()) + " rows");
    }
    auto src = table.row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace guides::numerics
