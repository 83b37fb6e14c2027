/* Copyright 2026 The DsDs Tagger Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "dsds/neural/graph.h"

#include <algorithm>
#include <cmath>

#include "dsds/common/status.h"
#include "dsds/kernels/kernels.h"

namespace dsds::neural {
namespace {

inline double sigmoid_value(double x) {
  if (x >= 0) {
    const double z = std::exp(-x);
    return 1.0 / (1.0 + z);
  }
  const double z = std::exp(x);
  return z / (1.0 + z);
}

}  // namespace

Var Graph::push(Op op, size_t size, std::span<const Var> args, uint32_t extra,
                Parameter* p0, Parameter* p1, bool needs_grad) {
  if (backward_done_) throw Error("graph is sealed after backward(); clear() it");
  Node n;
  n.op = op;
  n.needs_grad = needs_grad;
  n.offset = static_cast<uint32_t>(values_.size());
  n.size = static_cast<uint32_t>(size);
  n.args_offset = static_cast<uint32_t>(args_.size());
  n.num_args = static_cast<uint32_t>(args.size());
  n.extra = extra;
  n.p0 = p0;
  n.p1 = p1;
  for (Var a : args) args_.push_back(a.id);
  values_.resize(values_.size() + size, 0.0);
  nodes_.push_back(n);
  return Var{static_cast<uint32_t>(nodes_.size() - 1)};
}

const Graph::Node& Graph::node(Var v) const {
  if (!v.valid() || v.id >= nodes_.size()) {
    throw InvalidArgument("variable does not belong to this graph");
  }
  return nodes_[v.id];
}

Var Graph::constant(std::span<const double> values) {
  Var v = push(Op::kConstant, values.size(), {}, 0, nullptr, nullptr, false);
  std::copy(values.begin(), values.end(), val(nodes_[v.id]));
  return v;
}

Var Graph::zeros(size_t n) {
  return push(Op::kConstant, n, {}, 0, nullptr, nullptr, false);
}

Var Graph::parameter(Parameter& p) {
  Var v = push(Op::kParameter, p.value().size(), {}, 0, &p, nullptr,
               !p.frozen());
  std::copy(p.value().values().begin(), p.value().values().end(),
            val(nodes_[v.id]));
  return v;
}

Var Graph::lookup(Parameter& table, size_t row) {
  if (row >= table.value().rows()) throw InvalidArgument("lookup row out of range");
  auto src = table.value().row(row);
  Var v = push(Op::kLookup, src.size(), {}, static_cast<uint32_t>(row), &table,
               nullptr, !table.frozen());
  std::copy(src.begin(), src.end(), val(nodes_[v.id]));
  return v;
}

Var Graph::affine(Parameter& w, Parameter& b, std::span<const Var> inputs) {
  const size_t rows = w.value().rows();
  const size_t cols = w.value().cols();
  if (b.value().size() != rows) throw InvalidArgument("affine: bias size mismatch");
  size_t total = 0;
  bool needs_grad = !w.frozen() || !b.frozen();
  for (Var x : inputs) {
    total += node(x).size;
    needs_grad = needs_grad || needs(x);
  }
  if (total != cols) {
    throw InvalidArgument("affine: input size " + std::to_string(total) +
                          " does not match weight columns " +
                          std::to_string(cols));
  }
  Var v = push(Op::kAffine, rows, inputs, 0, &w, &b, needs_grad);
  const Node& n = nodes_[v.id];
  double* y = val(n);
  std::copy(b.value().values().begin(), b.value().values().end(), y);
  const auto& k = kernels::active();
  size_t col = 0;
  for (Var x : inputs) {
    const Node& xn = nodes_[x.id];
    k.gemv(w.value().data() + col, rows, xn.size, cols, val(xn), y);
    col += xn.size;
  }
  return v;
}

Var Graph::concat(std::span<const Var> parts) {
  size_t total = 0;
  bool needs_grad = false;
  for (Var x : parts) {
    total += node(x).size;
    needs_grad = needs_grad || needs(x);
  }
  Var v = push(Op::kConcat, total, parts, 0, nullptr, nullptr, needs_grad);
  double* y = val(nodes_[v.id]);
  for (Var x : parts) {
    const Node& xn = nodes_[x.id];
    std::copy(val(xn), val(xn) + xn.size, y);
    y += xn.size;
  }
  return v;
}

Var Graph::slice(Var x, size_t offset, size_t length) {
  const Node& xn = node(x);
  if (offset + length > xn.size) throw InvalidArgument("slice out of range");
  const Var args[] = {x};
  Var v = push(Op::kSlice, length, args, static_cast<uint32_t>(offset), nullptr,
               nullptr, xn.needs_grad);
  const double* src = val(nodes_[x.id]) + offset;
  std::copy(src, src + length, val(nodes_[v.id]));
  return v;
}

Var Graph::add(Var a, Var b) {
  const size_t n = node(a).size;
  if (node(b).size != n) throw InvalidArgument("add: size mismatch");
  const Var args[] = {a, b};
  Var v = push(Op::kAdd, n, args, 0, nullptr, nullptr, needs(a) || needs(b));
  const double* x = val(nodes_[a.id]);
  const double* y = val(nodes_[b.id]);
  double* out = val(nodes_[v.id]);
  for (size_t i = 0; i < n; ++i) out[i] = x[i] + y[i];
  return v;
}

Var Graph::mul(Var a, Var b) {
  const size_t n = node(a).size;
  if (node(b).size != n) throw InvalidArgument("mul: size mismatch");
  const Var args[] = {a, b};
  Var v = push(Op::kMul, n, args, 0, nullptr, nullptr, needs(a) || needs(b));
  const double* x = val(nodes_[a.id]);
  const double* y = val(nodes_[b.id]);
  double* out = val(nodes_[v.id]);
  for (size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
  return v;
}

Var Graph::sigmoid(Var x) {
  const size_t n = node(x).size;
  const Var args[] = {x};
  Var v = push(Op::kSigmoid, n, args, 0, nullptr, nullptr, needs(x));
  const double* in = val(nodes_[x.id]);
  double* out = val(nodes_[v.id]);
  for (size_t i = 0; i < n; ++i) out[i] = sigmoid_value(in[i]);
  return v;
}

Var Graph::tanh(Var x) {
  const size_t n = node(x).size;
  const Var args[] = {x};
  Var v = push(Op::kTanh, n, args, 0, nullptr, nullptr, needs(x));
  const double* in = val(nodes_[x.id]);
  double* out = val(nodes_[v.id]);
  for (size_t i = 0; i < n; ++i) out[i] = std::tanh(in[i]);
  return v;
}

Var Graph::sum(std::span<const Var> parts) {
  if (parts.empty()) throw InvalidArgument("sum of no terms");
  const size_t n = node(parts[0]).size;
  bool needs_grad = false;
  for (Var x : parts) {
    if (node(x).size != n) throw InvalidArgument("sum: size mismatch");
    needs_grad = needs_grad || needs(x);
  }
  Var v = push(Op::kSum, n, parts, 0, nullptr, nullptr, needs_grad);
  double* out = val(nodes_[v.id]);
  for (Var x : parts) {
    const double* in = val(nodes_[x.id]);
    for (size_t i = 0; i < n; ++i) out[i] += in[i];
  }
  return v;
}

Var Graph::softmax_cross_entropy(Var logits, size_t gold) {
  const Node& ln = node(logits);
  if (gold >= ln.size) throw InvalidArgument("gold index out of range");
  const Var args[] = {logits};
  Var v = push(Op::kSoftmaxXent, 1, args, static_cast<uint32_t>(gold), nullptr,
               nullptr, ln.needs_grad);
  const auto r = dsds::neural::softmax_cross_entropy(
      std::span<const double>(val(nodes_[logits.id]), nodes_[logits.id].size),
      gold);
  val(nodes_[v.id])[0] = r.loss;
  return v;
}

std::span<const double> Graph::value(Var v) const {
  const Node& n = node(v);
  return {val(n), n.size};
}

double Graph::scalar(Var v) const {
  const Node& n = node(v);
  if (n.size != 1) throw InvalidArgument("node is not a scalar");
  return val(n)[0];
}

size_t Graph::dim(Var v) const { return node(v).size; }

std::span<const double> Graph::grad(Var v) const {
  if (!backward_done_) throw Error("gradients requested before backward()");
  const Node& n = node(v);
  return {grads_.data() + n.offset, n.size};
}

void Graph::backward(Var loss) {
  if (backward_done_) throw Error("backward() already ran on this graph");
  if (nodes_.empty()) throw Error("backward() before any forward computation");
  const Node& root = node(loss);
  if (root.size != 1) throw InvalidArgument("backward root must be a scalar");
  backward_done_ = true;
  grads_.assign(values_.size(), 0.0);
  grads_[root.offset] = 1.0;
  const auto& k = kernels::active();

  for (size_t id = loss.id + 1; id-- > 0;) {
    const Node& n = nodes_[id];
    if (!n.needs_grad) continue;
    const double* g = grads_.data() + n.offset;
    const uint32_t* args = args_.data() + n.args_offset;
    switch (n.op) {
      case Op::kConstant:
        break;
      case Op::kParameter: {
        Parameter& p = *n.p0;
        k.axpy(1.0, g, p.grad().data(), n.size);
        p.mark_dense_dirty();
        break;
      }
      case Op::kLookup: {
        Parameter& p = *n.p0;
        k.axpy(1.0, g, p.grad().row(n.extra).data(), n.size);
        p.touch_row(n.extra);
        break;
      }
      case Op::kAffine: {
        Parameter& w = *n.p0;
        Parameter& b = *n.p1;
        const size_t rows = n.size;
        const size_t cols = w.value().cols();
        if (!b.frozen()) {
          k.axpy(1.0, g, b.grad().data(), rows);
          b.mark_dense_dirty();
        }
        if (!w.frozen()) w.mark_dense_dirty();
        size_t col = 0;
        for (uint32_t a = 0; a < n.num_args; ++a) {
          const Node& xn = nodes_[args[a]];
          if (!w.frozen()) {
            k.ger(g, rows, val(xn), xn.size, cols, w.grad().data() + col);
          }
          if (xn.needs_grad) {
            k.gemv_t(w.value().data() + col, rows, xn.size, cols, g, grd(xn));
          }
          col += xn.size;
        }
        break;
      }
      case Op::kConcat: {
        size_t off = 0;
        for (uint32_t a = 0; a < n.num_args; ++a) {
          const Node& xn = nodes_[args[a]];
          if (xn.needs_grad) k.axpy(1.0, g + off, grd(xn), xn.size);
          off += xn.size;
        }
        break;
      }
      case Op::kSlice: {
        const Node& xn = nodes_[args[0]];
        k.axpy(1.0, g, grd(xn) + n.extra, n.size);
        break;
      }
      case Op::kAdd: {
        for (uint32_t a = 0; a < 2; ++a) {
          const Node& xn = nodes_[args[a]];
          if (xn.needs_grad) k.axpy(1.0, g, grd(xn), n.size);
        }
        break;
      }
      case Op::kMul: {
        const Node& an = nodes_[args[0]];
        const Node& bn = nodes_[args[1]];
        if (an.needs_grad) {
          double* ga = grd(an);
          const double* bv = val(bn);
          for (size_t i = 0; i < n.size; ++i) ga[i] += g[i] * bv[i];
        }
        if (bn.needs_grad) {
          double* gb = grd(bn);
          const double* av = val(an);
          for (size_t i = 0; i < n.size; ++i) gb[i] += g[i] * av[i];
        }
        break;
      }
      case Op::kSigmoid: {
        const Node& xn = nodes_[args[0]];
        const double* y = val(n);
        double* gx = grd(xn);
        for (size_t i = 0; i < n.size; ++i) gx[i] += g[i] * y[i] * (1.0 - y[i]);
        break;
      }
      case Op::kTanh: {
        const Node& xn = nodes_[args[0]];
        const double* y = val(n);
        double* gx = grd(xn);
        for (size_t i = 0; i < n.size; ++i) gx[i] += g[i] * (1.0 - y[i] * y[i]);
        break;
      }
      case Op::kSum: {
        for (uint32_t a = 0; a < n.num_args; ++a) {
          const Node& xn = nodes_[args[a]];
          if (xn.needs_grad) k.axpy(1.0, g, grd(xn), n.size);
        }
        break;
      }
      case Op::kSoftmaxXent: {
        const Node& xn = nodes_[args[0]];
        const auto r = dsds::neural::softmax_cross_entropy(
            std::span<const double>(val(xn), xn.size), n.extra);
        k.axpy(g[0], r.gradient.data(), grd(xn), xn.size);
        break;
      }
    }
  }
}

void Graph::clear() {
  nodes_.clear();
  args_.clear();
  values_.clear();
  grads_.clear();
  backward_done_ = false;
}

LossAndGradient softmax_cross_entropy(std::span<const double> logits, size_t gold) {
  if (gold >= logits.size()) throw InvalidArgument("gold index out of range");
  const double m = *std::max_element(logits.begin(), logits.end());
  LossAndGradient r;
  r.gradient.resize(logits.size());
  double z = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    r.gradient[i] = std::exp(logits[i] - m);
    z += r.gradient[i];
  }
  for (double& p : r.gradient) p /= z;
  r.loss = std::log(z) - (logits[gold] - m);
  r.gradient[gold] -= 1.0;
  return r;
}

}  // namespace dsds::neural
