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

#ifndef DSDS_NEURAL_GRAPH_H_
#define DSDS_NEURAL_GRAPH_H_

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "dsds/neural/tensor.h"

namespace dsds::neural {

// Handle to a node on a Graph tape.
struct Var {
  uint32_t id = UINT32_MAX;
  bool valid() const { return id != UINT32_MAX; }
};

// Reverse-mode tape. Forward values are computed eagerly as nodes are
// added; backward() runs once and accumulates into Parameter::grad().
// Values are vectors; parameters of rank 2 are row-major matrices.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var constant(std::span<const double> values);
  Var zeros(size_t n);
  // The whole parameter as a flat vector.
  Var parameter(Parameter& p);
  // One row of a rank-2 parameter.
  Var lookup(Parameter& table, size_t row);
  // W * [x_1; ...; x_k] + b without materializing the concatenation.
  Var affine(Parameter& w, Parameter& b, std::span<const Var> inputs);
  Var affine(Parameter& w, Parameter& b, std::initializer_list<Var> inputs) {
    return affine(w, b, std::span<const Var>(inputs.begin(), inputs.size()));
  }
  Var concat(std::span<const Var> parts);
  Var concat(std::initializer_list<Var> parts) {
    return concat(std::span<const Var>(parts.begin(), parts.size()));
  }
  Var slice(Var x, size_t offset, size_t length);
  Var add(Var a, Var b);
  Var mul(Var a, Var b);
  Var sigmoid(Var x);
  Var tanh(Var x);
  // Elementwise sum of equally sized vectors.
  Var sum(std::span<const Var> parts);
  // Scalar -log softmax(logits)[gold], max-subtracted.
  Var softmax_cross_entropy(Var logits, size_t gold);

  std::span<const double> value(Var v) const;
  double scalar(Var v) const;
  size_t dim(Var v) const;
  // Gradient of the backward() root w.r.t. v; valid after backward().
  std::span<const double> grad(Var v) const;

  // Throws if v is not a scalar node of this tape or backward already ran.
  void backward(Var loss);
  bool backward_done() const { return backward_done_; }

  void clear();
  size_t num_nodes() const { return nodes_.size(); }

 private:
  enum class Op : uint8_t {
    kConstant,
    kParameter,
    kLookup,
    kAffine,
    kConcat,
    kSlice,
    kAdd,
    kMul,
    kSigmoid,
    kTanh,
    kSum,
    kSoftmaxXent,
  };

  struct Node {
    Op op;
    bool needs_grad;
    uint32_t offset;  // into values_/grads_
    uint32_t size;
    uint32_t args_offset;  // into args_
    uint32_t num_args;
    uint32_t extra;  // row, slice offset, or gold index
    Parameter* p0;
    Parameter* p1;
  };

  Var push(Op op, size_t size, std::span<const Var> args, uint32_t extra,
           Parameter* p0, Parameter* p1, bool needs_grad);
  const Node& node(Var v) const;
  double* val(const Node& n) { return values_.data() + n.offset; }
  const double* val(const Node& n) const { return values_.data() + n.offset; }
  double* grd(const Node& n) { return grads_.data() + n.offset; }
  bool needs(Var v) const { return nodes_[v.id].needs_grad; }

  std::vector<Node> nodes_;
  std::vector<uint32_t> args_;
  std::vector<double> values_;
  std::vector<double> grads_;
  bool backward_done_ = false;
};

struct LossAndGradient {
  double loss;
  std::vector<double> gradient;  // softmax - one_hot(gold)
};

// Standalone form of the training objective.
LossAndGradient softmax_cross_entropy(std::span<const double> logits, size_t gold);

}  // namespace dsds::neural

#endif  // DSDS_NEURAL_GRAPH_H_
