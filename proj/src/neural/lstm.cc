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

#include "dsds/neural/lstm.h"

#include "dsds/common/random.h"
#include "dsds/common/status.h"

namespace dsds::neural {

LstmCell make_lstm_cell(ParameterStore& store, const std::string& prefix,
                        size_t input_dim, size_t hidden_dim, uint64_t seed) {
  if (input_dim == 0 || hidden_dim == 0) {
    throw InvalidArgument("LSTM dimensions must be positive");
  }
  LstmCell cell;
  cell.input_dim = input_dim;
  cell.hidden_dim = hidden_dim;
  cell.weights = &store.add(
      prefix + ".W",
      seeded_init({4 * hidden_dim, input_dim + hidden_dim},
                  derive_seed(seed, prefix + ".W"), InitScheme::kGlorotUniform));
  cell.bias = &store.add(prefix + ".b", Tensor({4 * hidden_dim}));
  return cell;
}

LstmCell bind_lstm_cell(ParameterStore& store, const std::string& prefix) {
  LstmCell cell;
  cell.weights = store.find(prefix + ".W");
  cell.bias = store.find(prefix + ".b");
  if (cell.weights == nullptr || cell.bias == nullptr) {
    throw InvalidArgument("missing LSTM parameters for '" + prefix + "'");
  }
  cell.hidden_dim = cell.weights->value().rows() / 4;
  if (cell.weights->value().rows() != 4 * cell.hidden_dim ||
      cell.weights->value().cols() <= cell.hidden_dim ||
      cell.bias->value().size() != 4 * cell.hidden_dim) {
    throw InvalidArgument("inconsistent LSTM parameter shapes for '" + prefix +
                          "'");
  }
  cell.input_dim = cell.weights->value().cols() - cell.hidden_dim;
  return cell;
}

LstmState initial_state(Graph& graph, const LstmCell& cell) {
  return LstmState{graph.zeros(cell.hidden_dim), graph.zeros(cell.hidden_dim)};
}

LstmState lstm_step(Graph& graph, const LstmCell& cell, Var x, LstmState prev) {
  const size_t hd = cell.hidden_dim;
  if (graph.dim(x) != cell.input_dim) {
    throw InvalidArgument("lstm_step: input has dimension " +
                          std::to_string(graph.dim(x)) + ", cell expects " +
                          std::to_string(cell.input_dim));
  }
  if (graph.dim(prev.h) != hd || graph.dim(prev.c) != hd) {
    throw InvalidArgument("lstm_step: state dimension mismatch");
  }
  const Var z = graph.affine(*cell.weights, *cell.bias, {x, prev.h});
  const Var i = graph.sigmoid(graph.slice(z, 0, hd));
  const Var f = graph.sigmoid(graph.slice(z, hd, hd));
  const Var o = graph.sigmoid(graph.slice(z, 2 * hd, hd));
  const Var g = graph.tanh(graph.slice(z, 3 * hd, hd));
  const Var c = graph.add(graph.mul(f, prev.c), graph.mul(i, g));
  const Var h = graph.mul(o, graph.tanh(c));
  return LstmState{h, c};
}

BiLstmEncoder make_bilstm(ParameterStore& store, const std::string& prefix,
                          size_t input_dim, size_t hidden_dim, uint64_t seed) {
  return BiLstmEncoder{
      make_lstm_cell(store, prefix + ".fwd", input_dim, hidden_dim, seed),
      make_lstm_cell(store, prefix + ".bwd", input_dim, hidden_dim, seed)};
}

BiLstmEncoder bind_bilstm(ParameterStore& store, const std::string& prefix) {
  BiLstmEncoder enc{bind_lstm_cell(store, prefix + ".fwd"),
                    bind_lstm_cell(store, prefix + ".bwd")};
  if (enc.forward.input_dim != enc.backward.input_dim ||
      enc.forward.hidden_dim != enc.backward.hidden_dim) {
    throw InvalidArgument("bi-LSTM directions disagree on dimensions");
  }
  return enc;
}

BiLstmOutput bilstm_run(Graph& graph, const BiLstmEncoder& encoder,
                        std::span<const Var> inputs) {
  const size_t n = inputs.size();
  if (n == 0) throw InvalidArgument("bilstm_run: empty input sequence");
  BiLstmOutput out;
  out.forward.resize(n);
  out.backward.resize(n);
  LstmState s = initial_state(graph, encoder.forward);
  for (size_t t = 0; t < n; ++t) {
    s = lstm_step(graph, encoder.forward, inputs[t], s);
    out.forward[t] = s.h;
  }
  s = initial_state(graph, encoder.backward);
  for (size_t t = n; t-- > 0;) {
    s = lstm_step(graph, encoder.backward, inputs[t], s);
    out.backward[t] = s.h;
  }
  out.forward_end = out.forward.back();
  out.backward_end = out.backward.front();
  return out;
}

}  // namespace dsds::neural
