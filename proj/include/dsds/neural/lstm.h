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

#ifndef DSDS_NEURAL_LSTM_H_
#define DSDS_NEURAL_LSTM_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dsds/neural/graph.h"
#include "dsds/neural/tensor.h"

namespace dsds::neural {

// One LSTM direction. weights is [4H, in + H] with gate blocks in the order
// input, forget, output, candidate; bias is [4H].
struct LstmCell {
  size_t input_dim = 0;
  size_t hidden_dim = 0;
  Parameter* weights = nullptr;
  Parameter* bias = nullptr;
};

// Registers "<prefix>.W" and "<prefix>.b" in the store.
LstmCell make_lstm_cell(ParameterStore& store, const std::string& prefix,
                        size_t input_dim, size_t hidden_dim, uint64_t seed);
// Rebinds to parameters already present in the store (used after loading).
LstmCell bind_lstm_cell(ParameterStore& store, const std::string& prefix);

struct LstmState {
  Var h;
  Var c;
};

LstmState initial_state(Graph& graph, const LstmCell& cell);

// i = s(W_i[x;h] + b_i), f = s(..), o = s(..), g = tanh(..)
// c' = f * c + i * g, h' = o * tanh(c')
LstmState lstm_step(Graph& graph, const LstmCell& cell, Var x, LstmState prev);

struct BiLstmEncoder {
  LstmCell forward;
  LstmCell backward;
};

BiLstmEncoder make_bilstm(ParameterStore& store, const std::string& prefix,
                          size_t input_dim, size_t hidden_dim, uint64_t seed);
BiLstmEncoder bind_bilstm(ParameterStore& store, const std::string& prefix);

struct BiLstmOutput {
  // forward[i]: state after reading x_0..x_i; backward[i]: after x_{n-1}..x_i.
  std::vector<Var> forward;
  std::vector<Var> backward;
  Var forward_end;   // forward.back()
  Var backward_end;  // backward.front()
};

BiLstmOutput bilstm_run(Graph& graph, const BiLstmEncoder& encoder,
                        std::span<const Var> inputs);

}  // namespace dsds::neural

#endif  // DSDS_NEURAL_LSTM_H_
