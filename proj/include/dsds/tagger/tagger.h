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

#ifndef DSDS_TAGGER_TAGGER_H_
#define DSDS_TAGGER_TAGGER_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dsds/common/random.h"
#include "dsds/corpus/corpus.h"
#include "dsds/corpus/embeddings.h"
#include "dsds/corpus/lexicon.h"
#include "dsds/corpus/pos_tag.h"
#include "dsds/neural/graph.h"
#include "dsds/neural/lstm.h"
#include "dsds/neural/optimizer.h"
#include "dsds/neural/tensor.h"

namespace dsds::tagger {

struct TaggerConfig {
  size_t epochs = 10;
  double word_dropout = 0.25;
  size_t char_dim = 16;
  size_t char_hidden = 32;
  size_t word_hidden = 100;
  size_t lexicon_dim = 40;
  // Only used when no pre-trained embeddings are given.
  size_t word_dim = 64;
  bool freeze_embeddings = true;
  uint64_t seed = 1;
  neural::SgdConfig optimizer;

  // Throws InvalidArgument.
  void validate() const;
};

enum class InputMode { kTrain, kInfer };

using Logits = std::array<double, kNumTags>;

// Bi-LSTM tagger over w . cw (. e):
//   w  - pre-trained word embedding (or a learned UNK row)
//   cw - forward and backward end states of a character bi-LSTM
//   e  - lexicon embedding, one l-dim slot per inventory property
// followed by a word-level bi-LSTM and a linear layer to 12 logits.
class TaggerModel {
 public:
  // Untrained model with vocabularies taken from `train`. Pass nullptr for
  // `embeddings` to learn a word table over the training vocabulary, and
  // nullptr for `lexicon` to build the base model.
  static TaggerModel initialize(const Corpus& train, const TaggerConfig& config,
                                const EmbeddingTable* embeddings,
                                const Lexicon* lexicon);

  const TaggerConfig& config() const { return config_; }
  bool has_lexicon() const { return lexicon_.has_value(); }
  const Lexicon* lexicon() const { return lexicon_ ? &*lexicon_ : nullptr; }
  const Vocabulary& training_vocabulary() const { return train_vocab_; }

  size_t word_dim() const;
  size_t char_encoding_dim() const { return 2 * config_.char_hidden; }
  size_t lexicon_encoding_dim() const;
  size_t input_dim() const;

  // Graph builders.
  neural::Var char_word_encode(neural::Graph& g, std::string_view form) const;
  neural::Var lexicon_embed(neural::Graph& g, std::string_view form) const;
  // rng is required in kTrain mode and ignored in kInfer mode.
  neural::Var build_input(neural::Graph& g, const Sentence& sentence,
                          size_t position, InputMode mode, Rng* rng) const;
  std::vector<neural::Var> logits(neural::Graph& g, const Sentence& sentence,
                                  InputMode mode, Rng* rng) const;

  // Forward-only conveniences.
  std::vector<double> encode_chars(std::string_view form) const;
  std::vector<double> encode_lexicon(std::string_view form) const;
  std::vector<Logits> sentence_logits(const Sentence& sentence) const;

  // Row of the (possibly frozen) word table; empty when not in the table.
  std::span<const double> word_vector(std::string_view form) const;
  const std::vector<std::string>& word_vocabulary() const { return word_vocab_; }

  neural::ParameterStore& parameters() const { return params_; }

  std::string save() const;
  static TaggerModel load(std::string_view text);

 private:
  TaggerModel() = default;
  void bind();
  size_t char_index(char32_t c) const;

  TaggerConfig config_;
  Vocabulary train_vocab_;
  std::vector<std::string> word_vocab_;
  std::unordered_map<std::string, size_t> word_index_;
  bool pretrained_ = false;
  std::vector<char32_t> char_vocab_;  // sorted; row 0 of the table is UNK
  std::optional<Lexicon> lexicon_;

  // Forward passes only read values; backward() accumulates into grads.
  mutable neural::ParameterStore params_;
  neural::Parameter* word_table_ = nullptr;
  neural::Parameter* word_unk_ = nullptr;
  neural::Parameter* char_table_ = nullptr;
  neural::Parameter* lex_table_ = nullptr;
  neural::Parameter* out_w_ = nullptr;
  neural::Parameter* out_b_ = nullptr;
  neural::BiLstmEncoder char_lstm_;
  neural::BiLstmEncoder word_lstm_;
};

// Drop with probability p / (p + count); never drops when p == 0.
bool word_dropout_decision(uint64_t count, double p, Rng& rng);
double word_dropout_probability(uint64_t count, double p);

struct TrainResult {
  TaggerModel model;
  std::vector<double> epoch_losses;
};

// Per-sentence SGD over a seeded shuffle each epoch. Untagged tokens feed
// the context but add no loss. Throws InvalidArgument when no token is
// labeled.
TrainResult train(const Corpus& corpus, const TaggerConfig& config,
                  const EmbeddingTable* embeddings, const Lexicon* lexicon);

// Lowest canonical index wins ties. Restricted to `allowed` if non-empty.
PosTag argmax_tag(const Logits& logits, TagSet allowed = TagSet());

std::vector<PosTag> predict(const TaggerModel& model, const Sentence& sentence);
// Forms in the lexicon get the argmax over their tag set; others fall back
// to plain argmax. Throws InvalidArgument for a morph lexicon.
std::vector<PosTag> predict_type_constrained(const TaggerModel& model,
                                             const Sentence& sentence,
                                             const Lexicon& lexicon);

struct Decoding {
  const Lexicon* type_constraints = nullptr;  // nullptr: plain argmax
};

struct Evaluation {
  size_t correct = 0;
  size_t total = 0;
  double accuracy = 0.0;
  // confusion[gold][predicted]
  std::array<std::array<size_t, kNumTags>, kNumTags> confusion{};
  std::vector<std::vector<PosTag>> predictions;
};

Evaluation evaluate(const TaggerModel& model, const Corpus& gold,
                    Decoding decoding = {});
// Scores given predictions against gold. Throws on an untagged gold token.
Evaluation score(const Corpus& gold,
                 std::vector<std::vector<PosTag>> predictions);

Corpus tag_corpus(const TaggerModel& model, const Corpus& input,
                  Decoding decoding = {});

}  // namespace dsds::tagger

#endif  // DSDS_TAGGER_TAGGER_H_
