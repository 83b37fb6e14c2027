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

#ifndef DSDS_PIPELINE_SYNTH_H_
#define DSDS_PIPELINE_SYNTH_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dsds/common/random.h"
#include "dsds/corpus/corpus.h"
#include "dsds/corpus/embeddings.h"
#include "dsds/corpus/lexicon.h"
#include "dsds/corpus/pos_tag.h"
#include "dsds/pipeline/config.h"
#include "dsds/projection/projection.h"

namespace dsds::pipeline {

struct SyntheticTaskSpec {
  std::array<size_t, kNumTags> vocab_sizes{};
  // Each template is a sequence of slot tags; empty uses the built-in grammar.
  std::vector<std::vector<PosTag>> templates;
  double zipf_exponent = 1.0;
  double ambiguity = 0.1;
  double suffix_signal = 0.3;
  double projection_noise = 0.1;
  double min_alignment = 0.2;
  double max_alignment = 1.0;
  double lexicon_coverage = 0.5;
  double disjoint_noise = 0.0;
  size_t train_sentences = 2000;
  size_t test_sentences = 500;
  size_t gold_sentences = 2000;
  size_t sources = 3;
  size_t embedding_dim = 16;
  double embedding_coverage = 0.7;
  double embedding_signal = 0.5;
  uint64_t seed = 1;

  // Throws InvalidArgument.
  void validate() const;
};

SyntheticTaskSpec synth_spec(const RunConfig& config);

// "NOUN=600,VERB=400"; tags not listed keep `base`.
std::array<size_t, kNumTags> parse_vocab_sizes(std::string_view text,
                                               std::array<size_t, kNumTags> base);
// "DET NOUN VERB .|PRON VERB ." separated by '|'.
std::vector<std::vector<PosTag>> parse_templates(std::string_view text);
const std::vector<std::vector<PosTag>>& default_templates();

// Word types of the generated language in Zipf-rank order per PoS. A form
// shared by two PoS appears in both lists.
struct SyntheticLanguage {
  std::array<std::vector<std::string>, kNumTags> words;
  std::array<std::vector<double>, kNumTags> cumulative;  // Zipf CDF per PoS
  std::vector<std::vector<PosTag>> templates;

  const std::string& draw(PosTag tag, Rng& rng) const;
  Sentence sentence(Rng& rng) const;
};

SyntheticLanguage build_language(const SyntheticTaskSpec& spec, Rng& rng);

// Index drawn from a cumulative distribution ending at 1.
size_t draw_cumulative(const std::vector<double>& cumulative, Rng& rng);
std::vector<double> zipf_cumulative(size_t n, double exponent);

struct SyntheticTask {
  SyntheticLanguage language;
  std::vector<projection::MultiParallelSentence> graphs;
  Corpus train_gold;  // gold view of the graph targets
  Corpus test;
  Corpus gold;        // separate treebank behind the frequency table
  FrequencyTable frequencies;
  Lexicon lexicon;       // partial, possibly noised
  Lexicon gold_lexicon;  // full and correct
  EmbeddingTable embeddings;
};

SyntheticTask generate_task(const SyntheticTaskSpec& spec);

}  // namespace dsds::pipeline

#endif  // DSDS_PIPELINE_SYNTH_H_
