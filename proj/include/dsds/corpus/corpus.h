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

#ifndef DSDS_CORPUS_CORPUS_H_
#define DSDS_CORPUS_CORPUS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsds/corpus/pos_tag.h"

namespace dsds {

struct Token {
  std::string form;
  std::optional<PosTag> gold;

  friend bool operator==(const Token&, const Token&) = default;
};

using Sentence = std::vector<Token>;

// Word form -> occurrence count. Ordered so that iteration is deterministic.
using Vocabulary = std::map<std::string, uint64_t, std::less<>>;

// Ordered sentences plus the derived type vocabulary.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Sentence> sentences);

  // Throws InvalidArgument on an empty sentence or a bad form.
  void add_sentence(Sentence sentence);

  const std::vector<Sentence>& sentences() const { return sentences_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }
  size_t token_count() const { return token_count_; }
  size_t labeled_token_count() const;
  bool fully_tagged() const;

 private:
  std::vector<Sentence> sentences_;
  Vocabulary vocabulary_;
  size_t token_count_ = 0;
};

// Optional treebank-tag -> universal-tag mapping ("NOUN\tNOUN", "PROPN\tNOUN").
using TagMapping = std::map<std::string, std::string, std::less<>>;

TagMapping parse_tag_mapping(std::string_view text);

// One "form<TAB>tag" per line, blank line ends a sentence, "_" = untagged.
// With a mapping, the tag column is translated before validation; tags the
// mapping does not mention must already be universal tags.
Corpus parse_corpus(std::string_view text, const TagMapping* mapping = nullptr);
std::string write_corpus(const Corpus& corpus);

// Word form -> count in a corpus.
using FrequencyTable = Vocabulary;

FrequencyTable build_frequency_table(const Corpus& corpus);
// "form<TAB>count" lines.
FrequencyTable parse_frequency_table(std::string_view text);
std::string write_frequency_table(const FrequencyTable& table);
uint64_t frequency_of(const FrequencyTable& table, std::string_view form);

}  // namespace dsds

#endif  // DSDS_CORPUS_CORPUS_H_
