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

#ifndef DSDS_CORPUS_EMBEDDINGS_H_
#define DSDS_CORPUS_EMBEDDINGS_H_

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dsds {

// Pre-trained word vectors of a common dimension. Rows keep file order.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(size_t dim);

  size_t dim() const { return dim_; }
  size_t size() const { return words_.size(); }
  bool contains(std::string_view word) const;
  // SIZE_MAX when absent.
  size_t index_of(std::string_view word) const;

  // Throws InvalidArgument on a duplicate word or wrong dimension.
  void add(std::string word, std::span<const double> vector);

  // The zero vector for absent words.
  std::span<const double> lookup(std::string_view word) const;
  std::span<const double> row(size_t index) const;
  std::span<double> mutable_row(size_t index);
  const std::vector<std::string>& words() const { return words_; }
  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
    return a.dim_ == b.dim_ && a.words_ == b.words_ && a.data_ == b.data_;
  }

 private:
  struct Hash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::vector<double> zero_;
  std::unordered_map<std::string, size_t, Hash, std::equal_to<>> index_;
};

// Header "count dim", then "word v1 ... vd".
EmbeddingTable parse_embeddings(std::string_view text);
std::string write_embeddings(const EmbeddingTable& table);

}  // namespace dsds

#endif  // DSDS_CORPUS_EMBEDDINGS_H_
