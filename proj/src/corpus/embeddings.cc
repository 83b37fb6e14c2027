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

#include "dsds/corpus/embeddings.h"

#include <cstdint>

#include "dsds/common/status.h"
#include "dsds/common/text.h"

namespace dsds {

EmbeddingTable::EmbeddingTable(size_t dim) : dim_(dim), zero_(dim, 0.0) {
  if (dim == 0) throw InvalidArgument("embedding dimension must be positive");
}

bool EmbeddingTable::contains(std::string_view word) const {
  return index_.find(word) != index_.end();
}

size_t EmbeddingTable::index_of(std::string_view word) const {
  auto it = index_.find(word);
  return it == index_.end() ? SIZE_MAX : it->second;
}

void EmbeddingTable::add(std::string word, std::span<const double> vector) {
  if (vector.size() != dim_) {
    throw InvalidArgument("vector for '" + word + "' has dimension " +
                          std::to_string(vector.size()) + ", expected " +
                          std::to_string(dim_));
  }
  if (!index_.emplace(word, words_.size()).second) {
    throw InvalidArgument("duplicate word '" + word + "'");
  }
  words_.push_back(std::move(word));
  data_.insert(data_.end(), vector.begin(), vector.end());
}

std::span<const double> EmbeddingTable::lookup(std::string_view word) const {
  const size_t i = index_of(word);
  if (i == SIZE_MAX) return zero_;
  return row(i);
}

std::span<const double> EmbeddingTable::row(size_t index) const {
  return std::span<const double>(data_).subspan(index * dim_, dim_);
}

std::span<double> EmbeddingTable::mutable_row(size_t index) {
  return std::span<double>(data_).subspan(index * dim_, dim_);
}

EmbeddingTable parse_embeddings(std::string_view text) {
  auto lines = split(text, '\n');
  if (lines.empty() || lines[0].empty()) {
    throw ParseError("missing 'count dim' header", 1);
  }
  auto header = split_whitespace(lines[0]);
  unsigned long long count = 0, dim = 0;
  if (header.size() != 2 || !parse_uint(header[0], count) ||
      !parse_uint(header[1], dim) || dim == 0) {
    throw ParseError("malformed 'count dim' header", 1);
  }
  EmbeddingTable table(dim);
  std::vector<double> values(dim);
  for (size_t i = 1; i < lines.size(); ++i) {
    auto fields = split_whitespace(lines[i]);
    if (fields.empty()) continue;
    if (fields.size() != dim + 1) {
      throw ParseError("expected " + std::to_string(dim) + " values, got " +
                           std::to_string(fields.size() - 1),
                       i + 1);
    }
    for (size_t k = 0; k < dim; ++k) {
      if (!parse_double(fields[k + 1], values[k])) {
        throw ParseError("bad number '" + std::string(fields[k + 1]) + "'",
                         i + 1);
      }
    }
    std::string word(fields[0]);
    if (table.contains(word)) {
      throw ParseError("duplicate word '" + word + "'", i + 1);
    }
    table.add(std::move(word), values);
  }
  if (table.size() != count) {
    throw ParseError("header declares " + std::to_string(count) +
                         " rows, found " + std::to_string(table.size()),
                     0);
  }
  return table;
}

std::string write_embeddings(const EmbeddingTable& table) {
  std::string out = std::to_string(table.size()) + " " +
                    std::to_string(table.dim()) + "\n";
  for (size_t i = 0; i < table.size(); ++i) {
    out.append(table.words()[i]);
    for (double v : table.row(i)) {
      out.push_back(' ');
      out.append(format_double(v));
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace dsds
