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

#ifndef DSDS_PROJECTION_PROJECTION_H_
#define DSDS_PROJECTION_PROJECTION_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsds/corpus/corpus.h"
#include "dsds/corpus/pos_tag.h"

namespace dsds::projection {

// p(l | v_s) over the 12 tags in canonical order.
using LabelDistribution = std::array<double, kNumTags>;

struct SourceSentence {
  std::vector<std::string> tokens;
  std::vector<LabelDistribution> distributions;  // one per token
};

// a(v_s, v_t): source word (source, source_position) aligned to a target
// word with aligner confidence weight in (0, 1]. Indices are 0-based.
struct AlignmentEdge {
  size_t source = 0;
  size_t source_position = 0;
  size_t target_position = 0;
  double weight = 0.0;
};

// One target sentence, its n source sentences and the bipartite alignment
// edges between each source and the target.
struct MultiParallelSentence {
  std::vector<std::string> target;
  std::vector<SourceSentence> sources;
  std::vector<AlignmentEdge> edges;

  size_t num_sources() const { return sources.size(); }
  // Throws InvalidArgument when an invariant is violated.
  void validate() const;
};

// Per target word: accumulated votes for each tag.
using Ballot = std::vector<std::array<double, kNumTags>>;

// ballot(l | v_t) = sum over edges into v_t of p(l | v_s) * a(v_s, v_t).
Ballot collect_ballot(const MultiParallelSentence& sentence);

// argmax per row, ties to the lowest canonical tag; all-zero rows -> nullopt.
std::vector<std::optional<PosTag>> decode_labels(const Ballot& ballot);

// c_{i,t}: fraction of target words aligned to some word of source i.
double source_coverage(const MultiParallelSentence& sentence, size_t source);
// c_t: mean of c_{i,t} over the n sources. Throws when n = 0.
double mean_coverage(const MultiParallelSentence& sentence);
// c^_t: fraction of target words with an edge from any source.
double any_source_coverage(const MultiParallelSentence& sentence);

enum class SelectionStrategy { kMean, kAny, kRandom };

std::string_view strategy_name(SelectionStrategy strategy);
std::optional<SelectionStrategy> parse_strategy(std::string_view name);

// Indices of the selected sentences. kMean/kAny: ranked by descending
// coverage, ties in input order. kRandom: k uniform draws without
// replacement under seed, returned in input order. k > N returns all.
std::vector<size_t> select_top_k(std::span<const MultiParallelSentence> sentences,
                                 size_t k, SelectionStrategy strategy,
                                 uint64_t seed = 0);

// select_top_k, then ballot + decode per sentence; unaligned tokens stay
// untagged. Sentences appear in selection order.
Corpus project_corpus(std::span<const MultiParallelSentence> sentences, size_t k,
                      SelectionStrategy strategy, uint64_t seed = 0);

// JSON lines, one sentence per line:
// {"target":[..],"sources":[{"tokens":[..],"dists":[[12 reals],..]}],
//  "edges":[[source,source_pos,target_pos,weight],..]}
MultiParallelSentence parse_graph_record(std::string_view line);
std::string write_graph_record(const MultiParallelSentence& sentence);
std::vector<MultiParallelSentence> parse_graph_file(std::string_view text);
std::string write_graph_file(std::span<const MultiParallelSentence> sentences);

}  // namespace dsds::projection

#endif  // DSDS_PROJECTION_PROJECTION_H_
