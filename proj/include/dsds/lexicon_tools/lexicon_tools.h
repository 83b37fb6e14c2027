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

#ifndef DSDS_LEXICON_TOOLS_LEXICON_TOOLS_H_
#define DSDS_LEXICON_TOOLS_LEXICON_TOOLS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsds/corpus/corpus.h"
#include "dsds/corpus/embeddings.h"
#include "dsds/corpus/lexicon.h"
#include "dsds/corpus/pos_tag.h"

namespace dsds::lexicon_tools {

// How a lexicon tag set W relates to the tag set T observed in gold data.
enum class AgreementCategory {
  kNone,  // type not in the lexicon
  kEqual,
  kSubset,    // W strictly inside T
  kSuperset,  // W strictly contains T
  kDisjoint,
  kOverlap,
};
inline constexpr size_t kNumAgreementCategories = 6;
inline constexpr std::array<AgreementCategory, kNumAgreementCategories>
    kAllAgreementCategories = {
        AgreementCategory::kNone,     AgreementCategory::kEqual,
        AgreementCategory::kSubset,   AgreementCategory::kSuperset,
        AgreementCategory::kDisjoint, AgreementCategory::kOverlap};

std::string_view category_name(AgreementCategory category);

// First match of Equal, Subset, Superset, Disjoint, Overlap; None when w is
// absent. Throws InvalidArgument when t is empty or w is present but empty.
AgreementCategory classify_agreement(std::optional<TagSet> w, TagSet t);

enum class AgreementLevel { kType, kToken };

struct AgreementStratum {
  std::string name;
  std::array<uint64_t, kNumAgreementCategories> counts{};
  uint64_t total() const;
  // 0 for every category of an empty stratum.
  double proportion(AgreementCategory category) const;
};

struct AgreementOptions {
  bool by_ambiguity = true;  // "unambiguous" (|T| = 1) and "ambiguous"
  bool by_frequency = true;  // "low-frequency" and "high-frequency"
};

struct AgreementProfile {
  AgreementLevel level = AgreementLevel::kType;
  // strata[0] is "all"; optional strata follow in a fixed order.
  std::vector<AgreementStratum> strata;
  uint64_t high_frequency_cutoff = 0;
  const AgreementStratum* find(std::string_view name) const;
};

// Largest count c such that types occurring at least c times cover at
// least 10% of the tokens. 0 for an empty vocabulary.
uint64_t high_frequency_cutoff(const Vocabulary& counts);

// T per type is the set of gold tags observed for it in `gold`. Low
// frequency means count <= 1 in `gold`; high means count >= the cutoff.
// Throws InvalidArgument on untagged gold tokens or a morph lexicon.
AgreementProfile agreement_profile(const Lexicon& lexicon, const Corpus& gold,
                                   AgreementLevel level,
                                   const AgreementOptions& options = {});

// Header "stratum,category,count,proportion".
std::string write_agreement_csv(const AgreementProfile& profile);

// n entries uniformly without replacement; all entries when n >= size.
Lexicon sample_random(const Lexicon& lexicon, size_t n, uint64_t seed);

// Top n entries by descending frequency (absent = 0), ties by form.
Lexicon sample_by_frequency(const Lexicon& lexicon, size_t n,
                            const FrequencyTable& frequencies);

struct Cluster {
  TagSet tags;
  std::vector<std::string> members;  // sorted
};
// Ordered by tag-set mask.
using ClusterSet = std::vector<Cluster>;

// Groups forms with identical tag sets. Throws for a morph lexicon.
ClusterSet derive_clusters(const Lexicon& lexicon);

struct RetrofitOptions {
  size_t iterations = 10;
  double alpha = 1.0;
  double beta = 1.0;
  void validate() const;
};

// Adjacency over embedding rows. Each cluster becomes a star centred on
// its most frequent member present in the table (ties by form); members
// missing from the table are skipped.
std::vector<std::vector<size_t>> star_graph(const EmbeddingTable& embeddings,
                                            const ClusterSet& clusters,
                                            const FrequencyTable* frequencies);

// Jacobi updates q_i <- (alpha q^_i + beta sum_N(i) q_j) / (alpha + beta |N(i)|).
EmbeddingTable retrofit(const EmbeddingTable& embeddings,
                        const ClusterSet& clusters,
                        const FrequencyTable* frequencies,
                        const RetrofitOptions& options = {});

// alpha sum ||q_i - q^_i||^2 + beta sum over edges ||q_i - q_j||^2, each
// undirected edge counted once. Throws InvalidArgument on shape mismatch.
double retrofit_objective(const EmbeddingTable& original,
                          const EmbeddingTable& current,
                          const std::vector<std::vector<size_t>>& graph,
                          double alpha, double beta);

}  // namespace dsds::lexicon_tools

#endif  // DSDS_LEXICON_TOOLS_LEXICON_TOOLS_H_
