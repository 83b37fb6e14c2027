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

#include "dsds/lexicon_tools/lexicon_tools.h"

#include <algorithm>
#include <map>

#include "dsds/common/random.h"
#include "dsds/common/status.h"
#include "dsds/common/text.h"
#include "dsds/kernels/kernels.h"

namespace dsds::lexicon_tools {
namespace {

size_t category_slot(AgreementCategory c) { return static_cast<size_t>(c); }

void require_pos_lexicon(const Lexicon& lexicon, const char* what) {
  if (lexicon.kind() != LexiconKind::kPosTagset) {
    throw InvalidArgument(std::string(what) + " needs a PoS tag-set lexicon");
  }
}

}  // namespace

std::string_view category_name(AgreementCategory category) {
  switch (category) {
    case AgreementCategory::kNone: return "None";
    case AgreementCategory::kEqual: return "Equal";
    case AgreementCategory::kSubset: return "Subset";
    case AgreementCategory::kSuperset: return "Superset";
    case AgreementCategory::kDisjoint: return "Disjoint";
    case AgreementCategory::kOverlap: return "Overlap";
  }
  return "?";
}

AgreementCategory classify_agreement(std::optional<TagSet> w, TagSet t) {
  if (t.empty()) throw InvalidArgument("observed tag set is empty");
  if (!w) return AgreementCategory::kNone;
  if (w->empty()) throw InvalidArgument("lexicon tag set is empty");
  if (*w == t) return AgreementCategory::kEqual;
  if (w->is_subset_of(t)) return AgreementCategory::kSubset;
  if (t.is_subset_of(*w)) return AgreementCategory::kSuperset;
  if (!w->intersects(t)) return AgreementCategory::kDisjoint;
  return AgreementCategory::kOverlap;
}

uint64_t AgreementStratum::total() const {
  uint64_t sum = 0;
  for (uint64_t c : counts) sum += c;
  return sum;
}

double AgreementStratum::proportion(AgreementCategory category) const {
  const uint64_t n = total();
  if (n == 0) return 0.0;
  return static_cast<double>(counts[category_slot(category)]) /
         static_cast<double>(n);
}

const AgreementStratum* AgreementProfile::find(std::string_view name) const {
  for (const auto& s : strata) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

uint64_t high_frequency_cutoff(const Vocabulary& counts) {
  uint64_t tokens = 0;
  std::map<uint64_t, uint64_t, std::greater<>> mass;  // count -> tokens
  for (const auto& [form, c] : counts) {
    tokens += c;
    mass[c] += c;
  }
  if (tokens == 0) return 0;
  uint64_t covered = 0;
  for (const auto& [c, m] : mass) {
    covered += m;
    if (10 * covered >= tokens) return c;
  }
  return mass.rbegin()->first;
}

AgreementProfile agreement_profile(const Lexicon& lexicon, const Corpus& gold,
                                   AgreementLevel level,
                                   const AgreementOptions& options) {
  require_pos_lexicon(lexicon, "agreement profile");
  std::map<std::string, TagSet, std::less<>> observed;
  for (const Sentence& s : gold.sentences()) {
    for (const Token& t : s) {
      if (!t.gold) {
        throw InvalidArgument("gold corpus has an untagged token '" + t.form + "'");
      }
      observed[t.form].insert(*t.gold);
    }
  }

  AgreementProfile profile;
  profile.level = level;
  profile.high_frequency_cutoff = high_frequency_cutoff(gold.vocabulary());
  profile.strata.push_back({"all", {}});
  if (options.by_ambiguity) {
    profile.strata.push_back({"unambiguous", {}});
    profile.strata.push_back({"ambiguous", {}});
  }
  if (options.by_frequency) {
    profile.strata.push_back({"low-frequency", {}});
    profile.strata.push_back({"high-frequency", {}});
  }
  auto stratum = [&](std::string_view name) {
    for (auto& s : profile.strata) {
      if (s.name == name) return &s;
    }
    return static_cast<AgreementStratum*>(nullptr);
  };

  for (const auto& [form, t] : observed) {
    const uint64_t count = gold.vocabulary().find(form)->second;
    const size_t slot = category_slot(classify_agreement(lexicon.tag_set(form), t));
    const uint64_t weight = level == AgreementLevel::kType ? 1 : count;
    profile.strata[0].counts[slot] += weight;
    if (options.by_ambiguity) {
      stratum(t.size() == 1 ? "unambiguous" : "ambiguous")->counts[slot] += weight;
    }
    if (options.by_frequency) {
      if (count <= 1) stratum("low-frequency")->counts[slot] += weight;
      if (count >= profile.high_frequency_cutoff) {
        stratum("high-frequency")->counts[slot] += weight;
      }
    }
  }
  return profile;
}

std::string write_agreement_csv(const AgreementProfile& profile) {
  std::string out = "stratum,category,count,proportion\n";
  for (const auto& s : profile.strata) {
    for (AgreementCategory c : kAllAgreementCategories) {
      out += s.name;
      out += ',';
      out += category_name(c);
      out += ',';
      out += std::to_string(s.counts[category_slot(c)]);
      out += ',';
      out += format_double(s.proportion(c));
      out += '\n';
    }
  }
  return out;
}

Lexicon sample_random(const Lexicon& lexicon, size_t n, uint64_t seed) {
  std::vector<const Lexicon::Entries::value_type*> entries;
  for (const auto& e : lexicon.entries()) entries.push_back(&e);
  Rng rng(seed);
  Lexicon::Entries picked;
  for (size_t i : sample_without_replacement(entries.size(), n, rng)) {
    picked.insert(*entries[i]);
  }
  return Lexicon(lexicon.kind(), std::move(picked));
}

Lexicon sample_by_frequency(const Lexicon& lexicon, size_t n,
                            const FrequencyTable& frequencies) {
  std::vector<std::pair<uint64_t, const Lexicon::Entries::value_type*>> ranked;
  for (const auto& e : lexicon.entries()) {
    ranked.emplace_back(frequency_of(frequencies, e.first), &e);
  }
  // Entries iterate in form order, so a stable sort keeps ties by form.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  Lexicon::Entries picked;
  for (size_t i = 0; i < std::min(n, ranked.size()); ++i) {
    picked.insert(*ranked[i].second);
  }
  return Lexicon(lexicon.kind(), std::move(picked));
}

ClusterSet derive_clusters(const Lexicon& lexicon) {
  require_pos_lexicon(lexicon, "cluster derivation");
  std::map<uint16_t, Cluster> by_mask;
  for (const auto& [form, props] : lexicon.entries()) {
    const TagSet t = *lexicon.tag_set(form);
    Cluster& c = by_mask[t.mask()];
    c.tags = t;
    c.members.push_back(form);
  }
  ClusterSet out;
  for (auto& [mask, c] : by_mask) out.push_back(std::move(c));
  return out;
}

void RetrofitOptions::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw InvalidArgument("retrofit weights must be positive");
  }
}

std::vector<std::vector<size_t>> star_graph(const EmbeddingTable& embeddings,
                                            const ClusterSet& clusters,
                                            const FrequencyTable* frequencies) {
  std::vector<std::vector<size_t>> graph(embeddings.size());
  for (const Cluster& c : clusters) {
    std::vector<size_t> rows;
    size_t centre = SIZE_MAX;
    uint64_t best = 0;
    for (const std::string& form : c.members) {  // sorted, so ties go to the first
      const size_t r = embeddings.index_of(form);
      if (r == SIZE_MAX) continue;
      rows.push_back(r);
      const uint64_t f = frequencies ? frequency_of(*frequencies, form) : 0;
      if (centre == SIZE_MAX || f > best) {
        centre = r;
        best = f;
      }
    }
    if (rows.size() < 2) continue;
    for (size_t r : rows) {
      if (r == centre) continue;
      graph[centre].push_back(r);
      graph[r].push_back(centre);
    }
  }
  return graph;
}

EmbeddingTable retrofit(const EmbeddingTable& embeddings,
                        const ClusterSet& clusters,
                        const FrequencyTable* frequencies,
                        const RetrofitOptions& options) {
  options.validate();
  const auto graph = star_graph(embeddings, clusters, frequencies);
  const size_t dim = embeddings.dim();
  std::vector<double> current = embeddings.data();
  std::vector<double> next = current;
  const auto& kt = kernels::active();
  for (size_t it = 0; it < options.iterations; ++it) {
    for (size_t i = 0; i < graph.size(); ++i) {
      if (graph[i].empty()) continue;
      double* out = next.data() + i * dim;
      const double* orig = embeddings.data().data() + i * dim;
      const double denom =
          options.alpha + options.beta * static_cast<double>(graph[i].size());
      for (size_t k = 0; k < dim; ++k) out[k] = options.alpha * orig[k];
      for (size_t j : graph[i]) kt.axpy(options.beta, current.data() + j * dim, out, dim);
      for (size_t k = 0; k < dim; ++k) out[k] /= denom;
    }
    std::swap(current, next);
  }
  EmbeddingTable out(dim);
  for (size_t i = 0; i < embeddings.size(); ++i) {
    out.add(embeddings.words()[i],
            std::span<const double>(current.data() + i * dim, dim));
  }
  return out;
}

double retrofit_objective(const EmbeddingTable& original,
                          const EmbeddingTable& current,
                          const std::vector<std::vector<size_t>>& graph,
                          double alpha, double beta) {
  if (original.dim() != current.dim() || original.size() != current.size() ||
      graph.size() != original.size()) {
    throw InvalidArgument("retrofit objective: shape mismatch");
  }
  const size_t dim = original.dim();
  std::vector<double> diff(dim);
  auto sq_dist = [&](std::span<const double> a, std::span<const double> b) {
    for (size_t k = 0; k < dim; ++k) diff[k] = a[k] - b[k];
    return kernels::sum_squares(diff);
  };
  double total = 0.0;
  for (size_t i = 0; i < original.size(); ++i) {
    total += alpha * sq_dist(current.row(i), original.row(i));
    for (size_t j : graph[i]) {
      if (j > i) total += beta * sq_dist(current.row(i), current.row(j));
    }
  }
  return total;
}

}  // namespace dsds::lexicon_tools
