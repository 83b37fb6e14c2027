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

#include <cmath>
#include <set>

#include "doctest.h"
#include "dsds/common/random.h"
#include "dsds/common/status.h"
#include "dsds/kernels/kernels.h"
#include "dsds/lexicon_tools/lexicon_tools.h"

namespace dsds::lexicon_tools {
namespace {

using C = AgreementCategory;

TEST_CASE("classify_agreement") {
  const TagSet noun{PosTag::kNoun}, nv{PosTag::kNoun, PosTag::kVerb};
  CHECK(classify_agreement(noun, noun) == C::kEqual);
  CHECK(classify_agreement(nv, noun) == C::kSuperset);
  CHECK(classify_agreement(noun, nv) == C::kSubset);
  CHECK(classify_agreement(TagSet{PosTag::kAdj}, noun) == C::kDisjoint);
  CHECK(classify_agreement(TagSet{PosTag::kAdj, PosTag::kNoun}, nv) == C::kOverlap);
  CHECK(classify_agreement(std::nullopt, noun) == C::kNone);
  CHECK_THROWS_AS(classify_agreement(TagSet(), noun), InvalidArgument);
  CHECK_THROWS_AS(classify_agreement(noun, TagSet()), InvalidArgument);
}

// Set-algebra oracle checked over every pair of a small tag universe.
TEST_CASE("classify_agreement is total and matches set algebra") {
  size_t per_category[kNumAgreementCategories] = {};
  for (uint16_t wm = 0; wm < 64; ++wm) {
    for (uint16_t tm = 1; tm < 64; ++tm) {
      const TagSet t(tm);
      std::optional<TagSet> w;
      if (wm != 0) w = TagSet(wm);
      const C c = classify_agreement(w, t);
      ++per_category[static_cast<size_t>(c)];
      if (!w) {
        CHECK(c == C::kNone);
        continue;
      }
      const uint16_t inter = wm & tm;
      const C expected = wm == tm              ? C::kEqual
                         : inter == wm         ? C::kSubset
                         : inter == tm         ? C::kSuperset
                         : inter == 0          ? C::kDisjoint
                                               : C::kOverlap;
      CHECK(c == expected);
    }
  }
  for (size_t n : per_category) CHECK(n > 0);
}

TEST_CASE("high_frequency_cutoff") {
  // 20 tokens; the type with count 3 alone covers 15%.
  Vocabulary v = {{"a", 3}, {"b", 2}, {"c", 2}, {"d", 1}};
  for (int i = 0; i < 12; ++i) v["u" + std::to_string(i)] = 1;
  CHECK(high_frequency_cutoff(v) == 3);
  // 10 singletons: the top count 1 is the only choice.
  Vocabulary flat;
  for (int i = 0; i < 10; ++i) flat["s" + std::to_string(i)] = 1;
  CHECK(high_frequency_cutoff(flat) == 1);
  // 100 tokens; count 9 covers 9%, adding the 5s reaches 14%.
  Vocabulary mid = {{"x", 9}, {"y", 5}};
  for (int i = 0; i < 86; ++i) mid["z" + std::to_string(i)] = 1;
  CHECK(high_frequency_cutoff(mid) == 5);
  CHECK(high_frequency_cutoff({}) == 0);
}

TEST_CASE("agreement profile on a five-type corpus") {
  // Types and gold tag sets:
  //   the {DET} x3, run {NOUN,VERB} x2, cat {NOUN} x1, big {ADJ} x1, fast {ADV,ADJ} x1
  const Corpus gold = parse_corpus(
      "the\tDET\nrun\tNOUN\nthe\tDET\nrun\tVERB\n\n"
      "the\tDET\ncat\tNOUN\nbig\tADJ\nfast\tADV\n\n"
      "fast\tADJ\n\n");
  // Lexicon: the {DET} Equal, run {VERB} Subset, cat {NOUN,X} Superset,
  //          big {NOUN} Disjoint, fast absent None.
  const Lexicon lex = parse_lexicon(
      "the\tDET\nrun\tVERB\ncat\tNOUN,X\nbig\tNOUN\nunused\tADP\n",
      LexiconKind::kPosTagset);
  const AgreementProfile types = agreement_profile(lex, gold, AgreementLevel::kType);
  const AgreementStratum& all = types.strata[0];
  CHECK(all.name == "all");
  CHECK(all.counts == std::array<uint64_t, 6>{1, 1, 1, 1, 1, 0});
  CHECK(all.proportion(C::kEqual) == 0.2);

  // 9 tokens; cutoff: count 3 covers 33% >= 10%, so high = {the}.
  CHECK(types.high_frequency_cutoff == 3);
  CHECK(types.find("high-frequency")->counts ==
        std::array<uint64_t, 6>{0, 1, 0, 0, 0, 0});
  // Low (count <= 1): cat Superset, big Disjoint.
  CHECK(types.find("low-frequency")->counts ==
        std::array<uint64_t, 6>{0, 0, 0, 1, 1, 0});
  // Ambiguous: run, fast.
  CHECK(types.find("ambiguous")->counts == std::array<uint64_t, 6>{1, 0, 1, 0, 0, 0});
  CHECK(types.find("unambiguous")->counts == std::array<uint64_t, 6>{0, 1, 0, 1, 1, 0});

  const AgreementProfile tokens = agreement_profile(lex, gold, AgreementLevel::kToken);
  CHECK(tokens.strata[0].counts == std::array<uint64_t, 6>{2, 3, 2, 1, 1, 0});
  CHECK(tokens.strata[0].total() == gold.token_count());

  const std::string csv = write_agreement_csv(types);
  CHECK(csv.rfind("stratum,category,count,proportion\n", 0) == 0);
  CHECK(csv.find("all,Equal,1,0.2\n") != std::string::npos);
  CHECK(csv.find("high-frequency,Equal,1,1\n") != std::string::npos);
}

TEST_CASE("agreement profile extremes and invariants") {
  const Corpus gold = parse_corpus("a\tDET\nb\tNOUN\nb\tVERB\nc\tX\n\nd\tADJ\n\n");
  const Lexicon empty(LexiconKind::kPosTagset);
  const auto none = agreement_profile(empty, gold, AgreementLevel::kType);
  CHECK(none.strata[0].proportion(C::kNone) == 1.0);

  const Lexicon exact = parse_lexicon("a\tDET\nb\tNOUN,VERB\nc\tX\nd\tADJ\n",
                                      LexiconKind::kPosTagset);
  const auto eq = agreement_profile(exact, gold, AgreementLevel::kToken);
  CHECK(eq.strata[0].proportion(C::kEqual) == 1.0);

  for (const auto& s : eq.strata) {
    if (s.total() == 0) continue;
    double sum = 0.0;
    for (C c : kAllAgreementCategories) sum += s.proportion(c);
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
  const auto bare = agreement_profile(exact, gold, AgreementLevel::kType,
                                      {.by_ambiguity = false, .by_frequency = false});
  CHECK(bare.strata.size() == 1);
  CHECK(bare.strata[0].total() == 4);

  CHECK_THROWS_AS(agreement_profile(exact, parse_corpus("a\t_\n\n"), AgreementLevel::kType),
                  InvalidArgument);
  const Lexicon morph = parse_lexicon("a\tV;PST\n", LexiconKind::kMorph);
  CHECK_THROWS_AS(agreement_profile(morph, gold, AgreementLevel::kType), InvalidArgument);
}

Lexicon numbered_lexicon(size_t n) {
  Lexicon::Entries e;
  for (size_t i = 0; i < n; ++i) {
    e["w" + std::to_string(100 + i)] = {i % 3 == 0 ? "NOUN" : "VERB"};
  }
  return Lexicon(LexiconKind::kPosTagset, e);
}

bool verbatim_subset(const Lexicon& part, const Lexicon& whole) {
  for (const auto& [form, props] : part.entries()) {
    auto it = whole.entries().find(form);
    if (it == whole.entries().end() || it->second != props) return false;
  }
  return true;
}

TEST_CASE("sample_random") {
  const Lexicon lex = numbered_lexicon(40);
  CHECK(sample_random(lex, 40, 1) == lex);
  CHECK(sample_random(lex, 99, 1) == lex);
  CHECK(sample_random(lex, 0, 1).empty());
  const Lexicon s1 = sample_random(lex, 10, 7);
  CHECK(s1.size() == 10);
  CHECK(s1 == sample_random(lex, 10, 7));
  CHECK_FALSE(s1 == sample_random(lex, 10, 8));
  CHECK(verbatim_subset(s1, lex));
  // Inventory recomputed from the sample.
  const Lexicon one = sample_random(parse_lexicon("a\tNOUN\nb\tVERB\n", LexiconKind::kPosTagset), 1, 3);
  CHECK(one.inventory().size() == 1);

  // Every entry is equally likely: 10/40 inclusion rate.
  std::map<std::string, int> hits;
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    const Lexicon sample = sample_random(lex, 10, 1000 + t);
    for (const auto& [form, p] : sample.entries()) ++hits[form];
  }
  for (const auto& [form, h] : hits) CHECK(std::abs(h / double(trials) - 0.25) < 0.04);
}

TEST_CASE("sample_by_frequency") {
  const Lexicon lex = parse_lexicon("a\tNOUN\nb\tVERB\nc\tADJ\n", LexiconKind::kPosTagset);
  const FrequencyTable f = {{"a", 5}, {"b", 3}, {"c", 1}};
  const Lexicon top2 = sample_by_frequency(lex, 2, f);
  CHECK(top2.contains("a"));
  CHECK(top2.contains("b"));
  CHECK_FALSE(top2.contains("c"));
  const Lexicon zeros = sample_by_frequency(numbered_lexicon(10), 3, {});
  CHECK(zeros.contains("w100"));
  CHECK(zeros.contains("w101"));
  CHECK(zeros.contains("w102"));
  const FrequencyTable rev = {{"c", 9}, {"b", 9}};
  const Lexicon tie = sample_by_frequency(lex, 1, rev);
  CHECK(tie.contains("b"));
  CHECK(verbatim_subset(sample_by_frequency(numbered_lexicon(30), 12, {{"w110", 4}}),
                        numbered_lexicon(30)));
}

TEST_CASE("derive_clusters") {
  const Lexicon lex = parse_lexicon("cat\tNOUN\ndog\tNOUN\nplay\tNOUN,VERB\n",
                                    LexiconKind::kPosTagset);
  const ClusterSet cs = derive_clusters(lex);
  REQUIRE(cs.size() == 2);
  CHECK(cs[0].members == std::vector<std::string>{"cat", "dog"});
  CHECK(cs[1].members == std::vector<std::string>{"play"});
  const ClusterSet single = derive_clusters(parse_lexicon(
      "a\tNOUN\nb\tVERB\nc\tNOUN,VERB\n", LexiconKind::kPosTagset));
  CHECK(single.size() == 3);

  // Random lexicons: a partition of the forms, at most 2^12 - 1 groups.
  Rng rng(4);
  Lexicon::Entries e;
  for (int i = 0; i < 500; ++i) {
    std::set<std::string> tags;
    const size_t k = 1 + uniform_index(rng, 3);
    for (size_t j = 0; j < k; ++j) {
      tags.insert(std::string(tag_name(tag_from_index(uniform_index(rng, 12)))));
    }
    e["f" + std::to_string(i)] = tags;
  }
  const Lexicon big(LexiconKind::kPosTagset, e);
  const ClusterSet bc = derive_clusters(big);
  CHECK(bc.size() <= 4095);
  std::set<std::string> seen;
  size_t total = 0;
  for (const Cluster& c : bc) {
    for (const auto& m : c.members) {
      seen.insert(m);
      CHECK(*big.tag_set(m) == c.tags);
    }
    total += c.members.size();
  }
  CHECK(total == big.size());
  CHECK(seen.size() == big.size());
  CHECK_THROWS_AS(derive_clusters(parse_lexicon("a\tV\n", LexiconKind::kMorph)),
                  InvalidArgument);
}

EmbeddingTable table_of(const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
  EmbeddingTable t(rows[0].second.size());
  for (const auto& [w, v] : rows) t.add(w, v);
  return t;
}

TEST_CASE("retrofit basics") {
  const EmbeddingTable emb = table_of({{"a", {1, 0}}, {"b", {0, 1}}, {"c", {1, 1}}});
  const ClusterSet two = {{TagSet{PosTag::kNoun}, {"a", "b"}},
                          {TagSet{PosTag::kVerb}, {"c"}}};
  CHECK(retrofit(emb, two, nullptr, {.iterations = 0}) == emb);

  const EmbeddingTable r = retrofit(emb, two, nullptr, {.iterations = 50});
  // Two-node fixed point: q_a = (2 q^_a + q^_b) / 3.
  CHECK(std::abs(r.lookup("a")[0] - 2.0 / 3.0) < 1e-8);
  CHECK(std::abs(r.lookup("a")[1] - 1.0 / 3.0) < 1e-8);
  for (const char* w : {"a", "b"}) {
    const char* other = w[0] == 'a' ? "b" : "a";
    for (size_t k = 0; k < 2; ++k) {
      const double residual =
          r.lookup(w)[k] - (emb.lookup(w)[k] + r.lookup(other)[k]) / 2.0;
      CHECK(std::abs(residual) < 1e-8);
    }
  }
  // Singleton cluster and words outside clusters keep their vectors.
  CHECK(r.lookup("c")[0] == 1.0);
  CHECK(r.lookup("c")[1] == 1.0);
  // Members without a vector are ignored.
  const ClusterSet ghost = {{TagSet{PosTag::kNoun}, {"a", "zzz"}}};
  CHECK(retrofit(emb, ghost, nullptr) == emb);
  CHECK_THROWS_AS(retrofit(emb, two, nullptr, {.alpha = 0.0}), InvalidArgument);
}

TEST_CASE("star centre is the most frequent member") {
  const EmbeddingTable emb = table_of({{"a", {1}}, {"b", {2}}, {"c", {3}}});
  const ClusterSet cs = {{TagSet{PosTag::kNoun}, {"a", "b", "c"}}};
  const FrequencyTable f = {{"b", 10}, {"c", 2}};
  const auto g = star_graph(emb, cs, &f);
  CHECK(g[1] == std::vector<size_t>{0, 2});
  CHECK(g[0] == std::vector<size_t>{1});
  CHECK(g[2] == std::vector<size_t>{1});
  const auto g0 = star_graph(emb, cs, nullptr);  // ties: first form
  CHECK(g0[0] == std::vector<size_t>{1, 2});
}

EmbeddingTable offset_embeddings(Rng& rng, const ClusterSet& clusters, size_t dim,
                                 double noise) {
  EmbeddingTable t(dim);
  for (const Cluster& c : clusters) {
    std::vector<double> offset(dim);
    for (double& x : offset) x = standard_normal(rng);
    for (const auto& m : c.members) {
      std::vector<double> v(dim);
      for (size_t k = 0; k < dim; ++k) v[k] = offset[k] + noise * standard_normal(rng);
      t.add(m, v);
    }
  }
  return t;
}

ClusterSet random_clusters(Rng& rng, size_t n) {
  ClusterSet cs;
  size_t next = 0;
  for (size_t c = 0; c < n; ++c) {
    Cluster cl;
    cl.tags = TagSet(uint16_t(c + 1));
    const size_t size = 1 + uniform_index(rng, 8);
    for (size_t i = 0; i < size; ++i) cl.members.push_back("m" + std::to_string(next++));
    std::sort(cl.members.begin(), cl.members.end());
    cs.push_back(cl);
  }
  return cs;
}

TEST_CASE("retrofit objective never increases") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const ClusterSet cs = random_clusters(rng, 10);
    const EmbeddingTable emb = offset_embeddings(rng, cs, 6, 1.5);
    FrequencyTable f;
    for (const auto& w : emb.words()) f[w] = uniform_index(rng, 5);
    const auto graph = star_graph(emb, cs, &f);
    const RetrofitOptions base{.iterations = 0, .alpha = 0.5 + unit_uniform(rng),
                               .beta = 0.5 + unit_uniform(rng)};
    double prev = retrofit_objective(emb, emb, graph, base.alpha, base.beta);
    for (size_t it = 1; it <= 12; ++it) {
      RetrofitOptions o = base;
      o.iterations = it;
      const double obj =
          retrofit_objective(emb, retrofit(emb, cs, &f, o), graph, o.alpha, o.beta);
      CHECK(obj <= prev + 1e-12 * (1.0 + prev));
      prev = obj;
    }
  }
  const EmbeddingTable a = table_of({{"a", {1, 0}}});
  const EmbeddingTable b = table_of({{"a", {1, 0, 0}}});
  CHECK_THROWS_AS(retrofit_objective(a, b, {{}}, 1, 1), InvalidArgument);
}

double mean_pairwise_cosine(const EmbeddingTable& t, const Cluster& c) {
  double sum = 0.0;
  size_t n = 0;
  for (size_t i = 0; i < c.members.size(); ++i) {
    for (size_t j = i + 1; j < c.members.size(); ++j) {
      sum += kernels::cosine_distance(t.lookup(c.members[i]), t.lookup(c.members[j]));
      ++n;
    }
  }
  return n ? sum / double(n) : 0.0;
}

TEST_CASE("retrofit pulls offset-style clusters together") {
  Rng rng(33);
  size_t clusters_checked = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const ClusterSet cs = random_clusters(rng, 12);
    const EmbeddingTable emb = offset_embeddings(rng, cs, 16, 1.0);
    const EmbeddingTable r = retrofit(emb, cs, nullptr);
    for (const Cluster& c : cs) {
      if (c.members.size() < 2) continue;
      CHECK(mean_pairwise_cosine(r, c) <= mean_pairwise_cosine(emb, c) + 1e-12);
      ++clusters_checked;
    }
  }
  CHECK(clusters_checked > 50);
}

TEST_CASE("intra-cluster cosine is not monotone for arbitrary vectors") {
  // Collinear members u and 10u with an orthogonal centre: retrofitting
  // drags the short vector towards the centre far more than the long one.
  const EmbeddingTable emb =
      table_of({{"c", {0, 1}}, {"u", {1, 0}}, {"v", {10, 0}}});
  const ClusterSet cs = {{TagSet{PosTag::kNoun}, {"c", "u", "v"}}};
  const FrequencyTable f = {{"c", 5}};
  const EmbeddingTable r = retrofit(emb, cs, &f);
  CHECK(kernels::cosine_distance(emb.lookup("u"), emb.lookup("v")) == 0.0);
  CHECK(kernels::cosine_distance(r.lookup("u"), r.lookup("v")) > 0.0);
}

}  // namespace
}  // namespace dsds::lexicon_tools
