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

#include <algorithm>
#include <numeric>
#include <set>

#include "doctest.h"
#include "dsds/common/status.h"
#include "dsds/projection/projection.h"
#include "support/random_graph.h"

namespace dsds::projection {
namespace {

LabelDistribution one_hot(PosTag t) {
  LabelDistribution d{};
  d[tag_index(t)] = 1.0;
  return d;
}

SourceSentence source_of(std::vector<LabelDistribution> dists) {
  SourceSentence s;
  for (size_t i = 0; i < dists.size(); ++i) s.tokens.push_back("w");
  s.distributions = std::move(dists);
  return s;
}

// Target of `n` words plus `sources` one-word sources; edges given by hand.
MultiParallelSentence graph(size_t n, size_t sources,
                            std::vector<AlignmentEdge> edges) {
  MultiParallelSentence g;
  g.target.assign(n, "x");
  for (size_t i = 0; i < sources; ++i) {
    g.sources.push_back(source_of({one_hot(PosTag::kNoun), one_hot(PosTag::kVerb)}));
  }
  g.edges = std::move(edges);
  return g;
}

TEST_CASE("collect_ballot: single voter") {
  MultiParallelSentence g;
  g.target = {"a"};
  g.sources = {source_of({one_hot(PosTag::kNoun)})};
  g.edges = {{0, 0, 0, 0.7}};
  const Ballot b = collect_ballot(g);
  REQUIRE(b.size() == 1);
  for (size_t l = 0; l < kNumTags; ++l) {
    CHECK(b[0][l] == (l == tag_index(PosTag::kNoun) ? 0.7 : 0.0));
  }
  CHECK(decode_labels(b)[0] == PosTag::kNoun);
}

TEST_CASE("collect_ballot: two sources tie, lowest index wins") {
  LabelDistribution mixed{};
  mixed[tag_index(PosTag::kNoun)] = 0.9;
  mixed[tag_index(PosTag::kVerb)] = 0.1;
  MultiParallelSentence g;
  g.target = {"a", "b"};
  g.sources = {source_of({mixed}), source_of({one_hot(PosTag::kVerb)})};
  g.edges = {{0, 0, 0, 0.5}, {1, 0, 0, 0.4}};
  const Ballot b = collect_ballot(g);
  CHECK(b[0][tag_index(PosTag::kNoun)] == doctest::Approx(0.45));
  CHECK(b[0][tag_index(PosTag::kVerb)] == doctest::Approx(0.45));
  const auto labels = decode_labels(b);
  CHECK(labels[0] == PosTag::kNoun);
  for (double v : b[1]) CHECK(v == 0.0);
  CHECK_FALSE(labels[1].has_value());
}

TEST_CASE("decode_labels exact ties") {
  Ballot b(1);
  b[0][tag_index(PosTag::kNoun)] = 0.45;
  b[0][tag_index(PosTag::kVerb)] = 0.45;
  CHECK(decode_labels(b)[0] == PosTag::kNoun);
}

TEST_CASE("source_coverage") {
  auto g = graph(4, 1, {{0, 0, 0, 1.0}, {0, 1, 2, 1.0}});
  CHECK(source_coverage(g, 0) == 0.5);
  g = graph(4, 1, {{0, 0, 0, 1.0}, {0, 1, 0, 0.3}});
  CHECK(source_coverage(g, 0) == 0.25);
  g = graph(4, 2, {{0, 0, 0, 1.0}});
  CHECK(source_coverage(g, 1) == 0.0);
  CHECK_THROWS_AS(source_coverage(g, 2), InvalidArgument);
}

TEST_CASE("mean_coverage") {
  auto g = graph(2, 2, {{0, 0, 0, 1.0}, {1, 0, 0, 1.0}, {1, 1, 1, 1.0}});
  CHECK(mean_coverage(g) == 0.75);
  g = graph(4, 1, {{0, 0, 1, 1.0}});
  CHECK(mean_coverage(g) == source_coverage(g, 0));
  g = graph(4, 3, {});
  CHECK(mean_coverage(g) == 0.0);
  g = graph(4, 0, {});
  CHECK_THROWS_AS(mean_coverage(g), InvalidArgument);
}

TEST_CASE("any_source_coverage contrasts with the mean") {
  auto g = graph(4, 2, {{0, 0, 0, 1.0}, {1, 0, 1, 1.0}});
  CHECK(any_source_coverage(g) == 0.5);
  CHECK(mean_coverage(g) == 0.25);
  CHECK(any_source_coverage(graph(4, 2, {})) == 0.0);
}

TEST_CASE("validate rejects malformed graphs") {
  auto g = graph(2, 1, {{0, 0, 2, 1.0}});
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  g = graph(2, 1, {{0, 5, 0, 1.0}});
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  g = graph(2, 1, {{1, 0, 0, 1.0}});
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  g = graph(2, 1, {{0, 0, 0, 0.0}});
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  g = graph(2, 1, {{0, 0, 0, 1.5}});
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  g = graph(2, 1, {});
  g.sources[0].distributions[0][0] = 0.5;
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  CHECK_NOTHROW(graph(2, 1, {{0, 1, 1, 1.0}}).validate());
}

// Sentences with a prescribed mean coverage: n target words, first m aligned.
MultiParallelSentence with_coverage(size_t n, size_t m) {
  std::vector<AlignmentEdge> edges;
  for (size_t i = 0; i < m; ++i) edges.push_back({0, 0, i, 1.0});
  return graph(n, 1, edges);
}

TEST_CASE("select_top_k") {
  const std::vector<MultiParallelSentence> s = {
      with_coverage(10, 2), with_coverage(10, 9), with_coverage(10, 9)};
  CHECK(select_top_k(s, 2, SelectionStrategy::kMean) ==
        std::vector<size_t>{1, 2});
  CHECK(select_top_k(s, 0, SelectionStrategy::kMean).empty());
  CHECK(select_top_k(s, 7, SelectionStrategy::kAny).size() == 3);
  const auto r1 = select_top_k(s, 2, SelectionStrategy::kRandom, 42);
  const auto r2 = select_top_k(s, 2, SelectionStrategy::kRandom, 42);
  CHECK(r1 == r2);
  CHECK(r1.size() == 2);
  CHECK(std::is_sorted(r1.begin(), r1.end()));
}

TEST_CASE("random selection is uniform over subsets") {
  std::vector<MultiParallelSentence> s;
  for (int i = 0; i < 5; ++i) s.push_back(with_coverage(4, 1));
  std::vector<int> hits(5, 0);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    for (size_t i : select_top_k(s, 2, SelectionStrategy::kRandom, t)) ++hits[i];
  }
  // Each index is chosen with probability 2/5.
  for (int h : hits) CHECK(std::abs(h / double(trials) - 0.4) < 0.02);
}

TEST_CASE("strategy names") {
  for (auto s : {SelectionStrategy::kMean, SelectionStrategy::kAny,
                 SelectionStrategy::kRandom}) {
    CHECK(parse_strategy(strategy_name(s)) == s);
  }
  CHECK_FALSE(parse_strategy("best").has_value());
}

// Straightforward oracle: loops over target positions, scanning every edge.
struct Oracle {
  std::vector<std::optional<PosTag>> labels;
  std::vector<double> per_source;
  double mean = 0.0;
  double any = 0.0;
};

Oracle brute_force(const MultiParallelSentence& g) {
  Oracle o;
  const size_t nt = g.target.size();
  for (size_t t = 0; t < nt; ++t) {
    double best = 0.0;
    std::optional<PosTag> best_tag;
    for (size_t l = 0; l < kNumTags; ++l) {
      double v = 0.0;
      for (const auto& e : g.edges) {
        if (e.target_position != t) continue;
        v += g.sources[e.source].distributions[e.source_position][l] * e.weight;
      }
      if (v > best) {
        best = v;
        best_tag = tag_from_index(l);
      }
    }
    o.labels.push_back(best_tag);
  }
  size_t any = 0;
  for (size_t t = 0; t < nt; ++t) {
    bool hit = false;
    for (const auto& e : g.edges) hit = hit || e.target_position == t;
    any += hit;
  }
  o.any = double(any) / double(nt);
  size_t sum = 0;
  for (size_t s = 0; s < g.sources.size(); ++s) {
    size_t covered = 0;
    for (size_t t = 0; t < nt; ++t) {
      bool hit = false;
      for (const auto& e : g.edges) {
        hit = hit || (e.source == s && e.target_position == t);
      }
      covered += hit;
    }
    o.per_source.push_back(double(covered) / double(nt));
    sum += covered;
  }
  o.mean = double(sum) / double(g.sources.size() * nt);
  return o;
}

TEST_CASE("projection matches the brute-force oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const auto g = testing::random_graph(rng, 3, 8);
    g.validate();
    const Oracle o = brute_force(g);
    CHECK(decode_labels(collect_ballot(g)) == o.labels);
    for (size_t s = 0; s < g.num_sources(); ++s) {
      CHECK(source_coverage(g, s) == o.per_source[s]);
    }
    CHECK(mean_coverage(g) == o.mean);
    CHECK(any_source_coverage(g) == o.any);
  }
}

TEST_CASE("coverage bounds and mean <= any") {
  Rng rng(77);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto g = testing::random_graph(rng, 4, 8);
    const double m = mean_coverage(g);
    const double a = any_source_coverage(g);
    for (size_t s = 0; s < g.num_sources(); ++s) {
      const double c = source_coverage(g, s);
      REQUIRE(c >= 0.0);
      REQUIRE(c <= 1.0);
    }
    REQUIRE(m >= 0.0);
    REQUIRE(a <= 1.0);
    REQUIRE(m <= a);
  }
}

TEST_CASE("ballot properties: zero rows, weight scaling, source order") {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    auto g = testing::random_graph(rng, 3, 6);
    const Ballot b = collect_ballot(g);
    std::set<size_t> aligned;
    for (const auto& e : g.edges) aligned.insert(e.target_position);
    for (size_t t = 0; t < b.size(); ++t) {
      const bool zero = std::all_of(b[t].begin(), b[t].end(),
                                    [](double v) { return v == 0.0; });
      for (double v : b[t]) CHECK(v >= 0.0);
      // An aligned word may still carry a zero ballot only if the source
      // distribution had zero mass, which sums to 1 rules out.
      CHECK(zero == (aligned.count(t) == 0));
    }

    // Scaling by a power of two keeps every product exact.
    auto scaled = g;
    for (auto& e : scaled.edges) e.weight *= 0.25;
    CHECK(decode_labels(collect_ballot(scaled)) == decode_labels(b));

    auto reversed = g;
    const size_t n = g.num_sources();
    std::reverse(reversed.sources.begin(), reversed.sources.end());
    for (auto& e : reversed.edges) e.source = n - 1 - e.source;
    const Ballot rb = collect_ballot(reversed);
    for (size_t t = 0; t < b.size(); ++t) {
      for (size_t l = 0; l < kNumTags; ++l) {
        CHECK(rb[t][l] == doctest::Approx(b[t][l]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("top-k by mean coverage is non-increasing") {
  Rng rng(8);
  std::vector<MultiParallelSentence> s;
  for (int i = 0; i < 60; ++i) s.push_back(testing::random_graph(rng, 3, 8));
  const auto idx = select_top_k(s, 40, SelectionStrategy::kMean);
  REQUIRE(idx.size() == 40);
  for (size_t i = 1; i < idx.size(); ++i) {
    CHECK(mean_coverage(s[idx[i - 1]]) >= mean_coverage(s[idx[i]]));
  }
  const auto any = select_top_k(s, 60, SelectionStrategy::kAny);
  for (size_t i = 1; i < any.size(); ++i) {
    CHECK(any_source_coverage(s[any[i - 1]]) >= any_source_coverage(s[any[i]]));
  }
}

TEST_CASE("project_corpus") {
  MultiParallelSentence agree;
  agree.target = {"il", "gatto", "dorme"};
  agree.sources = {source_of({one_hot(PosTag::kDet), one_hot(PosTag::kNoun),
                              one_hot(PosTag::kVerb)}),
                   source_of({one_hot(PosTag::kDet), one_hot(PosTag::kNoun),
                              one_hot(PosTag::kVerb)})};
  for (size_t s = 0; s < 2; ++s) {
    for (size_t i = 0; i < 3; ++i) agree.edges.push_back({s, i, i, 0.8});
  }
  const Corpus c = project_corpus(std::vector{agree}, 1, SelectionStrategy::kMean);
  REQUIRE(c.size() == 1);
  CHECK(c.sentences()[0][0].gold == PosTag::kDet);
  CHECK(c.sentences()[0][1].gold == PosTag::kNoun);
  CHECK(c.sentences()[0][2].gold == PosTag::kVerb);

  auto partial = agree;
  partial.edges.erase(std::remove_if(partial.edges.begin(), partial.edges.end(),
                                     [](const AlignmentEdge& e) {
                                       return e.target_position == 1;
                                     }),
                      partial.edges.end());
  const Corpus p = project_corpus(std::vector{partial}, 1, SelectionStrategy::kAny);
  CHECK_FALSE(p.sentences()[0][1].gold.has_value());
  CHECK(write_corpus(p).find("gatto\t_\n") != std::string::npos);
}

TEST_CASE("project_corpus equals brute-force composition") {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<MultiParallelSentence> s;
    const size_t n = 1 + uniform_index(rng, 5);
    for (size_t i = 0; i < n; ++i) s.push_back(testing::random_graph(rng, 3, 6));
    const size_t k = uniform_index(rng, 6);
    const Corpus c = project_corpus(s, k, SelectionStrategy::kMean);

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> cov(n);
    for (size_t i = 0; i < n; ++i) cov[i] = brute_force(s[i]).mean;
    // Insertion sort, strictly-greater moves only: stable by construction.
    for (size_t i = 1; i < n; ++i) {
      for (size_t j = i; j > 0 && cov[order[j]] > cov[order[j - 1]]; --j) {
        std::swap(order[j], order[j - 1]);
      }
    }
    order.resize(std::min(k, n));
    REQUIRE(c.size() == order.size());
    for (size_t i = 0; i < order.size(); ++i) {
      const auto& g = s[order[i]];
      const auto labels = brute_force(g).labels;
      const auto& sent = c.sentences()[i];
      REQUIRE(sent.size() == g.target.size());
      for (size_t t = 0; t < sent.size(); ++t) {
        CHECK(sent[t].form == g.target[t]);
        CHECK(sent[t].gold == labels[t]);
      }
    }
  }
}

TEST_CASE("graph records round trip") {
  Rng rng(12);
  std::vector<MultiParallelSentence> s;
  for (int i = 0; i < 20; ++i) s.push_back(testing::random_graph(rng, 3, 5));
  const std::string text = write_graph_file(s);
  const auto back = parse_graph_file(text);
  REQUIRE(back.size() == s.size());
  CHECK(write_graph_file(back) == text);
  for (size_t i = 0; i < s.size(); ++i) {
    CHECK(decode_labels(collect_ballot(back[i])) ==
          decode_labels(collect_ballot(s[i])));
    CHECK(mean_coverage(back[i]) == mean_coverage(s[i]));
  }
  CHECK_THROWS_AS(parse_graph_record("{\"target\":[\"a\"]"), ParseError);
  CHECK_THROWS_AS(parse_graph_record(
                      "{\"target\":[\"a\"],\"sources\":[],\"edges\":[[0,0,0,1]]}"),
                  ParseError);
  try {
    parse_graph_file(write_graph_record(s[0]) + "\n{}\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

}  // namespace
}  // namespace dsds::projection
