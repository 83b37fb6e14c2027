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

#include "dsds/projection/projection.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

#include "dsds/common/random.h"
#include "dsds/common/status.h"
#include "dsds/common/text.h"

namespace dsds::projection {

void MultiParallelSentence::validate() const {
  if (target.empty()) throw InvalidArgument("target sentence is empty");
  for (size_t i = 0; i < sources.size(); ++i) {
    const auto& s = sources[i];
    if (s.tokens.size() != s.distributions.size()) {
      throw InvalidArgument("source " + std::to_string(i) +
                            ": token and distribution counts differ");
    }
    for (const auto& dist : s.distributions) {
      double total = 0.0;
      for (double p : dist) {
        if (!(p >= 0.0)) {
          throw InvalidArgument("negative label probability");
        }
        total += p;
      }
      if (std::abs(total - 1.0) > 1e-6) {
        throw InvalidArgument("label distribution does not sum to 1");
      }
    }
  }
  for (const auto& e : edges) {
    if (e.source >= sources.size() ||
        e.source_position >= sources[e.source].tokens.size() ||
        e.target_position >= target.size()) {
      throw InvalidArgument("alignment edge references an invalid position");
    }
    if (!(e.weight > 0.0 && e.weight <= 1.0)) {
      throw InvalidArgument("alignment weight outside (0, 1]");
    }
  }
}

Ballot collect_ballot(const MultiParallelSentence& sentence) {
  Ballot ballot(sentence.target.size());
  for (auto& row : ballot) row.fill(0.0);
  for (const auto& e : sentence.edges) {
    const auto& dist = sentence.sources[e.source].distributions[e.source_position];
    auto& row = ballot[e.target_position];
    for (size_t l = 0; l < kNumTags; ++l) row[l] += dist[l] * e.weight;
  }
  return ballot;
}

std::vector<std::optional<PosTag>> decode_labels(const Ballot& ballot) {
  std::vector<std::optional<PosTag>> labels;
  labels.reserve(ballot.size());
  for (const auto& row : ballot) {
    size_t best = 0;
    for (size_t l = 1; l < kNumTags; ++l) {
      if (row[l] > row[best]) best = l;
    }
    if (row[best] > 0.0) {
      labels.push_back(tag_from_index(best));
    } else {
      labels.push_back(std::nullopt);
    }
  }
  return labels;
}

double source_coverage(const MultiParallelSentence& sentence, size_t source) {
  if (source >= sentence.num_sources()) {
    throw InvalidArgument("source index out of range");
  }
  std::vector<bool> covered(sentence.target.size(), false);
  for (const auto& e : sentence.edges) {
    if (e.source == source) covered[e.target_position] = true;
  }
  const auto n = std::count(covered.begin(), covered.end(), true);
  return static_cast<double>(n) / static_cast<double>(sentence.target.size());
}

double mean_coverage(const MultiParallelSentence& sentence) {
  const size_t n = sentence.num_sources();
  if (n == 0) throw InvalidArgument("mean coverage needs at least one source");
  // One pass over the edges: per-source covered sets.
  std::vector<std::vector<bool>> covered(
      n, std::vector<bool>(sentence.target.size(), false));
  for (const auto& e : sentence.edges) covered[e.source][e.target_position] = true;
  // A single rounding keeps c_t <= c^_t exact in floating point.
  size_t total = 0;
  for (const auto& c : covered) {
    total += static_cast<size_t>(std::count(c.begin(), c.end(), true));
  }
  return static_cast<double>(total) / static_cast<double>(n * sentence.target.size());
}

double any_source_coverage(const MultiParallelSentence& sentence) {
  std::vector<bool> covered(sentence.target.size(), false);
  for (const auto& e : sentence.edges) covered[e.target_position] = true;
  const auto n = std::count(covered.begin(), covered.end(), true);
  return static_cast<double>(n) / static_cast<double>(sentence.target.size());
}

std::string_view strategy_name(SelectionStrategy strategy) {
  switch (strategy) {
    case SelectionStrategy::kMean:
      return "mean";
    case SelectionStrategy::kAny:
      return "any";
    case SelectionStrategy::kRandom:
      return "random";
  }
  return "?";
}

std::optional<SelectionStrategy> parse_strategy(std::string_view name) {
  if (name == "mean") return SelectionStrategy::kMean;
  if (name == "any") return SelectionStrategy::kAny;
  if (name == "random") return SelectionStrategy::kRandom;
  return std::nullopt;
}

std::vector<size_t> select_top_k(std::span<const MultiParallelSentence> sentences,
                                 size_t k, SelectionStrategy strategy,
                                 uint64_t seed) {
  const size_t n = sentences.size();
  if (strategy == SelectionStrategy::kRandom) {
    Rng rng(seed);
    auto picked = sample_without_replacement(n, k, rng);
    std::sort(picked.begin(), picked.end());
    return picked;
  }
  std::vector<double> coverage(n);
  for (size_t i = 0; i < n; ++i) {
    coverage[i] = strategy == SelectionStrategy::kMean
                      ? mean_coverage(sentences[i])
                      : any_source_coverage(sentences[i]);
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return coverage[a] > coverage[b];
  });
  order.resize(std::min(k, n));
  return order;
}

Corpus project_corpus(std::span<const MultiParallelSentence> sentences, size_t k,
                      SelectionStrategy strategy, uint64_t seed) {
  Corpus corpus;
  for (size_t idx : select_top_k(sentences, k, strategy, seed)) {
    const auto& s = sentences[idx];
    const auto labels = decode_labels(collect_ballot(s));
    Sentence out;
    out.reserve(s.target.size());
    for (size_t i = 0; i < s.target.size(); ++i) {
      out.push_back(Token{s.target[i], labels[i]});
    }
    corpus.add_sentence(std::move(out));
  }
  return corpus;
}

MultiParallelSentence parse_graph_record(std::string_view line) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
  }
  MultiParallelSentence s;
  try {
    s.target = j.at("target").get<std::vector<std::string>>();
    for (const auto& src : j.at("sources")) {
      SourceSentence source;
      source.tokens = src.at("tokens").get<std::vector<std::string>>();
      for (const auto& d : src.at("dists")) {
        auto values = d.get<std::vector<double>>();
        if (values.size() != kNumTags) {
          throw ParseError("label distribution must have 12 entries", 0);
        }
        LabelDistribution dist;
        std::copy(values.begin(), values.end(), dist.begin());
        source.distributions.push_back(dist);
      }
      s.sources.push_back(std::move(source));
    }
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 4) {
        throw ParseError("edge must be [source, source_pos, target_pos, weight]",
                         0);
      }
      s.edges.push_back(AlignmentEdge{e[0].get<size_t>(), e[1].get<size_t>(),
                                      e[2].get<size_t>(), e[3].get<double>()});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed graph record: ") + e.what(), 0);
  }
  try {
    s.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), 0);
  }
  return s;
}

std::string write_graph_record(const MultiParallelSentence& s) {
  nlohmann::ordered_json j;
  j["target"] = s.target;
  auto sources = nlohmann::ordered_json::array();
  for (const auto& src : s.sources) {
    nlohmann::ordered_json o;
    o["tokens"] = src.tokens;
    auto dists = nlohmann::ordered_json::array();
    for (const auto& d : src.distributions) {
      dists.push_back(std::vector<double>(d.begin(), d.end()));
    }
    o["dists"] = std::move(dists);
    sources.push_back(std::move(o));
  }
  j["sources"] = std::move(sources);
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : s.edges) {
    edges.push_back(nlohmann::ordered_json::array(
        {e.source, e.source_position, e.target_position, e.weight}));
  }
  j["edges"] = std::move(edges);
  return j.dump();
}

std::vector<MultiParallelSentence> parse_graph_file(std::string_view text) {
  std::vector<MultiParallelSentence> out;
  size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    try {
      out.push_back(parse_graph_record(line));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return out;
}

std::string write_graph_file(std::span<const MultiParallelSentence> sentences) {
  std::string out;
  for (const auto& s : sentences) {
    out.append(write_graph_record(s));
    out.push_back('\n');
  }
  return out;
}

}  // namespace dsds::projection
