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

#include "dsds/pipeline/synth.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "dsds/common/status.h"
#include "dsds/common/text.h"

namespace dsds::pipeline {
namespace {

using T = PosTag;

constexpr std::array<size_t, kNumTags> kDefaultVocab = {
    250,  // ADJ
    12,   // ADP
    80,   // ADV
    4,    // CONJ
    8,    // DET
    600,  // NOUN
    20,   // NUM
    10,   // PRON
    6,    // PRT
    400,  // VERB
    20,   // X
    6,    // .
};

const std::array<std::vector<std::string>, kNumTags>& suffixes() {
  static const std::array<std::vector<std::string>, kNumTags> s = {{
      {"oso", "ivo", "ale"},     // ADJ
      {},                        // ADP
      {"mente"},                 // ADV
      {},                        // CONJ
      {},                        // DET
      {"ione", "ura", "ment"},   // NOUN
      {},                        // NUM
      {},                        // PRON
      {},                        // PRT
      {"are", "ava", "ono"},     // VERB
      {"zz"},                    // X
      {},                        // .
  }};
  return s;
}

bool is_open(PosTag tag) {
  switch (tag) {
    case T::kAdj: case T::kAdv: case T::kNoun: case T::kVerb: case T::kX:
      return true;
    default:
      return false;
  }
}

std::string make_stem(Rng& rng, size_t min_syllables, size_t max_syllables) {
  static constexpr std::string_view kOnsets = "bcdfglmnprstvz";
  static constexpr std::string_view kVowels = "aeiou";
  static constexpr std::string_view kCodas = "lnrs";
  const size_t n = min_syllables + uniform_index(rng, max_syllables - min_syllables + 1);
  std::string out;
  for (size_t i = 0; i < n; ++i) {
    out += kOnsets[uniform_index(rng, kOnsets.size())];
    out += kVowels[uniform_index(rng, kVowels.size())];
    if (bernoulli(rng, 0.25)) out += kCodas[uniform_index(rng, kCodas.size())];
  }
  return out;
}

std::string make_form(PosTag tag, const SyntheticTaskSpec& spec, Rng& rng) {
  if (tag == T::kNum) {
    std::string out(1, static_cast<char>('1' + uniform_index(rng, 9)));
    const size_t extra = uniform_index(rng, 4);
    for (size_t i = 0; i < extra; ++i) out += static_cast<char>('0' + uniform_index(rng, 10));
    return out;
  }
  if (!is_open(tag)) return make_stem(rng, 1, 2);
  std::string out = make_stem(rng, 1, 3);
  const auto& suf = suffixes()[tag_index(tag)];
  if (!suf.empty() && bernoulli(rng, spec.suffix_signal)) {
    out += suf[uniform_index(rng, suf.size())];
  }
  return out;
}

void check_rate(double v, std::string_view name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidArgument(std::string(name) + " must lie in [0, 1]");
  }
}

projection::LabelDistribution one_hot(PosTag tag) {
  projection::LabelDistribution d{};
  d[tag_index(tag)] = 1.0;
  return d;
}

}  // namespace

void SyntheticTaskSpec::validate() const {
  check_rate(ambiguity, "synth_ambiguity");
  check_rate(suffix_signal, "synth_suffix_signal");
  check_rate(projection_noise, "synth_noise");
  check_rate(min_alignment, "synth_min_alignment");
  check_rate(max_alignment, "synth_max_alignment");
  check_rate(lexicon_coverage, "synth_lexicon_coverage");
  check_rate(disjoint_noise, "synth_disjoint_noise");
  check_rate(embedding_coverage, "synth_embedding_coverage");
  if (min_alignment > max_alignment) {
    throw InvalidArgument("synth_min_alignment exceeds synth_max_alignment");
  }
  if (!(zipf_exponent > 0.0) || !std::isfinite(zipf_exponent)) {
    throw InvalidArgument("synth_zipf must be positive");
  }
  if (!(embedding_signal >= 0.0)) throw InvalidArgument("synth_embedding_signal must be >= 0");
  if (sources == 0) throw InvalidArgument("synth_sources must be positive");
  if (embedding_dim == 0) throw InvalidArgument("synth_embedding_dim must be positive");
  const auto& tpl = templates.empty() ? default_templates() : templates;
  for (const auto& t : tpl) {
    if (t.empty()) throw InvalidArgument("empty sentence template");
    for (PosTag tag : t) {
      if (vocab_sizes[tag_index(tag)] == 0) {
        throw InvalidArgument("template uses " + std::string(tag_name(tag)) +
                              " but its vocabulary is empty");
      }
    }
  }
}

std::array<size_t, kNumTags> parse_vocab_sizes(std::string_view text,
                                               std::array<size_t, kNumTags> base) {
  for (std::string_view item : split(text, ',')) {
    if (item.empty()) continue;
    const size_t eq = item.find('=');
    unsigned long long n = 0;
    std::optional<PosTag> tag;
    if (eq != std::string_view::npos) tag = parse_tag(item.substr(0, eq));
    if (!tag || !parse_uint(item.substr(eq + 1), n)) {
      throw InvalidArgument("bad vocabulary size '" + std::string(item) + "'");
    }
    base[tag_index(*tag)] = n;
  }
  return base;
}

std::vector<std::vector<PosTag>> parse_templates(std::string_view text) {
  std::vector<std::vector<PosTag>> out;
  for (std::string_view item : split(text, '|')) {
    std::vector<PosTag> tpl;
    for (std::string_view name : split(item, ' ')) {
      if (name.empty()) continue;
      auto tag = parse_tag(name);
      if (!tag) throw InvalidArgument("bad template tag '" + std::string(name) + "'");
      tpl.push_back(*tag);
    }
    if (tpl.empty()) throw InvalidArgument("empty sentence template");
    out.push_back(std::move(tpl));
  }
  return out;
}

const std::vector<std::vector<PosTag>>& default_templates() {
  static const std::vector<std::vector<PosTag>> t = parse_templates(
      "DET NOUN VERB DET NOUN .|"
      "DET ADJ NOUN VERB ADP DET NOUN .|"
      "PRON VERB ADV .|"
      "PRON VERB DET ADJ NOUN CONJ DET NOUN .|"
      "NUM NOUN VERB ADP NOUN .|"
      "DET NOUN PRT VERB ADJ .|"
      "NOUN VERB NOUN . CONJ PRON VERB ADV .|"
      "ADV PRON VERB DET NOUN ADP NUM NOUN .|"
      "DET NOUN ADP DET ADJ NOUN VERB X .|"
      "PRON VERB ADJ CONJ ADJ .|"
      "DET ADJ ADJ NOUN VERB PRON .|"
      "NOUN VERB .|"
      "X X VERB NOUN .|"
      "ADP DET NOUN . PRON PRT VERB ADV ADJ .");
  return t;
}

SyntheticTaskSpec synth_spec(const RunConfig& c) {
  SyntheticTaskSpec s;
  s.vocab_sizes = parse_vocab_sizes(c.get("synth_vocab"), kDefaultVocab);
  if (!c.get("synth_templates").empty()) s.templates = parse_templates(c.get("synth_templates"));
  s.zipf_exponent = c.get_double("synth_zipf");
  s.ambiguity = c.get_double("synth_ambiguity");
  s.suffix_signal = c.get_double("synth_suffix_signal");
  s.projection_noise = c.get_double("synth_noise");
  s.min_alignment = c.get_double("synth_min_alignment");
  s.max_alignment = c.get_double("synth_max_alignment");
  s.lexicon_coverage = c.get_double("synth_lexicon_coverage");
  s.disjoint_noise = c.get_double("synth_disjoint_noise");
  s.train_sentences = c.get_uint("synth_train_sentences");
  s.test_sentences = c.get_uint("synth_test_sentences");
  s.gold_sentences = c.get_uint("synth_gold_sentences");
  s.sources = c.get_uint("synth_sources");
  s.embedding_dim = c.get_uint("synth_embedding_dim");
  s.embedding_coverage = c.get_double("synth_embedding_coverage");
  s.embedding_signal = c.get_double("synth_embedding_signal");
  s.seed = derive_seed(c.get_uint("seed"), "synth");
  s.validate();
  return s;
}

std::vector<double> zipf_cumulative(size_t n, double exponent) {
  std::vector<double> c(n);
  double total = 0.0;
  for (size_t r = 0; r < n; ++r) {
    total += std::pow(static_cast<double>(r + 1), -exponent);
    c[r] = total;
  }
  for (double& v : c) v /= total;
  if (n > 0) c.back() = 1.0;
  return c;
}

size_t draw_cumulative(const std::vector<double>& cumulative, Rng& rng) {
  const double u = unit_uniform(rng);
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<size_t>(static_cast<size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

const std::string& SyntheticLanguage::draw(PosTag tag, Rng& rng) const {
  const size_t i = tag_index(tag);
  return words[i][draw_cumulative(cumulative[i], rng)];
}

Sentence SyntheticLanguage::sentence(Rng& rng) const {
  const auto& tpl = templates[uniform_index(rng, templates.size())];
  Sentence s;
  s.reserve(tpl.size());
  for (PosTag tag : tpl) s.push_back(Token{draw(tag, rng), tag});
  return s;
}

SyntheticLanguage build_language(const SyntheticTaskSpec& spec, Rng& rng) {
  spec.validate();
  SyntheticLanguage lang;
  lang.templates = spec.templates.empty() ? default_templates() : spec.templates;
  std::set<std::string> used;
  static const std::vector<std::string> kPunct = {".", ",", ";", ":", "!", "?", "-", "..."};
  for (PosTag tag : kAllTags) {
    auto& list = lang.words[tag_index(tag)];
    const size_t n = spec.vocab_sizes[tag_index(tag)];
    if (tag == T::kPunct) {
      if (n > kPunct.size()) throw InvalidArgument("at most 8 punctuation types");
      list.assign(kPunct.begin(), kPunct.begin() + static_cast<std::ptrdiff_t>(n));
      used.insert(list.begin(), list.end());
      continue;
    }
    size_t attempts = 0;
    while (list.size() < n) {
      std::string form = make_form(tag, spec, rng);
      if (used.insert(form).second) {
        list.push_back(std::move(form));
      } else if (++attempts > 100 * n + 1000) {
        throw InvalidArgument("cannot generate " + std::to_string(n) + " distinct " +
                              std::string(tag_name(tag)) + " forms");
      }
    }
  }
  // Noun/verb homographs: copy nouns over verb slots.
  auto& nouns = lang.words[tag_index(T::kNoun)];
  auto& verbs = lang.words[tag_index(T::kVerb)];
  const size_t shared = std::min(
      verbs.size(), static_cast<size_t>(std::llround(spec.ambiguity * nouns.size())));
  const auto from = sample_without_replacement(nouns.size(), shared, rng);
  const auto to = sample_without_replacement(verbs.size(), shared, rng);
  for (size_t i = 0; i < shared; ++i) verbs[to[i]] = nouns[from[i]];
  for (PosTag tag : kAllTags) {
    auto& list = lang.words[tag_index(tag)];
    shuffle(list, rng);
    lang.cumulative[tag_index(tag)] = zipf_cumulative(list.size(), spec.zipf_exponent);
  }
  return lang;
}

SyntheticTask generate_task(const SyntheticTaskSpec& spec) {
  spec.validate();
  SyntheticTask task;
  Rng lang_rng(derive_seed(spec.seed, "language"));
  task.language = build_language(spec, lang_rng);
  const auto& lang = task.language;

  Rng train_rng(derive_seed(spec.seed, "train"));
  Rng graph_rng(derive_seed(spec.seed, "graphs"));
  for (size_t s = 0; s < spec.train_sentences; ++s) {
    Sentence sentence = lang.sentence(train_rng);
    projection::MultiParallelSentence g;
    const size_t n = sentence.size();
    for (const auto& tok : sentence) g.target.push_back(tok.form);
    const double rate = uniform(graph_rng, spec.min_alignment, spec.max_alignment);
    const double misalign = (1.0 - rate) * 0.5;
    for (size_t i = 0; i < spec.sources; ++i) {
      projection::SourceSentence src;
      for (size_t p = 0; p < n; ++p) {
        src.tokens.push_back("s" + std::to_string(i) + ":" + sentence[p].form);
        PosTag tag = *sentence[p].gold;
        if (bernoulli(graph_rng, spec.projection_noise)) {
          tag = tag_from_index((tag_index(tag) + 1 + uniform_index(graph_rng, kNumTags - 1)) %
                               kNumTags);
        }
        src.distributions.push_back(one_hot(tag));
      }
      for (size_t p = 0; p < n; ++p) {
        if (!bernoulli(graph_rng, rate)) continue;
        size_t target = p;
        if (n > 1 && bernoulli(graph_rng, misalign)) {
          target = (p + 1 + uniform_index(graph_rng, n - 1)) % n;
        }
        const double weight = 1.0 - 0.5 * unit_uniform(graph_rng);
        g.edges.push_back({i, p, target, weight});
      }
      g.sources.push_back(std::move(src));
    }
    g.validate();
    task.graphs.push_back(std::move(g));
    task.train_gold.add_sentence(std::move(sentence));
  }

  Rng test_rng(derive_seed(spec.seed, "test"));
  for (size_t s = 0; s < spec.test_sentences; ++s) task.test.add_sentence(lang.sentence(test_rng));
  Rng gold_rng(derive_seed(spec.seed, "gold"));
  for (size_t s = 0; s < spec.gold_sentences; ++s) task.gold.add_sentence(lang.sentence(gold_rng));
  task.frequencies = build_frequency_table(task.gold);

  std::map<std::string, TagSet> true_sets;
  for (PosTag tag : kAllTags) {
    for (const auto& w : lang.words[tag_index(tag)]) true_sets[w].insert(tag);
  }
  std::vector<std::string> types;
  Lexicon::Entries gold_entries;
  for (const auto& [form, set] : true_sets) {
    types.push_back(form);
    std::set<std::string> props;
    for (PosTag t : set.tags()) props.emplace(tag_name(t));
    gold_entries.emplace(form, std::move(props));
  }
  task.gold_lexicon = Lexicon(LexiconKind::kPosTagset, gold_entries);

  Rng lex_rng(derive_seed(spec.seed, "lexicon"));
  const size_t covered = static_cast<size_t>(std::llround(spec.lexicon_coverage * types.size()));
  auto chosen = sample_without_replacement(types.size(), covered, lex_rng);
  const size_t noisy = static_cast<size_t>(std::llround(spec.disjoint_noise * covered));
  Lexicon::Entries entries;
  for (size_t i = 0; i < chosen.size(); ++i) {
    const std::string& form = types[chosen[i]];
    if (i < noisy) {
      const TagSet truth = true_sets[form];
      std::vector<PosTag> others;
      for (PosTag t : kAllTags) {
        if (!truth.contains(t)) others.push_back(t);
      }
      entries[form] = {std::string(tag_name(others[uniform_index(lex_rng, others.size())]))};
    } else {
      entries[form] = gold_entries[form];
    }
  }
  task.lexicon = Lexicon(LexiconKind::kPosTagset, std::move(entries));

  Rng emb_rng(derive_seed(spec.seed, "embeddings"));
  const size_t d = spec.embedding_dim;
  std::array<std::vector<double>, kNumTags> offsets;
  for (auto& o : offsets) {
    o.resize(d);
    for (double& v : o) v = spec.embedding_signal * standard_normal(emb_rng);
  }
  task.embeddings = EmbeddingTable(d);
  std::vector<double> vec(d);
  for (const auto& form : types) {
    const bool present = bernoulli(emb_rng, spec.embedding_coverage);
    for (double& v : vec) v = standard_normal(emb_rng);
    if (!present) continue;
    const auto tags = true_sets[form].tags();
    for (PosTag t : tags) {
      for (size_t k = 0; k < d; ++k) vec[k] += offsets[tag_index(t)][k] / tags.size();
    }
    task.embeddings.add(form, vec);
  }
  return task;
}

}  // namespace dsds::pipeline
