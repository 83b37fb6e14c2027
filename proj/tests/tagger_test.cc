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
#include <string>
#include <vector>

#include "doctest.h"
#include "dsds/common/random.h"
#include "dsds/common/status.h"
#include "dsds/common/text.h"
#include "dsds/corpus/corpus.h"
#include "dsds/kernels/kernels.h"
#include "dsds/neural/gradient_check.h"
#include "dsds/tagger/tagger.h"

namespace dsds::tagger {
namespace {

using neural::Graph;
using neural::Parameter;
using neural::Var;

Corpus toy_corpus() {
  return parse_corpus(
      "the\tDET\ncat\tNOUN\nsleeps\tVERB\n.\t.\n\n"
      "a\tDET\ndog\tNOUN\nruns\tVERB\n\n"
      "the\tDET\ndog\tNOUN\nsees\tVERB\na\tDET\ncat\tNOUN\n.\t.\n\n");
}

EmbeddingTable toy_embeddings(size_t dim) {
  EmbeddingTable t(dim);
  Rng rng(3);
  for (const char* w : {"the", "a", "cat", "dog", "sleeps", "runs", "bird"}) {
    std::vector<double> v(dim);
    for (double& x : v) x = uniform(rng, -0.5, 0.5);
    t.add(w, v);
  }
  return t;
}

TaggerConfig small_config() {
  TaggerConfig c;
  c.char_dim = 4;
  c.char_hidden = 5;
  c.word_hidden = 6;
  c.lexicon_dim = 3;
  c.word_dim = 7;
  c.epochs = 2;
  return c;
}

TEST_CASE("config validation") {
  TaggerConfig c;
  CHECK_NOTHROW(c.validate());
  c.word_dropout = 1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = TaggerConfig();
  c.char_hidden = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("input dimensions under default sizes") {
  const Corpus c = toy_corpus();
  const TaggerConfig config;  // char hidden 32, l = 40
  const EmbeddingTable emb = toy_embeddings(64);
  const TaggerModel base = TaggerModel::initialize(c, config, &emb, nullptr);
  CHECK(base.char_encoding_dim() == 64);
  CHECK(base.encode_chars("cat").size() == 64);
  CHECK(base.input_dim() == 64 + 64);

  Lexicon::Entries entries;
  for (size_t i = 0; i < kNumTags; ++i) {
    entries["w" + std::to_string(i)] = {std::string(tag_name(tag_from_index(i)))};
  }
  entries["cat"] = {"NOUN"};
  const Lexicon lex(LexiconKind::kPosTagset, entries);
  REQUIRE(lex.inventory().size() == 12);
  const TaggerModel dsds = TaggerModel::initialize(c, config, &emb, &lex);
  CHECK(dsds.lexicon_encoding_dim() == 480);
  CHECK(dsds.input_dim() == 608);

  Graph g;
  const Sentence s = c.sentences()[0];
  CHECK(g.dim(dsds.build_input(g, s, 1, InputMode::kInfer, nullptr)) == 608);
  CHECK(g.dim(base.build_input(g, s, 1, InputMode::kInfer, nullptr)) == 128);
}

TEST_CASE("lexicon embedding slot layout") {
  const Corpus c = toy_corpus();
  TaggerConfig config = small_config();
  config.lexicon_dim = 40;
  Lexicon::Entries entries;
  for (size_t i = 0; i < kNumTags; ++i) {
    entries["all"].insert(std::string(tag_name(tag_from_index(i))));
  }
  entries["cat"] = {"NOUN"};
  const Lexicon lex(LexiconKind::kPosTagset, entries);
  const TaggerModel m = TaggerModel::initialize(c, config, nullptr, &lex);
  const size_t noun_slot = 6;  // sorted inventory: . ADJ ADP ADV CONJ DET NOUN
  REQUIRE(lex.inventory()[noun_slot] == "NOUN");

  const auto absent = m.encode_lexicon("zebra");
  REQUIRE(absent.size() == 480);
  for (double v : absent) CHECK(v == 0.0);

  const auto cat = m.encode_lexicon("cat");
  for (size_t i = 0; i < cat.size(); ++i) {
    if (i / 40 != noun_slot) CHECK(cat[i] == 0.0);
  }
  const auto row = m.parameters().find("lex.table")->value().row(noun_slot);
  for (size_t k = 0; k < 40; ++k) CHECK(cat[noun_slot * 40 + k] == row[k]);

  const auto all = m.encode_lexicon("all");
  for (size_t j = 0; j < 12; ++j) {
    bool nonzero = false;
    for (size_t k = 0; k < 40; ++k) nonzero = nonzero || all[j * 40 + k] != 0.0;
    CHECK(nonzero);
  }
}

TEST_CASE("empty lexicon inventory contributes no dimensions") {
  const Lexicon empty(LexiconKind::kPosTagset);
  const TaggerModel m =
      TaggerModel::initialize(toy_corpus(), small_config(), nullptr, &empty);
  CHECK(m.lexicon_encoding_dim() == 0);
  CHECK(m.input_dim() == 7 + 10);
}

TEST_CASE("character encoding") {
  const TaggerModel m =
      TaggerModel::initialize(toy_corpus(), small_config(), nullptr, nullptr);
  CHECK(m.encode_chars("cat") == m.encode_chars("cat"));
  CHECK(m.encode_chars("c").size() == 10);
  CHECK_THROWS_AS(m.encode_chars(""), InvalidArgument);
  // Unseen characters share the UNK row.
  CHECK(m.encode_chars("\xe2\x82\xac") == m.encode_chars("\xe2\x84\xa2"));
}

TEST_CASE("word dropout") {
  CHECK(word_dropout_probability(0, 0.25) == 1.0);
  CHECK(word_dropout_probability(1, 0.25) == 0.2);
  CHECK(word_dropout_probability(7, 0.0) == 0.0);
  Rng rng(17);
  for (int i = 0; i < 1000; ++i) CHECK_FALSE(word_dropout_decision(1, 0.0, rng));
  size_t drops = 0;
  const size_t n = 100000;
  for (size_t i = 0; i < n; ++i) drops += word_dropout_decision(1, 0.25, rng);
  CHECK(std::abs(double(drops) / n - 0.2) <= 0.01);
  CHECK_THROWS_AS(word_dropout_probability(1, -0.1), InvalidArgument);
}

TEST_CASE("infer mode never drops words") {
  TaggerConfig config = small_config();
  config.word_dropout = 0.9;
  const TaggerModel m = TaggerModel::initialize(toy_corpus(), config, nullptr, nullptr);
  const Sentence s = toy_corpus().sentences()[2];
  const auto first = m.sentence_logits(s);
  for (int i = 0; i < 5; ++i) CHECK(m.sentence_logits(s) == first);
}

TEST_CASE("argmax tie-breaking and constraints") {
  Logits zero{};
  CHECK(argmax_tag(zero) == PosTag::kAdj);
  Logits l{};
  l[tag_index(PosTag::kDet)] = 5.0;
  l[tag_index(PosTag::kNoun)] = 1.0;
  l[tag_index(PosTag::kVerb)] = 2.0;
  CHECK(argmax_tag(l) == PosTag::kDet);
  CHECK(argmax_tag(l, TagSet{PosTag::kNoun, PosTag::kVerb}) == PosTag::kVerb);
  CHECK(argmax_tag(l, TagSet{PosTag::kNoun}) == PosTag::kNoun);
}

// Forward pass recomputed from raw parameter values with plain loops.
struct Oracle {
  const TaggerModel& m;

  const neural::Tensor& p(const char* name) const {
    return m.parameters().find(name)->value();
  }

  static double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

  // Runs one LSTM direction over xs and returns all hidden states.
  std::vector<std::vector<double>> lstm(const std::string& prefix,
                                        const std::vector<std::vector<double>>& xs,
                                        bool reverse) const {
    const auto& w = p((prefix + ".W").c_str());
    const auto& b = p((prefix + ".b").c_str());
    const size_t h4 = w.rows(), hd = h4 / 4, in = w.cols() - hd;
    std::vector<double> h(hd, 0.0), c(hd, 0.0);
    std::vector<std::vector<double>> out(xs.size());
    for (size_t step = 0; step < xs.size(); ++step) {
      const size_t t = reverse ? xs.size() - 1 - step : step;
      std::vector<double> z(h4);
      for (size_t r = 0; r < h4; ++r) {
        double acc = b[r];
        for (size_t k = 0; k < in; ++k) acc += w[r * w.cols() + k] * xs[t][k];
        for (size_t k = 0; k < hd; ++k) acc += w[r * w.cols() + in + k] * h[k];
        z[r] = acc;
      }
      for (size_t k = 0; k < hd; ++k) {
        const double i = sig(z[k]), f = sig(z[hd + k]), o = sig(z[2 * hd + k]);
        const double g = std::tanh(z[3 * hd + k]);
        c[k] = f * c[k] + i * g;
        h[k] = o * std::tanh(c[k]);
      }
      out[t] = h;
    }
    return out;
  }

  std::vector<PosTag> predict(const Sentence& s,
                              const std::vector<std::string>& word_vocab,
                              const std::vector<char32_t>& chars) const {
    const auto& wt = p("word.table");
    const auto& unk = p("word.unk");
    const auto& ct = p("char.table");
    std::vector<std::vector<double>> xs;
    for (const Token& tok : s) {
      std::vector<double> x;
      size_t wi = word_vocab.size();
      for (size_t i = 0; i < word_vocab.size(); ++i) {
        if (word_vocab[i] == tok.form) wi = i;
      }
      const auto wrow = wi < word_vocab.size() ? wt.row(wi) : unk.row(0);
      x.insert(x.end(), wrow.begin(), wrow.end());
      std::vector<std::vector<double>> cs;
      for (char32_t ch : utf8_decode(tok.form)) {
        size_t ci = 0;
        for (size_t i = 0; i < chars.size(); ++i) {
          if (chars[i] == ch) ci = i + 1;
        }
        const auto r = ct.row(ci);
        cs.emplace_back(r.begin(), r.end());
      }
      const auto f = lstm("char.fwd", cs, false);
      const auto b = lstm("char.bwd", cs, true);
      x.insert(x.end(), f.back().begin(), f.back().end());
      x.insert(x.end(), b.front().begin(), b.front().end());
      xs.push_back(x);
    }
    const auto f = lstm("word.fwd", xs, false);
    const auto b = lstm("word.bwd", xs, true);
    const auto& ow = p("out.W");
    const auto& ob = p("out.b");
    std::vector<PosTag> tags;
    for (size_t t = 0; t < s.size(); ++t) {
      std::vector<double> hcat = f[t];
      hcat.insert(hcat.end(), b[t].begin(), b[t].end());
      size_t best = 0;
      double best_v = -INFINITY;
      for (size_t r = 0; r < kNumTags; ++r) {
        double acc = ob[r];
        for (size_t k = 0; k < hcat.size(); ++k) acc += ow[r * ow.cols() + k] * hcat[k];
        if (acc > best_v) {
          best_v = acc;
          best = r;
        }
      }
      tags.push_back(tag_from_index(best));
    }
    return tags;
  }
};

TEST_CASE("predictions match an independent forward pass") {
  const Corpus c = toy_corpus();
  const EmbeddingTable emb = toy_embeddings(6);
  const TrainResult r = train(c, small_config(), &emb, nullptr);
  std::vector<char32_t> chars;
  for (const auto& [form, n] : c.vocabulary()) {
    for (char32_t ch : utf8_decode(form)) chars.push_back(ch);
  }
  std::sort(chars.begin(), chars.end());
  chars.erase(std::unique(chars.begin(), chars.end()), chars.end());
  const Oracle oracle{r.model};
  const Corpus test = parse_corpus("the\t_\nbird\t_\nsleeps\t_\n\nzebra\t_\nruns\t_\n\n");
  for (const Corpus* corpus : {&c, &test}) {
    for (const Sentence& s : corpus->sentences()) {
      const auto got = predict(r.model, s);
      CHECK(got.size() == s.size());
      CHECK(got == oracle.predict(s, r.model.word_vocabulary(), chars));
    }
  }
}

TEST_CASE("predict is invariant to a constant shift of the logits") {
  const TaggerModel m =
      TaggerModel::initialize(toy_corpus(), small_config(), nullptr, nullptr);
  const Sentence s = toy_corpus().sentences()[2];
  const auto before = predict(m, s);
  for (double& b : m.parameters().find("out.b")->value().values()) b += 3.25;
  CHECK(predict(m, s) == before);
}

TEST_CASE("type-constrained decoding") {
  const Corpus c = toy_corpus();
  const Lexicon lex = parse_lexicon("cat\tNOUN\nsees\tNOUN,VERB\n", LexiconKind::kPosTagset);
  const TrainResult r = train(c, small_config(), nullptr, nullptr);
  Rng rng(4);
  for (const Sentence& s : c.sentences()) {
    const auto plain = predict(r.model, s);
    const auto constrained = predict_type_constrained(r.model, s, lex);
    const auto logits = r.model.sentence_logits(s);
    for (size_t i = 0; i < s.size(); ++i) {
      const auto ts = lex.tag_set(s[i].form);
      if (!ts) {
        CHECK(constrained[i] == plain[i]);
        continue;
      }
      CHECK(ts->contains(constrained[i]));
      // Masked-argmax oracle over the allowed tags.
      PosTag best = ts->tags()[0];
      for (PosTag t : ts->tags()) {
        if (logits[i][tag_index(t)] > logits[i][tag_index(best)]) best = t;
      }
      CHECK(constrained[i] == best);
    }
  }
  const Lexicon morph = parse_lexicon("cat\tN;SG\n", LexiconKind::kMorph);
  CHECK_THROWS_AS(predict_type_constrained(r.model, c.sentences()[0], morph),
                  InvalidArgument);
  Decoding d;
  d.type_constraints = &lex;
  const Evaluation e = evaluate(r.model, c, d);
  for (size_t s = 0; s < c.size(); ++s) {
    for (size_t i = 0; i < c.sentences()[s].size(); ++i) {
      if (c.sentences()[s][i].form == "cat") CHECK(e.predictions[s][i] == PosTag::kNoun);
    }
  }
}

TEST_CASE("score and evaluate") {
  const Corpus gold = toy_corpus();
  std::vector<std::vector<PosTag>> perfect, wrong;
  for (const Sentence& s : gold.sentences()) {
    std::vector<PosTag> p, w;
    for (const Token& t : s) {
      p.push_back(*t.gold);
      w.push_back(*t.gold == PosTag::kX ? PosTag::kAdj : PosTag::kX);
    }
    perfect.push_back(p);
    wrong.push_back(w);
  }
  CHECK(score(gold, perfect).accuracy == 1.0);
  CHECK(score(gold, wrong).accuracy == 0.0);
  CHECK(score(gold, wrong).confusion[tag_index(PosTag::kDet)][tag_index(PosTag::kX)] == 4);

  // Accuracy is the length-weighted mean of per-sentence accuracies.
  auto mixed = perfect;
  mixed[0][1] = PosTag::kVerb;
  mixed[2][0] = PosTag::kVerb;
  mixed[2][3] = PosTag::kVerb;
  const Evaluation e = score(gold, mixed);
  double weighted = 0.0;
  size_t total = 0;
  for (size_t s = 0; s < gold.size(); ++s) {
    std::vector<std::vector<PosTag>> one = {mixed[s]};
    const Evaluation es = score(Corpus({gold.sentences()[s]}), one);
    weighted += es.accuracy * double(gold.sentences()[s].size());
    total += gold.sentences()[s].size();
  }
  CHECK(e.accuracy == doctest::Approx(weighted / double(total)));

  const Corpus untagged = parse_corpus("the\t_\n\n");
  CHECK_THROWS_AS(score(untagged, {{PosTag::kDet}}), InvalidArgument);
  const TaggerModel m = TaggerModel::initialize(gold, small_config(), nullptr, nullptr);
  CHECK_THROWS_AS(evaluate(m, untagged), InvalidArgument);
}

TEST_CASE("training contracts") {
  const Corpus c = toy_corpus();
  const EmbeddingTable emb = toy_embeddings(6);
  SUBCASE("frozen embeddings stay bit-identical") {
    const TrainResult r = train(c, small_config(), &emb, nullptr);
    for (size_t i = 0; i < emb.size(); ++i) {
      const auto before = emb.row(i);
      const auto after = r.model.word_vector(emb.words()[i]);
      REQUIRE(after.size() == before.size());
      for (size_t k = 0; k < before.size(); ++k) CHECK(after[k] == before[k]);
      CHECK(kernels::cosine_distance(before, after) == 0.0);
    }
    CHECK(r.epoch_losses.size() == 2);
  }
  SUBCASE("unfrozen embeddings move") {
    TaggerConfig config = small_config();
    config.freeze_embeddings = false;
    const TrainResult r = train(c, config, &emb, nullptr);
    bool moved = false;
    for (size_t i = 0; i < emb.size(); ++i) {
      const auto after = r.model.word_vector(emb.words()[i]);
      for (size_t k = 0; k < after.size(); ++k) moved = moved || after[k] != emb.row(i)[k];
    }
    CHECK(moved);
  }
  SUBCASE("same seed twice gives identical model files") {
    const Lexicon lex = parse_lexicon("cat\tNOUN\n", LexiconKind::kPosTagset);
    const std::string a = train(c, small_config(), &emb, &lex).model.save();
    const std::string b = train(c, small_config(), &emb, &lex).model.save();
    CHECK(a == b);
    TaggerConfig other = small_config();
    other.seed = 2;
    CHECK(train(c, other, &emb, &lex).model.save() != a);
  }
  SUBCASE("no labeled tokens is an error") {
    const Corpus none = parse_corpus("the\t_\ncat\t_\n\n");
    CHECK_THROWS_AS(train(none, small_config(), nullptr, nullptr), InvalidArgument);
  }
  SUBCASE("untagged tokens add no loss") {
    // Epoch losses with extra unlabeled text in the sentence context only
    // depend on labeled positions; a fully unlabeled sentence adds nothing.
    Corpus extra = c;
    extra.add_sentence(parse_corpus("cat\t_\ndog\t_\n\n").sentences()[0]);
    TaggerConfig config = small_config();
    config.epochs = 1;
    config.word_dropout = 0.0;
    const TrainResult r = train(extra, config, nullptr, nullptr);
    CHECK(r.epoch_losses[0] > 0.0);
  }
}

TEST_CASE("training beats the majority baseline on a toy task") {
  // 50 sentences from four templates.
  Rng rng(11);
  const std::vector<std::string> det = {"the", "a", "this"};
  const std::vector<std::string> noun = {"cat", "dog", "bird", "fish", "cow"};
  const std::vector<std::string> verb = {"runs", "sees", "eats", "sleeps"};
  const std::vector<std::string> adj = {"big", "small", "red"};
  std::string text;
  for (int i = 0; i < 50; ++i) {
    auto pick = [&](const std::vector<std::string>& v) { return v[uniform_index(rng, v.size())]; };
    text += pick(det) + "\tDET\n";
    if (bernoulli(rng, 0.5)) text += pick(adj) + "\tADJ\n";
    text += pick(noun) + "\tNOUN\n" + pick(verb) + "\tVERB\n";
    if (bernoulli(rng, 0.5)) text += pick(det) + "\tDET\n" + pick(noun) + "\tNOUN\n";
    text += ".\t.\n\n";
  }
  const Corpus c = parse_corpus(text);
  TaggerConfig config = small_config();
  config.epochs = 10;
  const TrainResult r = train(c, config, nullptr, nullptr);
  std::array<size_t, kNumTags> counts{};
  for (const Sentence& s : c.sentences()) {
    for (const Token& t : s) ++counts[tag_index(*t.gold)];
  }
  const double majority =
      double(*std::max_element(counts.begin(), counts.end())) / double(c.token_count());
  CHECK(evaluate(r.model, c).accuracy > majority);
}

TEST_CASE("model save/load round trip") {
  const Corpus c = toy_corpus();
  const EmbeddingTable emb = toy_embeddings(6);
  const Lexicon lex = parse_lexicon("cat\tNOUN\nsees\tNOUN,VERB\nzzz\tX\n",
                                    LexiconKind::kPosTagset);
  const TrainResult r = train(c, small_config(), &emb, &lex);
  const std::string text = r.model.save();
  const TaggerModel back = TaggerModel::load(text);
  CHECK(back.save() == text);
  CHECK(back.lexicon()->inventory() == lex.inventory());
  CHECK(back.parameters().find("word.table")->frozen());
  for (const Sentence& s : c.sentences()) {
    CHECK(back.sentence_logits(s) == r.model.sentence_logits(s));
  }
  CHECK_THROWS_AS(TaggerModel::load("{\"format\":\"other\"}"), ParseError);
  CHECK_THROWS_AS(TaggerModel::load("not json"), ParseError);
  std::string bumped = text;
  const auto pos = bumped.find("\"version\":1");
  REQUIRE(pos != std::string::npos);
  bumped.replace(pos, 11, "\"version\":9");
  CHECK_THROWS_AS(TaggerModel::load(bumped), ParseError);
}

TEST_CASE("full model gradients match finite differences") {
  const Corpus c = parse_corpus("the\tDET\ncat\tNOUN\n\nruns\tVERB\nfast\tADV\n\n");
  TaggerConfig config;
  config.char_dim = 4;
  config.char_hidden = 32;
  config.word_hidden = 8;
  config.lexicon_dim = 5;
  const EmbeddingTable emb = toy_embeddings(6);
  const Lexicon lex = parse_lexicon("cat\tNOUN\nruns\tNOUN,VERB\n", LexiconKind::kPosTagset);
  config.freeze_embeddings = false;
  const TaggerModel m = TaggerModel::initialize(c, config, &emb, &lex);
  neural::LossBuilder loss = [&](Graph& g) {
    Rng rng(1);
    std::vector<Var> terms;
    for (const Sentence& s : c.sentences()) {
      const auto logits = m.logits(g, s, InputMode::kTrain, &rng);
      for (size_t i = 0; i < s.size(); ++i) {
        terms.push_back(g.softmax_cross_entropy(logits[i], tag_index(*s[i].gold)));
      }
    }
    return g.sum(terms);
  };
  auto params = m.parameters().all();
  neural::GradientCheckOptions opts;
  opts.max_coordinates = 600;
  opts.seed = 5;
  const auto r = neural::gradient_check(params, loss, opts);
  CHECK(r.coordinates_checked == 600);
  CHECK(r.max_relative_error < 1e-4);
}

}  // namespace
}  // namespace dsds::tagger
