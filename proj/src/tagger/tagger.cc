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

#include "dsds/tagger/tagger.h"

#include <algorithm>
#include <set>

#include "json.hpp"

#include "dsds/common/status.h"
#include "dsds/common/text.h"

namespace dsds::tagger {

using neural::Graph;
using neural::InitScheme;
using neural::Parameter;
using neural::Tensor;
using neural::Var;
using json = nlohmann::ordered_json;

namespace {

constexpr int kFormatVersion = 1;
constexpr const char* kFormatName = "dsds-tagger";

json config_to_json(const TaggerConfig& c) {
  json j;
  j["epochs"] = c.epochs;
  j["word_dropout"] = c.word_dropout;
  j["char_dim"] = c.char_dim;
  j["char_hidden"] = c.char_hidden;
  j["word_hidden"] = c.word_hidden;
  j["lexicon_dim"] = c.lexicon_dim;
  j["word_dim"] = c.word_dim;
  j["freeze_embeddings"] = c.freeze_embeddings;
  j["seed"] = c.seed;
  j["learning_rate"] = c.optimizer.learning_rate;
  j["clip_norm"] = c.optimizer.clip_norm;
  j["momentum"] = c.optimizer.momentum;
  return j;
}

TaggerConfig config_from_json(const json& j) {
  TaggerConfig c;
  c.epochs = j.at("epochs").get<size_t>();
  c.word_dropout = j.at("word_dropout").get<double>();
  c.char_dim = j.at("char_dim").get<size_t>();
  c.char_hidden = j.at("char_hidden").get<size_t>();
  c.word_hidden = j.at("word_hidden").get<size_t>();
  c.lexicon_dim = j.at("lexicon_dim").get<size_t>();
  c.word_dim = j.at("word_dim").get<size_t>();
  c.freeze_embeddings = j.at("freeze_embeddings").get<bool>();
  c.seed = j.at("seed").get<uint64_t>();
  c.optimizer.learning_rate = j.at("learning_rate").get<double>();
  c.optimizer.clip_norm = j.at("clip_norm").get<double>();
  c.optimizer.momentum = j.at("momentum").get<double>();
  return c;
}

}  // namespace

void TaggerConfig::validate() const {
  if (char_dim == 0 || char_hidden == 0 || word_hidden == 0 ||
      lexicon_dim == 0 || word_dim == 0) {
    throw InvalidArgument("tagger dimensions must be positive");
  }
  if (!(word_dropout >= 0.0 && word_dropout < 1.0)) {
    throw InvalidArgument("word dropout must be in [0, 1)");
  }
}

TaggerModel TaggerModel::initialize(const Corpus& train,
                                    const TaggerConfig& config,
                                    const EmbeddingTable* embeddings,
                                    const Lexicon* lexicon) {
  config.validate();
  if (train.empty()) throw InvalidArgument("training corpus is empty");
  TaggerModel m;
  m.config_ = config;
  m.train_vocab_ = train.vocabulary();
  const uint64_t init_seed = derive_seed(config.seed, "init");
  auto seed_for = [&](const std::string& name) {
    return derive_seed(init_seed, name);
  };

  size_t word_dim = config.word_dim;
  if (embeddings != nullptr && embeddings->size() > 0) {
    m.pretrained_ = true;
    m.word_vocab_ = embeddings->words();
    word_dim = embeddings->dim();
    auto& table = m.params_.add(
        "word.table", Tensor({embeddings->size(), word_dim}, embeddings->data()),
        /*sparse_rows=*/true);
    table.set_frozen(config.freeze_embeddings);
  } else {
    for (const auto& [form, count] : m.train_vocab_) m.word_vocab_.push_back(form);
    m.params_.add("word.table",
                  neural::seeded_init({m.word_vocab_.size(), word_dim},
                                      seed_for("word.table"),
                                      InitScheme::kLookupUniform),
                  true);
  }
  m.params_.add("word.unk",
                neural::seeded_init({1, word_dim}, seed_for("word.unk"),
                                    InitScheme::kLookupUniform),
                true);

  std::set<char32_t> chars;
  for (const auto& [form, count] : m.train_vocab_) {
    for (char32_t c : utf8_decode(form)) chars.insert(c);
  }
  m.char_vocab_.assign(chars.begin(), chars.end());
  m.params_.add("char.table",
                neural::seeded_init({m.char_vocab_.size() + 1, config.char_dim},
                                    seed_for("char.table"),
                                    InitScheme::kLookupUniform),
                true);
  neural::make_bilstm(m.params_, "char", config.char_dim, config.char_hidden,
                      seed_for("char"));

  size_t lex_dim = 0;
  if (lexicon != nullptr) {
    m.lexicon_ = *lexicon;
    const size_t props = lexicon->inventory().size();
    if (props > 0) {
      m.params_.add("lex.table",
                    neural::seeded_init({props, config.lexicon_dim},
                                        seed_for("lex.table"),
                                        InitScheme::kLookupUniform),
                    true);
      lex_dim = props * config.lexicon_dim;
    }
  }
  const size_t input = word_dim + 2 * config.char_hidden + lex_dim;
  neural::make_bilstm(m.params_, "word", input, config.word_hidden,
                      seed_for("word"));
  m.params_.add("out.W",
                neural::seeded_init({kNumTags, 2 * config.word_hidden},
                                    seed_for("out.W"), InitScheme::kGlorotUniform));
  m.params_.add("out.b", Tensor({kNumTags}));
  m.bind();
  return m;
}

void TaggerModel::bind() {
  auto need = [&](const char* name) {
    Parameter* p = params_.find(name);
    if (p == nullptr) throw InvalidArgument(std::string("missing parameter ") + name);
    return p;
  };
  word_table_ = need("word.table");
  word_unk_ = need("word.unk");
  char_table_ = need("char.table");
  lex_table_ = params_.find("lex.table");
  out_w_ = need("out.W");
  out_b_ = need("out.b");
  char_lstm_ = neural::bind_bilstm(params_, "char");
  word_lstm_ = neural::bind_bilstm(params_, "word");

  word_index_.clear();
  for (size_t i = 0; i < word_vocab_.size(); ++i) word_index_.emplace(word_vocab_[i], i);
  if (word_table_->value().rows() != word_vocab_.size()) {
    throw InvalidArgument("word table does not match word vocabulary");
  }
  if (char_table_->value().rows() != char_vocab_.size() + 1) {
    throw InvalidArgument("char table does not match char vocabulary");
  }
  if (lexicon_ && !lexicon_->inventory().empty()) {
    if (lex_table_ == nullptr ||
        lex_table_->value().rows() != lexicon_->inventory().size()) {
      throw InvalidArgument("lexicon table does not match property inventory");
    }
  }
  if (char_lstm_.forward.hidden_dim != config_.char_hidden ||
      word_lstm_.forward.input_dim != input_dim() ||
      out_w_->value().cols() != 2 * word_lstm_.forward.hidden_dim) {
    throw InvalidArgument("inconsistent tagger dimensions");
  }
}

size_t TaggerModel::word_dim() const { return word_table_->value().cols(); }

size_t TaggerModel::lexicon_encoding_dim() const {
  if (!lexicon_) return 0;
  return lexicon_->inventory().size() * config_.lexicon_dim;
}

size_t TaggerModel::input_dim() const {
  return word_dim() + char_encoding_dim() + lexicon_encoding_dim();
}

size_t TaggerModel::char_index(char32_t c) const {
  auto it = std::lower_bound(char_vocab_.begin(), char_vocab_.end(), c);
  if (it == char_vocab_.end() || *it != c) return 0;
  return static_cast<size_t>(it - char_vocab_.begin()) + 1;
}

Var TaggerModel::char_word_encode(Graph& g, std::string_view form) const {
  const std::u32string chars = utf8_decode(form);
  if (chars.empty()) throw InvalidArgument("cannot encode an empty word form");
  std::vector<Var> inputs;
  inputs.reserve(chars.size());
  for (char32_t c : chars) inputs.push_back(g.lookup(*char_table_, char_index(c)));
  const auto out = neural::bilstm_run(g, char_lstm_, inputs);
  return g.concat({out.forward_end, out.backward_end});
}

Var TaggerModel::lexicon_embed(Graph& g, std::string_view form) const {
  const size_t l = config_.lexicon_dim;
  const size_t m = lexicon_ ? lexicon_->inventory().size() : 0;
  const auto present = lexicon_ ? lexicon_->property_indices(form)
                                : std::span<const size_t>();
  if (present.empty()) return g.zeros(m * l);
  std::vector<Var> slots;
  slots.reserve(m);
  size_t next = 0;
  for (size_t j = 0; j < m; ++j) {
    if (next < present.size() && present[next] == j) {
      slots.push_back(g.lookup(*lex_table_, j));
      ++next;
    } else {
      slots.push_back(g.zeros(l));
    }
  }
  return g.concat(slots);
}

Var TaggerModel::build_input(Graph& g, const Sentence& sentence, size_t position,
                             InputMode mode, Rng* rng) const {
  if (position >= sentence.size()) throw InvalidArgument("position out of range");
  const std::string& form = sentence[position].form;
  auto it = word_index_.find(form);
  bool use_unk = it == word_index_.end();
  if (!use_unk && mode == InputMode::kTrain && config_.word_dropout > 0.0) {
    if (rng == nullptr) throw InvalidArgument("training input needs an Rng");
    auto count_it = train_vocab_.find(form);
    const uint64_t count = count_it == train_vocab_.end() ? 0 : count_it->second;
    use_unk = word_dropout_decision(count, config_.word_dropout, *rng);
  }
  const Var w = use_unk ? g.lookup(*word_unk_, 0) : g.lookup(*word_table_, it->second);
  const Var cw = char_word_encode(g, form);
  if (lexicon_encoding_dim() == 0) return g.concat({w, cw});
  return g.concat({w, cw, lexicon_embed(g, form)});
}

std::vector<Var> TaggerModel::logits(Graph& g, const Sentence& sentence,
                                     InputMode mode, Rng* rng) const {
  if (sentence.empty()) throw InvalidArgument("empty sentence");
  std::vector<Var> inputs;
  inputs.reserve(sentence.size());
  for (size_t i = 0; i < sentence.size(); ++i) {
    inputs.push_back(build_input(g, sentence, i, mode, rng));
  }
  const auto states = neural::bilstm_run(g, word_lstm_, inputs);
  std::vector<Var> out;
  out.reserve(sentence.size());
  for (size_t i = 0; i < sentence.size(); ++i) {
    out.push_back(g.affine(*out_w_, *out_b_, {states.forward[i], states.backward[i]}));
  }
  return out;
}

std::vector<double> TaggerModel::encode_chars(std::string_view form) const {
  Graph g;
  const auto v = g.value(char_word_encode(g, form));
  return {v.begin(), v.end()};
}

std::vector<double> TaggerModel::encode_lexicon(std::string_view form) const {
  Graph g;
  const auto v = g.value(lexicon_embed(g, form));
  return {v.begin(), v.end()};
}

std::vector<Logits> TaggerModel::sentence_logits(const Sentence& sentence) const {
  Graph g;
  const auto vars = logits(g, sentence, InputMode::kInfer, nullptr);
  std::vector<Logits> out(vars.size());
  for (size_t i = 0; i < vars.size(); ++i) {
    const auto v = g.value(vars[i]);
    std::copy(v.begin(), v.end(), out[i].begin());
  }
  return out;
}

std::span<const double> TaggerModel::word_vector(std::string_view form) const {
  auto it = word_index_.find(std::string(form));
  if (it == word_index_.end()) return {};
  return word_table_->value().row(it->second);
}

std::string TaggerModel::save() const {
  json j;
  j["format"] = kFormatName;
  j["version"] = kFormatVersion;
  j["config"] = config_to_json(config_);
  j["pretrained"] = pretrained_;
  j["word_vocab"] = word_vocab_;
  std::vector<uint32_t> chars(char_vocab_.begin(), char_vocab_.end());
  j["char_vocab"] = chars;
  json vocab = json::object();
  for (const auto& [form, count] : train_vocab_) vocab[form] = count;
  j["train_vocab"] = std::move(vocab);
  if (lexicon_) {
    json lex;
    lex["kind"] = lexicon_kind_name(lexicon_->kind());
    lex["inventory"] = lexicon_->inventory();
    json entries = json::object();
    for (const auto& [form, props] : lexicon_->entries()) {
      entries[form] = std::vector<std::string>(props.begin(), props.end());
    }
    lex["entries"] = std::move(entries);
    j["lexicon"] = std::move(lex);
  } else {
    j["lexicon"] = nullptr;
  }
  json params = json::array();
  for (size_t i = 0; i < params_.size(); ++i) {
    const Parameter& p = params_[i];
    json pj;
    pj["name"] = p.name();
    pj["shape"] = p.value().shape();
    pj["sparse"] = p.sparse();
    pj["frozen"] = p.frozen();
    pj["values"] = std::vector<double>(p.value().values().begin(),
                                       p.value().values().end());
    params.push_back(std::move(pj));
  }
  j["parameters"] = std::move(params);
  return j.dump() + "\n";
}

TaggerModel TaggerModel::load(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model file is not valid JSON: ") + e.what(), 0);
  }
  try {
    if (j.at("format").get<std::string>() != kFormatName) {
      throw ParseError("not a tagger model file", 0);
    }
    const int version = j.at("version").get<int>();
    if (version != kFormatVersion) {
      throw ParseError("unsupported model version " + std::to_string(version), 0);
    }
    TaggerModel m;
    m.config_ = config_from_json(j.at("config"));
    m.pretrained_ = j.at("pretrained").get<bool>();
    m.word_vocab_ = j.at("word_vocab").get<std::vector<std::string>>();
    for (uint32_t c : j.at("char_vocab").get<std::vector<uint32_t>>()) {
      m.char_vocab_.push_back(static_cast<char32_t>(c));
    }
    for (const auto& [form, count] : j.at("train_vocab").items()) {
      m.train_vocab_.emplace(form, count.get<uint64_t>());
    }
    if (!j.at("lexicon").is_null()) {
      const auto& lj = j.at("lexicon");
      auto kind = parse_lexicon_kind(lj.at("kind").get<std::string>());
      if (!kind) throw ParseError("unknown lexicon kind", 0);
      Lexicon::Entries entries;
      for (const auto& [form, props] : lj.at("entries").items()) {
        auto list = props.get<std::vector<std::string>>();
        entries.emplace(form, std::set<std::string>(list.begin(), list.end()));
      }
      m.lexicon_ = Lexicon(*kind, std::move(entries));
      if (m.lexicon_->inventory() !=
          lj.at("inventory").get<std::vector<std::string>>()) {
        throw ParseError("lexicon inventory order mismatch", 0);
      }
    }
    for (const auto& pj : j.at("parameters")) {
      auto& p = m.params_.add(pj.at("name").get<std::string>(),
                              Tensor(pj.at("shape").get<std::vector<size_t>>(),
                                     pj.at("values").get<std::vector<double>>()),
                              pj.at("sparse").get<bool>());
      p.set_frozen(pj.at("frozen").get<bool>());
    }
    m.bind();
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model file: ") + e.what(), 0);
  }
}

double word_dropout_probability(uint64_t count, double p) {
  if (p < 0.0) throw InvalidArgument("word dropout rate must be non-negative");
  if (p == 0.0) return 0.0;
  return p / (p + static_cast<double>(count));
}

bool word_dropout_decision(uint64_t count, double p, Rng& rng) {
  const double prob = word_dropout_probability(count, p);
  // Always consume one draw so the stream does not depend on p.
  const double u = unit_uniform(rng);
  return u < prob;
}

TrainResult train(const Corpus& corpus, const TaggerConfig& config,
                  const EmbeddingTable* embeddings, const Lexicon* lexicon) {
  if (corpus.labeled_token_count() == 0) {
    throw InvalidArgument("training corpus has no labeled tokens");
  }
  TrainResult result{TaggerModel::initialize(corpus, config, embeddings, lexicon),
                     {}};
  TaggerModel& model = result.model;
  neural::SgdOptimizer optimizer(config.optimizer);
  auto params = model.parameters().all();
  Rng shuffle_rng(derive_seed(config.seed, "shuffle"));
  Rng dropout_rng(derive_seed(config.seed, "dropout"));

  std::vector<size_t> order;
  for (size_t i = 0; i < corpus.size(); ++i) {
    const auto& s = corpus.sentences()[i];
    if (std::any_of(s.begin(), s.end(), [](const Token& t) { return t.gold.has_value(); })) {
      order.push_back(i);
    }
  }

  Graph g;
  std::vector<Var> losses;
  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(order, shuffle_rng);
    double epoch_loss = 0.0;
    for (size_t idx : order) {
      const Sentence& s = corpus.sentences()[idx];
      g.clear();
      const auto out = model.logits(g, s, InputMode::kTrain, &dropout_rng);
      losses.clear();
      for (size_t i = 0; i < s.size(); ++i) {
        if (s[i].gold) {
          losses.push_back(g.softmax_cross_entropy(out[i], tag_index(*s[i].gold)));
        }
      }
      const Var total = g.sum(losses);
      epoch_loss += g.scalar(total);
      g.backward(total);
      optimizer.step(params);
    }
    result.epoch_losses.push_back(epoch_loss);
  }
  return result;
}

PosTag argmax_tag(const Logits& logits, TagSet allowed) {
  size_t best = kNumTags;
  for (size_t l = 0; l < kNumTags; ++l) {
    if (!allowed.empty() && !allowed.contains(tag_from_index(l))) continue;
    if (best == kNumTags || logits[l] > logits[best]) best = l;
  }
  return tag_from_index(best);
}

std::vector<PosTag> predict(const TaggerModel& model, const Sentence& sentence) {
  std::vector<PosTag> out;
  for (const auto& l : model.sentence_logits(sentence)) out.push_back(argmax_tag(l));
  return out;
}

std::vector<PosTag> predict_type_constrained(const TaggerModel& model,
                                             const Sentence& sentence,
                                             const Lexicon& lexicon) {
  if (lexicon.kind() != LexiconKind::kPosTagset) {
    throw InvalidArgument("type constraints need a PoS tag-set lexicon");
  }
  const auto logits = model.sentence_logits(sentence);
  std::vector<PosTag> out;
  out.reserve(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    const auto allowed = lexicon.tag_set(sentence[i].form);
    out.push_back(argmax_tag(logits[i], allowed.value_or(TagSet())));
  }
  return out;
}

namespace {

std::vector<PosTag> decode(const TaggerModel& model, const Sentence& s,
                           const Decoding& decoding) {
  return decoding.type_constraints
             ? predict_type_constrained(model, s, *decoding.type_constraints)
             : predict(model, s);
}

}  // namespace

Evaluation score(const Corpus& gold, std::vector<std::vector<PosTag>> predictions) {
  if (predictions.size() != gold.size()) {
    throw InvalidArgument("prediction count does not match gold sentences");
  }
  Evaluation ev;
  for (size_t s = 0; s < gold.size(); ++s) {
    const auto& sent = gold.sentences()[s];
    if (predictions[s].size() != sent.size()) {
      throw InvalidArgument("prediction length does not match gold sentence");
    }
    for (size_t i = 0; i < sent.size(); ++i) {
      if (!sent[i].gold) {
        throw InvalidArgument("gold corpus has an untagged token '" +
                              sent[i].form + "'");
      }
      const PosTag g = *sent[i].gold;
      const PosTag p = predictions[s][i];
      ++ev.confusion[tag_index(g)][tag_index(p)];
      ev.correct += g == p;
      ++ev.total;
    }
  }
  ev.accuracy = ev.total == 0 ? 0.0 : static_cast<double>(ev.correct) / ev.total;
  ev.predictions = std::move(predictions);
  return ev;
}

Evaluation evaluate(const TaggerModel& model, const Corpus& gold, Decoding decoding) {
  if (!gold.fully_tagged()) throw InvalidArgument("gold corpus has untagged tokens");
  std::vector<std::vector<PosTag>> predictions;
  predictions.reserve(gold.size());
  for (const auto& s : gold.sentences()) predictions.push_back(decode(model, s, decoding));
  return score(gold, std::move(predictions));
}

Corpus tag_corpus(const TaggerModel& model, const Corpus& input, Decoding decoding) {
  Corpus out;
  for (const auto& s : input.sentences()) {
    const auto tags = decode(model, s, decoding);
    Sentence tagged;
    for (size_t i = 0; i < s.size(); ++i) tagged.push_back(Token{s[i].form, tags[i]});
    out.add_sentence(std::move(tagged));
  }
  return out;
}

}  // namespace dsds::tagger
