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

#include "dsds/pipeline/config.h"

#include <cctype>

#include "dsds/common/status.h"
#include "dsds/common/text.h"

extern char** environ;

namespace dsds::pipeline {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_value(KeyType type, std::string_view v) {
  unsigned long long u;
  double d;
  switch (type) {
    case KeyType::kUint: return parse_uint(v, u);
    case KeyType::kDouble: return parse_double(v, d);
    case KeyType::kBool: return v == "true" || v == "false";
    case KeyType::kString: return true;
  }
  return false;
}

}  // namespace

const std::vector<KeySpec>& config_keys() {
  using K = KeyType;
  static const std::vector<KeySpec> keys = {
      {"seed", K::kUint, "1", "root seed; stage seeds are derived from it"},
      {"epochs", K::kUint, "10", "training epochs"},
      {"word_dropout", K::kDouble, "0.25", "word dropout rate p"},
      {"char_dim", K::kUint, "16", "character embedding size"},
      {"char_hidden", K::kUint, "32", "character bi-LSTM hidden size per direction"},
      {"word_hidden", K::kUint, "100", "word bi-LSTM hidden size per direction"},
      {"lexicon_dim", K::kUint, "40", "embedding size l per lexicon property"},
      {"word_dim", K::kUint, "64", "word embedding size without pre-trained vectors"},
      {"freeze_embeddings", K::kBool, "true", "keep pre-trained word vectors fixed"},
      {"learning_rate", K::kDouble, "0.1", "SGD learning rate"},
      {"clip_norm", K::kDouble, "5", "global gradient norm cap (0 disables)"},
      {"momentum", K::kDouble, "0", "SGD momentum"},
      {"lexicon_kind", K::kString, "pos", "lexicon format: pos or morph"},
      {"strategy", K::kString, "mean", "selection strategy: mean, any or random"},
      {"k", K::kUint, "5000", "number of selected training sentences"},
      {"decode", K::kString, "plain", "plain or type-constrained"},
      {"agreement_level", K::kString, "type", "type or token"},
      {"sample_strategy", K::kString, "frequency", "frequency or random"},
      {"sample_size", K::kUint, "100", "lexicon entries to keep"},
      {"retrofit_iterations", K::kUint, "10", "Jacobi iterations"},
      {"retrofit_alpha", K::kDouble, "1", "weight on the original vectors"},
      {"retrofit_beta", K::kDouble, "1", "weight on cluster neighbours"},
      {"probe_task", K::kString, "word-length", "word-length or in-lexicon"},
      {"probe_folds", K::kUint, "10", "cross-validation folds"},
      {"similarity_size", K::kUint, "1000", "words per PoS set"},
      {"similarity_pos", K::kString, "ADJ,NOUN,VERB", "PoS sets to compare"},
      {"plot", K::kBool, "false", "also write SVG density plots"},
      {"json_reports", K::kBool, "false", "mirror every CSV report as JSON"},
      {"synth_train_sentences", K::kUint, "2000", "multi-parallel training sentences"},
      {"synth_test_sentences", K::kUint, "500", "gold test sentences"},
      {"synth_gold_sentences", K::kUint, "2000", "gold sentences behind the frequency table"},
      {"synth_sources", K::kUint, "3", "source languages per sentence"},
      {"synth_vocab", K::kString,
       "NOUN=600,VERB=400,ADJ=250,ADV=80,X=20",
       "open-class vocabulary sizes (closed classes are fixed)"},
      {"synth_templates", K::kString, "", "'|'-separated tag templates; empty uses the built-in grammar"},
      {"synth_zipf", K::kDouble, "1", "Zipf exponent for word frequencies"},
      {"synth_ambiguity", K::kDouble, "0.1", "fraction of nouns that also occur as verbs"},
      {"synth_suffix_signal", K::kDouble, "0.3", "probability a form carries its PoS suffix"},
      {"synth_noise", K::kDouble, "0.1", "probability a projected tag is corrupted"},
      {"synth_min_alignment", K::kDouble, "0.2", "lowest per-sentence alignment rate"},
      {"synth_max_alignment", K::kDouble, "1", "highest per-sentence alignment rate"},
      {"synth_lexicon_coverage", K::kDouble, "0.5", "fraction of types in the lexicon"},
      {"synth_disjoint_noise", K::kDouble, "0", "fraction of entries with a disjoint tag set"},
      {"synth_embedding_dim", K::kUint, "16", "pre-trained embedding size"},
      {"synth_embedding_coverage", K::kDouble, "0.7", "fraction of types with a vector"},
      {"synth_embedding_signal", K::kDouble, "0.5", "scale of the PoS offset in the vectors"},
  };
  return keys;
}

const KeySpec* find_key(std::string_view name) {
  for (const auto& k : config_keys()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

std::string env_var_for(std::string_view key) {
  std::string out = "DSDS_";
  for (char c : key) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string_view source_name(ValueSource source) {
  switch (source) {
    case ValueSource::kDefault: return "default";
    case ValueSource::kFile: return "file";
    case ValueSource::kEnv: return "env";
    case ValueSource::kFlag: return "flag";
  }
  return "?";
}

RunConfig::RunConfig() {
  for (const auto& k : config_keys()) {
    values_[k.name] = k.default_value;
    sources_[k.name] = ValueSource::kDefault;
  }
}

void RunConfig::set(std::string_view key, std::string_view value, ValueSource source) {
  const KeySpec* spec = find_key(key);
  if (spec == nullptr) throw InvalidArgument("unknown config key '" + std::string(key) + "'");
  if (!valid_value(spec->type, value)) {
    throw InvalidArgument("invalid value '" + std::string(value) + "' for config key '" +
                          std::string(key) + "'");
  }
  values_[spec->name] = std::string(value);
  sources_[spec->name] = source;
}

void RunConfig::merge_file(std::string_view text) {
  std::map<std::string, size_t, std::less<>> seen;
  size_t line_no = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no);
    if (auto it = seen.find(key); it != seen.end()) {
      throw ParseError("key '" + key + "' repeats line " + std::to_string(it->second),
                       line_no);
    }
    seen.emplace(key, line_no);
    try {
      set(key, value, ValueSource::kFile);
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), line_no);
    }
  }
}

void RunConfig::merge_env(const std::map<std::string, std::string>& env) {
  for (const auto& k : config_keys()) {
    auto it = env.find(env_var_for(k.name));
    if (it == env.end()) continue;
    try {
      set(k.name, it->second, ValueSource::kEnv);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(it->first + ": " + e.what());
    }
  }
}

const std::string& RunConfig::get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw InvalidArgument("undeclared config key '" + std::string(key) + "'");
  return it->second;
}

uint64_t RunConfig::get_uint(std::string_view key) const {
  unsigned long long v = 0;
  parse_uint(get(key), v);
  return v;
}

double RunConfig::get_double(std::string_view key) const {
  double v = 0.0;
  parse_double(get(key), v);
  return v;
}

bool RunConfig::get_bool(std::string_view key) const { return get(key) == "true"; }

ValueSource RunConfig::source(std::string_view key) const {
  get(key);
  return sources_.find(key)->second;
}

std::map<std::string, std::string> process_environment() {
  std::map<std::string, std::string> env;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    std::string_view kv(*e);
    const size_t eq = kv.find('=');
    if (eq == std::string_view::npos) continue;
    env.emplace(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
  }
  return env;
}

tagger::TaggerConfig tagger_config(const RunConfig& c) {
  tagger::TaggerConfig t;
  t.epochs = c.get_uint("epochs");
  t.word_dropout = c.get_double("word_dropout");
  t.char_dim = c.get_uint("char_dim");
  t.char_hidden = c.get_uint("char_hidden");
  t.word_hidden = c.get_uint("word_hidden");
  t.lexicon_dim = c.get_uint("lexicon_dim");
  t.word_dim = c.get_uint("word_dim");
  t.freeze_embeddings = c.get_bool("freeze_embeddings");
  t.seed = derive_seed(c.get_uint("seed"), "train");
  t.optimizer.learning_rate = c.get_double("learning_rate");
  t.optimizer.clip_norm = c.get_double("clip_norm");
  t.optimizer.momentum = c.get_double("momentum");
  t.validate();
  return t;
}

}  // namespace dsds::pipeline
