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

#include "dsds/pipeline/cli.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "dsds/analysis/analysis.h"
#include "dsds/common/status.h"
#include "dsds/common/text.h"
#include "dsds/corpus/corpus.h"
#include "dsds/corpus/embeddings.h"
#include "dsds/corpus/lexicon.h"
#include "dsds/kernels/kernels.h"
#include "dsds/lexicon_tools/lexicon_tools.h"
#include "dsds/pipeline/config.h"
#include "dsds/pipeline/manifest.h"
#include "dsds/pipeline/synth.h"
#include "dsds/projection/projection.h"
#include "dsds/tagger/tagger.h"

namespace dsds::pipeline {
namespace {

namespace fs = std::filesystem;

struct FileArg {
  std::string role;
  bool required;
  bool repeatable;
  std::string help;
};

class Context {
 public:
  Context(RunConfig config, std::map<std::string, std::vector<std::string>> files,
          std::string out_dir, std::ostream& out)
      : config_(std::move(config)), files_(std::move(files)), out_dir_(std::move(out_dir)),
        out_(out) {}

  const RunConfig& config() const { return config_; }
  std::ostream& out() { return out_; }
  Manifest& manifest() { return manifest_; }

  bool has(const std::string& role) const {
    auto it = files_.find(role);
    return it != files_.end() && !it->second.empty();
  }
  size_t count(const std::string& role) const {
    auto it = files_.find(role);
    return it == files_.end() ? 0 : it->second.size();
  }

  std::string read(const std::string& role, size_t index = 0) {
    if (!has(role)) throw InvalidArgument("--" + role + " is required");
    const std::string& path = files_.at(role).at(index);
    std::string text;
    try {
      text = read_file(path);
    } catch (const Error& e) {
      throw Error("--" + role + ": " + e.what());
    }
    const std::string key = count(role) > 1 ? role + "." + std::to_string(index) : role;
    manifest_.inputs[key] = {path, sha256_hex(text)};
    return text;
  }

  // Runs a parser on an input file and prefixes its errors with the role.
  template <typename F>
  auto parse(const std::string& role, F&& parser, size_t index = 0) {
    const std::string text = read(role, index);
    try {
      return parser(std::string_view(text));
    } catch (const Error& e) {
      throw Error("--" + role + " " + files_.at(role).at(index) + ": " + e.what());
    }
  }

  uint64_t seed(const std::string& stage) {
    const uint64_t s = derive_seed(config_.get_uint("seed"), stage);
    manifest_.seeds[stage] = s;
    return s;
  }

  void write(const std::string& name, const std::string& contents) {
    write_file_atomic((fs::path(out_dir_) / name).string(), contents);
    manifest_.outputs.push_back({name, sha256_hex(contents)});
    if (name.size() > 4 && name.ends_with(".csv") && config_.get_bool("json_reports")) {
      const std::string mirror = name.substr(0, name.size() - 4) + ".json";
      const std::string json = csv_to_json(contents);
      write_file_atomic((fs::path(out_dir_) / mirror).string(), json);
      manifest_.outputs.push_back({mirror, sha256_hex(json)});
    }
  }

 private:
  RunConfig config_;
  std::map<std::string, std::vector<std::string>> files_;
  std::string out_dir_;
  std::ostream& out_;
  Manifest manifest_;
};

using Handler = std::function<void(Context&)>;

struct Command {
  std::string name;
  std::string help;
  std::vector<FileArg> files;
  Handler run;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

Corpus read_corpus(Context& ctx, const std::string& role) {
  std::optional<TagMapping> mapping;
  if (ctx.has("mapping")) mapping = ctx.parse("mapping", parse_tag_mapping);
  return ctx.parse(role, [&](std::string_view t) {
    return parse_corpus(t, mapping ? &*mapping : nullptr);
  });
}

Lexicon read_lexicon(Context& ctx, const std::string& role = "lexicon") {
  const auto kind = parse_lexicon_kind(ctx.config().get("lexicon_kind"));
  if (!kind) throw InvalidArgument("lexicon_kind must be pos or morph");
  return ctx.parse(role, [&](std::string_view t) { return parse_lexicon(t, *kind); });
}

EmbeddingTable read_embeddings(Context& ctx, const std::string& role = "embeddings") {
  return ctx.parse(role, parse_embeddings);
}

tagger::TaggerModel read_model(Context& ctx, const std::string& role, size_t index = 0) {
  return ctx.parse(role, tagger::TaggerModel::load, index);
}

projection::SelectionStrategy strategy(const RunConfig& c) {
  auto s = projection::parse_strategy(c.get("strategy"));
  if (!s) throw InvalidArgument("strategy must be mean, any or random");
  return *s;
}

std::optional<Lexicon> decoding_lexicon(Context& ctx, const tagger::TaggerModel& model) {
  const std::string& mode = ctx.config().get("decode");
  if (mode == "plain") return std::nullopt;
  if (mode != "type-constrained") throw InvalidArgument("decode must be plain or type-constrained");
  if (ctx.has("lexicon")) return read_lexicon(ctx);
  if (model.lexicon() != nullptr) return *model.lexicon();
  throw InvalidArgument("type-constrained decoding needs --lexicon or a DsDs model");
}

std::vector<std::vector<PosTag>> predictions_for(Context& ctx, const Corpus& gold) {
  const bool model = ctx.has("model");
  if (model == ctx.has("predictions")) {
    throw InvalidArgument("give exactly one of --model and --predictions");
  }
  Corpus tagged;
  if (model) {
    const auto m = read_model(ctx, "model");
    const auto lex = decoding_lexicon(ctx, m);
    tagged = tagger::tag_corpus(m, gold, {lex ? &*lex : nullptr});
  } else {
    tagged = read_corpus(ctx, "predictions");
  }
  if (tagged.size() != gold.size()) {
    throw InvalidArgument("predictions have " + std::to_string(tagged.size()) +
                          " sentences, gold has " + std::to_string(gold.size()));
  }
  std::vector<std::vector<PosTag>> out;
  for (size_t s = 0; s < tagged.size(); ++s) {
    const auto& sent = tagged.sentences()[s];
    if (sent.size() != gold.sentences()[s].size()) {
      throw InvalidArgument("sentence " + std::to_string(s + 1) + " length differs from gold");
    }
    std::vector<PosTag> tags;
    for (const auto& tok : sent) {
      if (!tok.gold) throw InvalidArgument("untagged prediction in sentence " + std::to_string(s + 1));
      tags.push_back(*tok.gold);
    }
    out.push_back(std::move(tags));
  }
  return out;
}

void cmd_synth(Context& ctx) {
  const SyntheticTaskSpec spec = synth_spec(ctx.config());
  ctx.manifest().seeds["synth"] = spec.seed;
  const SyntheticTask task = generate_task(spec);
  ctx.write("graphs.jsonl", projection::write_graph_file(task.graphs));
  ctx.write("train_gold.tsv", write_corpus(task.train_gold));
  ctx.write("test.tsv", write_corpus(task.test));
  ctx.write("gold.tsv", write_corpus(task.gold));
  ctx.write("frequencies.tsv", write_frequency_table(task.frequencies));
  ctx.write("lexicon.tsv", write_lexicon(task.lexicon));
  ctx.write("gold_lexicon.tsv", write_lexicon(task.gold_lexicon));
  ctx.write("embeddings.txt", write_embeddings(task.embeddings));
  ctx.out() << "graphs " << task.graphs.size() << "\ntypes " << task.gold_lexicon.size()
            << "\nlexicon " << task.lexicon.size() << "\nembeddings " << task.embeddings.size()
            << "\n";
}

void cmd_select(Context& ctx) {
  const auto graphs = ctx.parse("graphs", projection::parse_graph_file);
  const auto chosen = projection::select_top_k(graphs, ctx.config().get_uint("k"),
                                               strategy(ctx.config()), ctx.seed("select"));
  std::vector<projection::MultiParallelSentence> kept;
  std::string csv = "rank,index,mean_coverage,any_coverage\n";
  for (size_t r = 0; r < chosen.size(); ++r) {
    const auto& g = graphs[chosen[r]];
    csv += std::to_string(r) + "," + std::to_string(chosen[r]) + "," +
           fmt(projection::mean_coverage(g)) + "," + fmt(projection::any_source_coverage(g)) +
           "\n";
    kept.push_back(g);
  }
  ctx.write("selected.jsonl", projection::write_graph_file(kept));
  ctx.write("selection.csv", csv);
  ctx.out() << "selected " << kept.size() << " of " << graphs.size() << "\n";
}

void cmd_project(Context& ctx) {
  const auto graphs = ctx.parse("graphs", projection::parse_graph_file);
  const Corpus corpus = projection::project_corpus(
      graphs, ctx.config().get_uint("k"), strategy(ctx.config()), ctx.seed("select"));
  ctx.write("projected.tsv", write_corpus(corpus));
  ctx.out() << "sentences " << corpus.size() << "\ntokens " << corpus.token_count()
            << "\nlabeled " << corpus.labeled_token_count() << "\n";
}

void cmd_train(Context& ctx) {
  const Corpus corpus = read_corpus(ctx, "train");
  std::optional<EmbeddingTable> emb;
  if (ctx.has("embeddings")) emb = read_embeddings(ctx);
  std::optional<Lexicon> lex;
  if (ctx.has("lexicon")) lex = read_lexicon(ctx);
  tagger::TaggerConfig tc = tagger_config(ctx.config());
  tc.seed = ctx.seed("train");
  const auto result = tagger::train(corpus, tc, emb ? &*emb : nullptr, lex ? &*lex : nullptr);
  std::string csv = "epoch,loss\n";
  for (size_t e = 0; e < result.epoch_losses.size(); ++e) {
    csv += std::to_string(e + 1) + "," + fmt(result.epoch_losses[e]) + "\n";
  }
  ctx.write("model.json", result.model.save());
  ctx.write("training.csv", csv);
  ctx.out() << (lex ? "dsds" : "base") << " model, " << result.epoch_losses.size()
            << " epochs, final loss " << fmt(result.epoch_losses.back()) << "\n";
}

void cmd_tag(Context& ctx) {
  const auto model = read_model(ctx, "model");
  const Corpus input = read_corpus(ctx, "input");
  const auto lex = decoding_lexicon(ctx, model);
  ctx.write("tagged.tsv", write_corpus(tagger::tag_corpus(model, input, {lex ? &*lex : nullptr})));
  ctx.out() << "tagged " << input.token_count() << " tokens\n";
}

void cmd_evaluate(Context& ctx) {
  const Corpus gold = read_corpus(ctx, "gold");
  const auto ev = tagger::score(gold, predictions_for(ctx, gold));
  std::string csv = "metric,value\naccuracy," + fmt(ev.accuracy) + "\ncorrect," +
                    std::to_string(ev.correct) + "\ntotal," + std::to_string(ev.total) + "\n";
  std::string confusion = "gold,predicted,count\n";
  for (PosTag g : kAllTags) {
    for (PosTag p : kAllTags) {
      const size_t n = ev.confusion[tag_index(g)][tag_index(p)];
      if (n == 0) continue;
      confusion += std::string(tag_name(g)) + "," + std::string(tag_name(p)) + "," +
                   std::to_string(n) + "\n";
    }
  }
  ctx.write("evaluation.csv", csv);
  ctx.write("confusion.csv", confusion);
  ctx.out() << "accuracy " << fmt(ev.accuracy) << " (" << ev.correct << "/" << ev.total << ")\n";
}

void cmd_sample_lexicon(Context& ctx) {
  const Lexicon lex = read_lexicon(ctx);
  const size_t n = ctx.config().get_uint("sample_size");
  const std::string& how = ctx.config().get("sample_strategy");
  Lexicon sampled;
  if (how == "frequency") {
    const auto freq = ctx.parse("frequencies", parse_frequency_table);
    sampled = lexicon_tools::sample_by_frequency(lex, n, freq);
  } else if (how == "random") {
    sampled = lexicon_tools::sample_random(lex, n, ctx.seed("sample"));
  } else {
    throw InvalidArgument("sample_strategy must be frequency or random");
  }
  ctx.write("sampled_lexicon.tsv", write_lexicon(sampled));
  ctx.out() << "kept " << sampled.size() << " of " << lex.size() << " entries\n";
}

void cmd_retrofit(Context& ctx) {
  const EmbeddingTable emb = read_embeddings(ctx);
  const Lexicon lex = read_lexicon(ctx);
  std::optional<FrequencyTable> freq;
  if (ctx.has("frequencies")) freq = ctx.parse("frequencies", parse_frequency_table);
  const FrequencyTable* f = freq ? &*freq : nullptr;
  lexicon_tools::RetrofitOptions opt;
  opt.iterations = ctx.config().get_uint("retrofit_iterations");
  opt.alpha = ctx.config().get_double("retrofit_alpha");
  opt.beta = ctx.config().get_double("retrofit_beta");
  opt.validate();
  const auto clusters = lexicon_tools::derive_clusters(lex);
  const auto graph = lexicon_tools::star_graph(emb, clusters, f);
  std::string csv = "iteration,objective\n";
  EmbeddingTable current = emb;
  for (size_t it = 0; it <= opt.iterations; ++it) {
    lexicon_tools::RetrofitOptions step = opt;
    step.iterations = it;
    current = lexicon_tools::retrofit(emb, clusters, f, step);
    csv += std::to_string(it) + "," +
           fmt(lexicon_tools::retrofit_objective(emb, current, graph, opt.alpha, opt.beta)) + "\n";
  }
  ctx.write("retrofitted.txt", write_embeddings(current));
  ctx.write("retrofit.csv", csv);
  ctx.out() << "clusters " << clusters.size() << "\n";
}

void cmd_agreement(Context& ctx) {
  const Lexicon lex = read_lexicon(ctx);
  const Corpus gold = read_corpus(ctx, "gold");
  const std::string& level = ctx.config().get("agreement_level");
  if (level != "type" && level != "token") {
    throw InvalidArgument("agreement_level must be type or token");
  }
  const auto profile = lexicon_tools::agreement_profile(
      lex, gold, level == "type" ? lexicon_tools::AgreementLevel::kType
                                 : lexicon_tools::AgreementLevel::kToken);
  ctx.write("agreement.csv", lexicon_tools::write_agreement_csv(profile));
  ctx.out() << level << " agreement over " << profile.strata.front().total() << " items\n";
}

void cmd_oov_report(Context& ctx) {
  const Corpus gold = read_corpus(ctx, "gold");
  const auto predictions = predictions_for(ctx, gold);
  const Corpus train = read_corpus(ctx, "train");
  std::optional<Lexicon> lex;
  if (ctx.has("lexicon")) lex = read_lexicon(ctx);
  const auto report =
      analysis::accuracy_by_group(predictions, gold, train.vocabulary(), lex ? &*lex : nullptr);
  ctx.write("oov.csv", analysis::write_oov_csv(report));
  ctx.out() << "correct " << report.correct << " errors " << report.errors << "\n";
}

void cmd_probe(Context& ctx) {
  const auto task = analysis::parse_probe_task(ctx.config().get("probe_task"));
  if (!task) throw InvalidArgument("probe_task must be word-length or in-lexicon");
  std::optional<Lexicon> lex;
  if (ctx.has("lexicon")) lex = read_lexicon(ctx);
  analysis::ProbeOptions opt;
  opt.folds = ctx.config().get_uint("probe_folds");
  opt.seed = ctx.seed("probe");
  std::string summary = "model,mean_macro_f1,baseline_macro_f1\n";
  double f1 = 0.0;
  double base = 0.0;
  const size_t n = ctx.count("model");
  if (n == 0) throw InvalidArgument("--model is required");
  for (size_t i = 0; i < n; ++i) {
    const auto model = read_model(ctx, "model", i);
    std::vector<std::string> forms;
    for (const auto& [form, count] : model.training_vocabulary()) forms.push_back(form);
    const Lexicon* probe_lex = lex ? &*lex : model.lexicon();
    analysis::ProbeDataset data{analysis::extract_char_encodings(model, forms),
                                analysis::probe_labels(forms, *task, probe_lex)};
    const auto result = analysis::train_probe(data, opt);
    ctx.write("probe_" + std::to_string(i) + ".csv", analysis::write_probe_csv(result));
    summary += std::to_string(i) + "," + fmt(result.mean_f1) + "," + fmt(result.baseline_f1) + "\n";
    f1 += result.mean_f1;
    base += result.baseline_f1;
  }
  f1 /= static_cast<double>(n);
  base /= static_cast<double>(n);
  summary += "mean," + fmt(f1) + "," + fmt(base) + "\n";
  ctx.write("probe_summary.csv", summary);
  ctx.out() << analysis::probe_task_name(*task) << " macro F1 " << fmt(f1) << " baseline "
            << fmt(base) << "\n";
}

void cmd_similarity(Context& ctx) {
  const auto base = read_model(ctx, "base");
  const auto dsds_model = read_model(ctx, "dsds");
  const Lexicon lex = read_lexicon(ctx);
  const EmbeddingTable emb = read_embeddings(ctx);
  std::vector<PosTag> pos;
  for (std::string_view name : split(ctx.config().get("similarity_pos"), ',')) {
    auto tag = parse_tag(name);
    if (!tag) throw InvalidArgument("bad similarity_pos tag '" + std::string(name) + "'");
    pos.push_back(*tag);
  }
  const auto samples = analysis::sample_pos_sets(
      lex, emb, pos, ctx.config().get_uint("similarity_size"), ctx.seed("similarity"));
  const auto report = analysis::cosine_distance_study(base, dsds_model, samples);
  ctx.write("similarity.csv", analysis::write_similarity_csv(report));
  ctx.write("similarity_tests.csv", analysis::write_similarity_tests_csv(report));
  if (ctx.config().get_bool("plot")) {
    ctx.write("similarity_within.svg",
              analysis::histogram_svg("within-PoS cosine distance",
                                      {{report.a.name, report.a.pooled_within()},
                                       {report.b.name, report.b.pooled_within()}}));
    ctx.write("similarity_across.svg",
              analysis::histogram_svg("across-PoS cosine distance",
                                      {{report.a.name, report.a.pooled_across()},
                                       {report.b.name, report.b.pooled_across()}}));
  }
  for (const auto& s : samples) {
    if (s.shortfall) {
      ctx.out() << "note: " << tag_name(s.pos) << " has only " << s.candidates
                << " candidates\n";
    }
  }
  ctx.out() << "within p " << report.within_test.p << " across p " << report.across_test.p
            << "\n";
}

const std::vector<Command>& commands() {
  static const std::vector<Command> cmds = {
      {"synth", "generate a synthetic multi-parallel task", {}, cmd_synth},
      {"select", "rank sentences by alignment coverage and keep the top k",
       {{"graphs", true, false, "alignment graph file (JSON lines)"}}, cmd_select},
      {"project", "select, then project labels by weighted voting",
       {{"graphs", true, false, "alignment graph file (JSON lines)"}}, cmd_project},
      {"train", "train a base or DsDs tagger",
       {{"train", true, false, "training corpus"},
        {"embeddings", false, false, "pre-trained word vectors"},
        {"lexicon", false, false, "lexicon; trains the DsDs model"},
        {"mapping", false, false, "tag mapping for the corpus"}},
       cmd_train},
      {"tag", "tag a corpus",
       {{"model", true, false, "trained model"},
        {"input", true, false, "corpus to tag"},
        {"lexicon", false, false, "type constraints"},
        {"mapping", false, false, "tag mapping for the corpus"}},
       cmd_tag},
      {"evaluate", "token accuracy against gold",
       {{"gold", true, false, "gold corpus"},
        {"model", false, false, "trained model"},
        {"predictions", false, false, "tagged corpus"},
        {"lexicon", false, false, "type constraints"},
        {"mapping", false, false, "tag mapping for the corpora"}},
       cmd_evaluate},
      {"sample-lexicon", "keep n lexicon entries at random or by frequency",
       {{"lexicon", true, false, "lexicon"},
        {"frequencies", false, false, "frequency table"}},
       cmd_sample_lexicon},
      {"retrofit", "pull same-tag-set clusters together",
       {{"embeddings", true, false, "word vectors"},
        {"lexicon", true, false, "lexicon"},
        {"frequencies", false, false, "frequency table for the star centres"}},
       cmd_retrofit},
      {"agreement", "tag set agreement between a lexicon and a treebank",
       {{"lexicon", true, false, "lexicon"},
        {"gold", true, false, "gold corpus"},
        {"mapping", false, false, "tag mapping for the corpus"}},
       cmd_agreement},
      {"oov-report", "accuracy by train/lexicon membership",
       {{"gold", true, false, "gold corpus"},
        {"train", true, false, "training corpus"},
        {"model", false, false, "trained model"},
        {"predictions", false, false, "tagged corpus"},
        {"lexicon", false, false, "lexicon"},
        {"mapping", false, false, "tag mapping for the corpora"}},
       cmd_oov_report},
      {"probe", "probe character encodings with logistic regression",
       {{"model", true, true, "trained model (repeat to average)"},
        {"lexicon", false, false, "lexicon for in-lexicon"}},
       cmd_probe},
      {"similarity", "within/across-PoS cosine distances of two models",
       {{"base", true, false, "base model"},
        {"dsds", true, false, "DsDs model"},
        {"lexicon", true, false, "lexicon for the PoS sets"},
        {"embeddings", true, false, "embeddings for the PoS sets"}},
       cmd_similarity},
  };
  return cmds;
}

const Command* find_command(const std::string& name) {
  for (const auto& c : commands()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<std::string> flatten_files(const std::map<std::string, std::vector<std::string>>& files) {
  std::vector<std::string> args;
  for (const auto& [role, paths] : files) {
    for (const auto& p : paths) {
      args.push_back("--" + role);
      args.push_back(p);
    }
  }
  return args;
}

// Runs `cmd` and writes its manifest. Returns the manifest.
Manifest execute(const Command& cmd, RunConfig config,
                 std::map<std::string, std::vector<std::string>> files,
                 std::optional<FileDigest> config_file, const std::string& out_dir,
                 std::ostream& out) {
  fs::create_directories(out_dir);
  Context ctx(std::move(config), files, out_dir, out);
  ctx.manifest().command = cmd.name;
  ctx.manifest().kernels = std::string(kernels::backend_name(kernels::active_backend()));
  ctx.manifest().arguments = flatten_files(files);
  ctx.manifest().seeds["root"] = ctx.config().get_uint("seed");
  if (config_file) ctx.manifest().inputs["config"] = *config_file;
  cmd.run(ctx);
  for (const auto& [k, v] : ctx.config().values()) ctx.manifest().config[k] = v;
  Manifest m = ctx.manifest();
  write_file_atomic((fs::path(out_dir) / (cmd.name + ".manifest.json")).string(), m.to_json());
  return m;
}

void replay(const std::string& manifest_path, const std::string& out_dir, std::ostream& out) {
  const Manifest m = Manifest::from_json(read_file(manifest_path));
  const Command* cmd = find_command(m.command);
  if (cmd == nullptr) throw InvalidArgument("manifest names unknown command '" + m.command + "'");
  for (const auto& [role, f] : m.inputs) {
    std::string digest;
    try {
      digest = file_sha256(f.path);
    } catch (const Error& e) {
      throw Error("input " + role + ": " + e.what());
    }
    if (digest != f.sha256) throw Error("input " + role + " (" + f.path + ") has changed");
  }
  for (auto b : {kernels::Backend::kScalar, kernels::Backend::kAvx2}) {
    if (kernels::backend_name(b) == m.kernels) kernels::set_backend(b);
  }
  RunConfig config;
  for (const auto& [k, v] : m.config) config.set(k, v, ValueSource::kFlag);
  std::map<std::string, std::vector<std::string>> files;
  if (m.arguments.size() % 2 != 0) throw InvalidArgument("malformed manifest arguments");
  for (size_t i = 0; i < m.arguments.size(); i += 2) {
    const std::string& flag = m.arguments[i];
    if (!flag.starts_with("--")) throw InvalidArgument("malformed manifest arguments");
    files[flag.substr(2)].push_back(m.arguments[i + 1]);
  }
  std::optional<FileDigest> config_file;
  if (auto it = m.inputs.find("config"); it != m.inputs.end()) config_file = it->second;
  std::ostringstream sink;
  const Manifest again = execute(*cmd, config, files, config_file, out_dir, sink);
  if (again.outputs != m.outputs) {
    throw Error("replayed outputs differ from the manifest");
  }
  out << "replayed " << m.command << ": " << m.outputs.size() << " outputs identical\n";
}

}  // namespace

std::string csv_to_json(const std::string& csv) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::vector<std::string> header;
  for (std::string_view line : split(csv, '\n')) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (header.empty()) {
      header.assign(cells.begin(), cells.end());
      continue;
    }
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    for (size_t i = 0; i < header.size() && i < cells.size(); ++i) {
      unsigned long long n = 0;
      double v = 0.0;
      if (parse_uint(cells[i], n)) {
        row[header[i]] = n;
      } else if (parse_double(cells[i], v) && std::isfinite(v)) {
        row[header[i]] = v;
      } else {
        row[header[i]] = std::string(cells[i]);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows.dump(2) + "\n";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const std::map<std::string, std::string>& env) {
  CLI::App app{"DsDs tagger pipeline", "dsds"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "list every subcommand and option");

  struct Common {
    std::string config;
    std::optional<uint64_t> seed;
    std::string out = ".";
    std::vector<std::string> sets;
    std::map<std::string, std::vector<std::string>> files;
  };
  std::map<std::string, Common> common;
  for (const auto& cmd : commands()) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    Common& c = common[cmd.name];
    sub->add_option("--config", c.config, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "root seed (overrides config)");
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    sub->add_option("--set", c.sets, "key=value override (repeatable)");
    for (const auto& f : cmd.files) {
      auto* opt = sub->add_option("--" + f.role, c.files[f.role], f.help);
      if (f.required) opt->required();
      if (!f.repeatable) opt->expected(1);
    }
  }
  std::string manifest_path;
  std::string replay_out = ".";
  auto* rep = app.add_subcommand("replay", "re-run a manifest and check its outputs");
  rep->add_option("--manifest", manifest_path, "manifest written by an earlier run")
      ->required()
      ->check(CLI::ExistingFile);
  rep->add_option("--out", replay_out, "output directory")->capture_default_str();

  std::vector<const char*> argv = {"dsds"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  std::string name = "dsds";
  try {
    if (rep->parsed()) {
      name = "replay";
      replay(manifest_path, replay_out, out);
      return 0;
    }
    for (const auto& cmd : commands()) {
      if (!app.got_subcommand(cmd.name)) continue;
      name = cmd.name;
      Common& c = common[cmd.name];
      RunConfig config;
      std::optional<FileDigest> config_file;
      if (!c.config.empty()) {
        const std::string text = read_file(c.config);
        config_file = FileDigest{c.config, sha256_hex(text)};
        try {
          config.merge_file(text);
        } catch (const ParseError& e) {
          throw Error(c.config + ": " + e.what());
        }
      }
      config.merge_env(env);
      for (const auto& s : c.sets) {
        const size_t eq = s.find('=');
        if (eq == std::string::npos) throw InvalidArgument("--set expects key=value, got '" + s + "'");
        config.set(s.substr(0, eq), s.substr(eq + 1), ValueSource::kFlag);
      }
      if (c.seed) config.set("seed", std::to_string(*c.seed), ValueSource::kFlag);
      std::map<std::string, std::vector<std::string>> files;
      for (const auto& [role, paths] : c.files) {
        if (!paths.empty()) files[role] = paths;
      }
      execute(cmd, std::move(config), std::move(files), config_file, c.out, out);
      return 0;
    }
  } catch (const std::exception& e) {
    err << "dsds " << name << ": error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace dsds::pipeline
