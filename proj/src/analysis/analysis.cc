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

#include "dsds/analysis/analysis.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dsds/common/random.h"
#include "dsds/common/status.h"
#include "dsds/common/text.h"
#include "dsds/kernels/kernels.h"

namespace dsds::analysis {

std::string_view group_name(OovGroup group) {
  switch (group) {
    case OovGroup::kInLexAndTrain: return "in-lex+train";
    case OovGroup::kInTrainOnly: return "in-train-only";
    case OovGroup::kInLexOnly: return "in-lex-only";
    case OovGroup::kTrueOov: return "true-oov";
  }
  return "?";
}

OovGroup oov_partition(std::string_view form, const Vocabulary& train,
                       const Lexicon* lexicon) {
  const bool in_train = train.find(form) != train.end();
  const bool in_lex = lexicon != nullptr && lexicon->contains(form);
  if (in_train) return in_lex ? OovGroup::kInLexAndTrain : OovGroup::kInTrainOnly;
  return in_lex ? OovGroup::kInLexOnly : OovGroup::kTrueOov;
}

OovReport accuracy_by_group(const std::vector<std::vector<PosTag>>& predictions,
                            const Corpus& gold, const Vocabulary& train,
                            const Lexicon* lexicon) {
  if (predictions.size() != gold.size()) {
    throw InvalidArgument("prediction count does not match gold sentences");
  }
  std::array<GroupStats, kNumOovGroups> stats{};
  OovReport report;
  for (size_t s = 0; s < gold.size(); ++s) {
    const Sentence& sent = gold.sentences()[s];
    if (predictions[s].size() != sent.size()) {
      throw InvalidArgument("prediction length does not match gold sentence");
    }
    for (size_t i = 0; i < sent.size(); ++i) {
      if (!sent[i].gold) throw InvalidArgument("gold corpus has untagged tokens");
      GroupStats& g = stats[static_cast<size_t>(oov_partition(sent[i].form, train, lexicon))];
      ++g.total;
      if (predictions[s][i] == *sent[i].gold) {
        ++g.correct;
        ++report.correct;
      } else {
        ++report.errors;
      }
    }
  }
  for (size_t k = 0; k < kNumOovGroups; ++k) {
    GroupStats g = stats[k];
    if (g.total == 0) continue;
    g.accuracy = double(g.correct) / double(g.total);
    if (report.correct > 0) g.share_of_correct = double(g.correct) / double(report.correct);
    if (report.errors > 0) {
      g.share_of_errors = double(g.total - g.correct) / double(report.errors);
    }
    report.groups[k] = g;
  }
  return report;
}

std::string write_oov_csv(const OovReport& report) {
  std::string out = "group,total,correct,accuracy,share_of_correct,share_of_errors\n";
  for (size_t k = 0; k < kNumOovGroups; ++k) {
    if (!report.groups[k]) continue;
    const GroupStats& g = *report.groups[k];
    out += std::string(group_name(static_cast<OovGroup>(k))) + ',' +
           std::to_string(g.total) + ',' + std::to_string(g.correct) + ',' +
           format_double(g.accuracy) + ',' + format_double(g.share_of_correct) +
           ',' + format_double(g.share_of_errors) + '\n';
  }
  return out;
}

std::vector<std::vector<double>> extract_char_encodings(
    const tagger::TaggerModel& model, const std::vector<std::string>& forms) {
  std::vector<std::vector<double>> out;
  out.reserve(forms.size());
  for (const std::string& f : forms) {
    if (model.training_vocabulary().find(f) == model.training_vocabulary().end()) {
      throw InvalidArgument("form '" + f + "' is outside the training vocabulary");
    }
    out.push_back(model.encode_chars(f));
  }
  return out;
}

std::string_view probe_task_name(ProbeTask task) {
  return task == ProbeTask::kWordLength ? "word-length" : "in-lexicon";
}

std::optional<ProbeTask> parse_probe_task(std::string_view name) {
  if (name == "word-length") return ProbeTask::kWordLength;
  if (name == "in-lexicon") return ProbeTask::kInLexicon;
  return std::nullopt;
}

bool is_long_word(std::string_view form) { return utf8_length(form) >= 7; }

std::vector<int> probe_labels(const std::vector<std::string>& forms,
                              ProbeTask task, const Lexicon* lexicon) {
  if (task == ProbeTask::kInLexicon && lexicon == nullptr) {
    throw InvalidArgument("the in-lexicon probe needs a lexicon");
  }
  std::vector<int> labels;
  labels.reserve(forms.size());
  for (const std::string& f : forms) {
    labels.push_back(task == ProbeTask::kWordLength ? is_long_word(f)
                                                    : lexicon->contains(f));
  }
  return labels;
}

std::vector<size_t> stratified_folds(std::span<const int> labels, size_t folds,
                                     uint64_t seed) {
  if (folds == 0) throw InvalidArgument("fold count must be positive");
  Rng rng(seed);
  std::vector<size_t> fold(labels.size());
  size_t offset = 0;
  for (int cls : {0, 1}) {
    std::vector<size_t> members;
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    shuffle(members, rng);
    for (size_t k = 0; k < members.size(); ++k) {
      fold[members[k]] = (offset + k) % folds;
    }
    offset = (offset + members.size()) % folds;
  }
  return fold;
}

double macro_f1(std::span<const int> gold, std::span<const int> predicted) {
  if (gold.size() != predicted.size()) throw InvalidArgument("length mismatch");
  double sum = 0.0;
  size_t classes = 0;
  for (int c : {0, 1}) {
    size_t tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < gold.size(); ++i) {
      tp += gold[i] == c && predicted[i] == c;
      fp += gold[i] != c && predicted[i] == c;
      fn += gold[i] == c && predicted[i] != c;
    }
    if (tp + fp + fn == 0) continue;
    sum += 2.0 * double(tp) / double(2 * tp + fp + fn);
    ++classes;
  }
  return classes == 0 ? 0.0 : sum / double(classes);
}

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

}  // namespace

int LogisticModel::predict(std::span<const double> x) const {
  double z = bias;
  for (size_t k = 0; k < weights.size(); ++k) z += weights[k] * (x[k] - mean[k]) / scale[k];
  return z > 0.0 ? 1 : 0;
}

LogisticModel fit_logistic(const std::vector<std::vector<double>>& features,
                           std::span<const int> labels,
                           std::span<const size_t> rows,
                           const ProbeOptions& options) {
  if (rows.empty()) throw InvalidArgument("no training rows");
  const size_t d = features[rows[0]].size();
  const size_t n = rows.size();
  LogisticModel m;
  m.mean.assign(d, 0.0);
  m.scale.assign(d, 0.0);
  for (size_t r : rows) {
    for (size_t k = 0; k < d; ++k) m.mean[k] += features[r][k];
  }
  for (double& v : m.mean) v /= double(n);
  for (size_t r : rows) {
    for (size_t k = 0; k < d; ++k) {
      const double t = features[r][k] - m.mean[k];
      m.scale[k] += t * t;
    }
  }
  for (double& v : m.scale) {
    v = std::sqrt(v / double(n));
    if (!(v > 1e-12)) v = 1.0;
  }
  // Standardized design matrix, row-major.
  std::vector<double> x(n * d);
  std::vector<double> y(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k < d; ++k) {
      x[i * d + k] = (features[rows[i]][k] - m.mean[k]) / m.scale[k];
    }
    y[i] = labels[rows[i]];
  }
  const auto& kt = kernels::active();
  std::vector<double> z(n);
  auto loss_at = [&](const std::vector<double>& w, double b) {
    std::fill(z.begin(), z.end(), b);
    kt.gemv(x.data(), n, d, d, w.data(), z.data());
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) total += softplus(z[i]) - y[i] * z[i];
    const double reg = 0.5 * options.l2 * kt.dot(w.data(), w.data(), d);
    return total / double(n) + reg;
  };

  std::vector<double> w(d, 0.0), grad(d), trial(d);
  double b = 0.0;
  double loss = loss_at(w, b);  // leaves z at the current logits
  double lr = options.learning_rate;
  for (size_t epoch = 0; epoch < options.max_epochs; ++epoch) {
    std::vector<double> residual(n);
    double gb = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double zi = z[i];
      const double p = zi >= 0 ? 1.0 / (1.0 + std::exp(-zi))
                               : std::exp(zi) / (1.0 + std::exp(zi));
      residual[i] = (p - y[i]) / double(n);
      gb += residual[i];
    }
    for (size_t k = 0; k < d; ++k) grad[k] = options.l2 * w[k];
    kt.gemv_t(x.data(), n, d, d, residual.data(), grad.data());

    double next = 0.0;
    double tb = 0.0;
    for (;;) {
      for (size_t k = 0; k < d; ++k) trial[k] = w[k] - lr * grad[k];
      tb = b - lr * gb;
      next = loss_at(trial, tb);
      if (next <= loss || lr < 1e-12) break;
      lr *= 0.5;
    }
    w.swap(trial);
    b = tb;
    m.epochs = epoch + 1;
    const double change = std::abs(loss - next);
    loss = next;
    if (change < options.tolerance) break;
  }
  m.weights = std::move(w);
  m.bias = b;
  return m;
}

ProbeResult train_probe(const ProbeDataset& dataset, const ProbeOptions& options) {
  const size_t n = dataset.labels.size();
  if (dataset.features.size() != n) throw InvalidArgument("feature/label count mismatch");
  if (options.folds < 2) throw InvalidArgument("need at least 2 folds");
  if (options.folds > n) throw InvalidArgument("more folds than data");
  size_t positives = 0;
  for (int l : dataset.labels) {
    if (l != 0 && l != 1) throw InvalidArgument("probe labels must be 0 or 1");
    positives += l;
  }
  if (positives == 0 || positives == n) {
    throw InvalidArgument("probe dataset has a single class");
  }
  const auto fold = stratified_folds(dataset.labels, options.folds, options.seed);
  ProbeResult result;
  result.folds = options.folds;
  result.seed = options.seed;
  for (size_t f = 0; f < options.folds; ++f) {
    std::vector<size_t> train_rows, test_rows;
    for (size_t i = 0; i < n; ++i) (fold[i] == f ? test_rows : train_rows).push_back(i);
    const LogisticModel model =
        fit_logistic(dataset.features, dataset.labels, train_rows, options);
    size_t train_pos = 0;
    for (size_t r : train_rows) train_pos += dataset.labels[r];
    const int majority = 2 * train_pos > train_rows.size() ? 1 : 0;

    std::vector<int> gold, pred, base;
    for (size_t r : test_rows) {
      gold.push_back(dataset.labels[r]);
      pred.push_back(model.predict(dataset.features[r]));
      base.push_back(majority);
    }
    result.fold_f1.push_back(macro_f1(gold, pred));
    result.baseline_fold_f1.push_back(macro_f1(gold, base));
  }
  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
  };
  result.mean_f1 = mean(result.fold_f1);
  result.baseline_f1 = mean(result.baseline_fold_f1);
  return result;
}

std::string write_probe_csv(const ProbeResult& result) {
  std::string out = "fold,macro_f1,baseline_macro_f1\n";
  for (size_t f = 0; f < result.fold_f1.size(); ++f) {
    out += std::to_string(f) + ',' + format_double(result.fold_f1[f]) + ',' +
           format_double(result.baseline_fold_f1[f]) + '\n';
  }
  out += "mean," + format_double(result.mean_f1) + ',' +
         format_double(result.baseline_f1) + '\n';
  return out;
}

std::vector<PosSample> sample_pos_sets(const Lexicon& lexicon,
                                       const EmbeddingTable& embeddings,
                                       const std::vector<PosTag>& pos, size_t size,
                                       uint64_t seed) {
  if (lexicon.kind() != LexiconKind::kPosTagset) {
    throw InvalidArgument("PoS sampling needs a PoS tag-set lexicon");
  }
  std::vector<PosSample> out;
  for (size_t p = 0; p < pos.size(); ++p) {
    std::vector<std::string> candidates;
    for (const auto& [form, props] : lexicon.entries()) {
      if (*lexicon.tag_set(form) == TagSet{pos[p]} && embeddings.contains(form)) {
        candidates.push_back(form);
      }
    }
    if (candidates.empty()) {
      throw InvalidArgument("no candidate words for " + std::string(tag_name(pos[p])));
    }
    Rng rng(derive_seed(seed, tag_name(pos[p])));
    PosSample s;
    s.pos = pos[p];
    s.candidates = candidates.size();
    s.shortfall = candidates.size() < size;
    for (size_t i : sample_without_replacement(candidates.size(), size, rng)) {
      s.words.push_back(candidates[i]);
    }
    std::sort(s.words.begin(), s.words.end());
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

// Doubled midranks of the concatenation a ++ b, so ties stay integral.
std::vector<uint64_t> doubled_midranks(std::span<const double> a,
                                       std::span<const double> b,
                                       uint64_t* tie_term) {
  const size_t n = a.size() + b.size();
  std::vector<std::pair<double, size_t>> all;
  all.reserve(n);
  for (size_t i = 0; i < a.size(); ++i) all.emplace_back(a[i], i);
  for (size_t i = 0; i < b.size(); ++i) all.emplace_back(b[i], a.size() + i);
  std::sort(all.begin(), all.end());
  std::vector<uint64_t> rank(n);
  *tie_term = 0;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && all[j].first == all[i].first) ++j;
    for (size_t k = i; k < j; ++k) rank[all[k].second] = i + 1 + j;
    const uint64_t t = j - i;
    *tie_term += t * t * t - t;
    i = j;
  }
  return rank;
}

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> a,
                                 std::span<const double> b,
                                 MannWhitneyMethod method) {
  if (a.empty() || b.empty()) throw InvalidArgument("Mann-Whitney needs two non-empty samples");
  for (double v : a) {
    if (std::isnan(v)) throw InvalidArgument("NaN in sample");
  }
  for (double v : b) {
    if (std::isnan(v)) throw InvalidArgument("NaN in sample");
  }
  const uint64_t n = a.size(), m = b.size(), total = n + m;
  uint64_t tie_term = 0;
  const auto rank = doubled_midranks(a, b, &tie_term);
  uint64_t ra2 = 0;
  for (size_t i = 0; i < n; ++i) ra2 += rank[i];
  MannWhitneyResult r;
  r.u = double(ra2) / 2.0 - double(n) * double(n + 1) / 2.0;
  const bool exact = method == MannWhitneyMethod::kExact ||
                     (method == MannWhitneyMethod::kAuto && n * m <= 400);
  r.exact = exact;
  if (exact) {
    // Null distribution of the doubled rank sum of the smaller sample over
    // all C(N, k) labelings.
    const bool use_a = n <= m;
    const size_t k = use_a ? n : m;
    uint64_t obs = 0;
    for (size_t i = 0; i < k; ++i) obs += rank[use_a ? i : n + i];
    std::vector<uint64_t> sorted = rank;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    uint64_t max_sum = 0;
    for (size_t i = 0; i < k; ++i) max_sum += sorted[i];
    std::vector<std::vector<double>> ways(k + 1, std::vector<double>(max_sum + 1, 0.0));
    ways[0][0] = 1.0;
    uint64_t reach = 0;
    for (size_t item = 0; item < total; ++item) {
      const uint64_t rv = rank[item];
      reach = std::min(max_sum, reach + rv);
      for (size_t c = std::min<size_t>(k, item + 1); c >= 1; --c) {
        auto& dst = ways[c];
        const auto& src = ways[c - 1];
        for (uint64_t s = reach; s >= rv; --s) {
          if (src[s - rv] != 0.0) dst[s] += src[s - rv];
          if (s == rv) break;
        }
      }
    }
    const int64_t centre = int64_t(k) * int64_t(total + 1);  // doubled mean
    const int64_t dev = std::abs(int64_t(obs) - centre);
    double hit = 0.0, all = 0.0;
    for (uint64_t s = 0; s <= max_sum; ++s) {
      all += ways[k][s];
      if (std::abs(int64_t(s) - centre) >= dev) hit += ways[k][s];
    }
    r.p = std::min(1.0, hit / all);
    return r;
  }
  const double nm = double(n) * double(m);
  const double N = double(total);
  const double var = nm / 12.0 * ((N + 1.0) - double(tie_term) / (N * (N - 1.0)));
  if (!(var > 0.0)) {
    r.p = 1.0;
    return r;
  }
  const double z = std::max(0.0, std::abs(r.u - nm / 2.0) - 0.5) / std::sqrt(var);
  r.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return r;
}

DistanceSummary summarize(std::vector<double> values) {
  DistanceSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * double(values.size() - 1);
    const size_t lo = size_t(pos);
    const size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - double(lo)) * (values[hi] - values[lo]);
  };
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / double(values.size());
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  return s;
}

std::vector<double> SystemDistances::pooled_within() const {
  std::vector<double> out;
  for (const auto& v : within) out.insert(out.end(), v.begin(), v.end());
  return out;
}

std::vector<double> SystemDistances::pooled_across() const {
  std::vector<double> out;
  for (const auto& v : across) out.insert(out.end(), v.begin(), v.end());
  return out;
}

namespace {

struct Encoded {
  std::vector<std::vector<double>> vectors;
  std::vector<double> sq_norms;
};

double distance(const Encoded& x, size_t i, const Encoded& y, size_t j) {
  const auto& kt = kernels::active();
  const double aa = x.sq_norms[i], bb = y.sq_norms[j];
  if (aa == 0.0 || bb == 0.0) return 1.0;
  const size_t d = x.vectors[i].size();
  double c = kt.dot(x.vectors[i].data(), y.vectors[j].data(), d) / std::sqrt(aa * bb);
  c = std::clamp(c, -1.0, 1.0);
  return 1.0 - c;
}

SystemDistances distances_for(const std::string& name, const Encoder& enc,
                              const std::vector<PosSample>& samples, size_t* dim) {
  std::vector<Encoded> sets;
  for (const PosSample& s : samples) {
    Encoded e;
    for (const std::string& w : s.words) {
      e.vectors.push_back(enc(w));
      if (*dim == 0) *dim = e.vectors.back().size();
      if (e.vectors.back().size() != *dim || *dim == 0) {
        throw InvalidArgument("encoders disagree on dimensionality");
      }
      const auto& v = e.vectors.back();
      e.sq_norms.push_back(kernels::active().dot(v.data(), v.data(), v.size()));
    }
    sets.push_back(std::move(e));
  }
  SystemDistances out;
  out.name = name;
  const size_t p = sets.size();
  for (size_t t = 0; t < p; ++t) {
    const Encoded& s = sets[t];
    const size_t k = s.vectors.size();
    std::vector<double> w;
    w.reserve(k * (k - 1));
    for (size_t i = 0; i < k; ++i) {
      for (size_t j = 0; j < k; ++j) {
        if (i != j) w.push_back(distance(s, i, s, j));
      }
    }
    out.within.push_back(std::move(w));

    const Encoded& o = sets[(t + 1) % p];
    std::vector<double> a;
    if (p > 1) {
      a.reserve(k * o.vectors.size());
      for (size_t i = 0; i < k; ++i) {
        for (size_t j = 0; j < o.vectors.size(); ++j) {
          if (i != j) a.push_back(distance(s, i, o, j));
        }
      }
    }
    out.across.push_back(std::move(a));
  }
  return out;
}

}  // namespace

SimilarityReport cosine_distance_study(const std::string& name_a, const Encoder& a,
                                       const std::string& name_b, const Encoder& b,
                                       const std::vector<PosSample>& samples) {
  if (samples.empty()) throw InvalidArgument("no PoS samples");
  for (const PosSample& s : samples) {
    if (s.words.size() < 2) {
      throw InvalidArgument("PoS sample for " + std::string(tag_name(s.pos)) +
                            " has fewer than 2 words");
    }
  }
  SimilarityReport r;
  r.samples = samples;
  size_t dim = 0;
  r.a = distances_for(name_a, a, samples, &dim);
  r.b = distances_for(name_b, b, samples, &dim);
  r.within_test = mann_whitney_u(r.a.pooled_within(), r.b.pooled_within());
  if (samples.size() > 1) {
    r.across_test = mann_whitney_u(r.a.pooled_across(), r.b.pooled_across());
  }
  return r;
}

SimilarityReport cosine_distance_study(const tagger::TaggerModel& base,
                                       const tagger::TaggerModel& dsds,
                                       const std::vector<PosSample>& samples) {
  return cosine_distance_study(
      "base", [&](std::string_view w) { return base.encode_chars(w); },
      "dsds", [&](std::string_view w) { return dsds.encode_chars(w); }, samples);
}

std::string write_similarity_csv(const SimilarityReport& report) {
  std::string out = "system,pool,pos,count,mean,min,q1,median,q3,max\n";
  auto row = [&](const std::string& sys, const char* pool, std::string_view pos,
                 const std::vector<double>& v) {
    const DistanceSummary s = summarize(v);
    out += sys + ',' + pool + ',' + std::string(pos) + ',' + std::to_string(s.count) +
           ',' + format_double(s.mean) + ',' + format_double(s.min) + ',' +
           format_double(s.q1) + ',' + format_double(s.median) + ',' +
           format_double(s.q3) + ',' + format_double(s.max) + '\n';
  };
  for (const SystemDistances* sys : {&report.a, &report.b}) {
    for (size_t t = 0; t < report.samples.size(); ++t) {
      row(sys->name, "within", tag_name(report.samples[t].pos), sys->within[t]);
    }
    row(sys->name, "within", "all", sys->pooled_within());
    for (size_t t = 0; t < report.samples.size(); ++t) {
      row(sys->name, "across", tag_name(report.samples[t].pos), sys->across[t]);
    }
    row(sys->name, "across", "all", sys->pooled_across());
  }
  return out;
}

std::string write_similarity_tests_csv(const SimilarityReport& report) {
  std::string out = "pool,u,p,method\n";
  for (const auto& [pool, t] : {std::pair<const char*, const MannWhitneyResult*>{
                                    "within", &report.within_test},
                                {"across", &report.across_test}}) {
    out += std::string(pool) + ',' + format_double(t->u) + ',' + format_double(t->p) +
           ',' + (t->exact ? "exact" : "normal") + '\n';
  }
  return out;
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string histogram_svg(
    const std::string& title,
    const std::vector<std::pair<std::string, std::vector<double>>>& series,
    double lo, double hi, size_t bins) {
  if (!(hi > lo) || bins == 0) throw InvalidArgument("bad histogram range");
  static const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b"};
  const double width = 640, height = 360, left = 50, right = 20, top = 40, bottom = 40;
  const double pw = width - left - right, ph = height - top - bottom;
  const double bin_width = (hi - lo) / double(bins);

  std::vector<std::vector<double>> density;
  double peak = 0.0;
  for (const auto& [name, values] : series) {
    std::vector<double> h(bins, 0.0);
    size_t n = 0;
    for (double v : values) {
      if (v < lo || v > hi) continue;
      size_t b = size_t((v - lo) / bin_width);
      if (b >= bins) b = bins - 1;
      h[b] += 1.0;
      ++n;
    }
    for (double& x : h) {
      x = n ? x / (double(n) * bin_width) : 0.0;
      peak = std::max(peak, x);
    }
    density.push_back(std::move(h));
  }
  if (peak == 0.0) peak = 1.0;

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width) +
                    "\" height=\"" + fixed(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fixed(width / 2) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">" + xml_escape(title) + "</text>\n";
  out += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(top + ph) + "\" x2=\"" +
         fixed(left + pw) + "\" y2=\"" + fixed(top + ph) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(top) + "\" x2=\"" + fixed(left) +
         "\" y2=\"" + fixed(top + ph) + "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    const double x = left + pw * t / 4.0;
    out += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(top + ph + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_double(v) + "</text>\n";
  }
  for (size_t s = 0; s < series.size(); ++s) {
    const char* colour = kColours[s % 6];
    out += "<polyline fill=\"none\" stroke=\"" + std::string(colour) +
           "\" stroke-width=\"1.5\" points=\"";
    for (size_t b = 0; b < bins; ++b) {
      const double x = left + pw * (double(b) + 0.5) / double(bins);
      const double y = top + ph * (1.0 - density[s][b] / peak);
      out += fixed(x) + "," + fixed(y) + (b + 1 < bins ? " " : "");
    }
    out += "\"/>\n";
    out += "<text x=\"" + fixed(left + pw - 4) + "\" y=\"" + fixed(top + 14 + 14.0 * s) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" +
           colour + "\">" + xml_escape(series[s].first) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace dsds::analysis
