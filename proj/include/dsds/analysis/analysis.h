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

#ifndef DSDS_ANALYSIS_ANALYSIS_H_
#define DSDS_ANALYSIS_ANALYSIS_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsds/corpus/corpus.h"
#include "dsds/corpus/embeddings.h"
#include "dsds/corpus/lexicon.h"
#include "dsds/corpus/pos_tag.h"
#include "dsds/tagger/tagger.h"

namespace dsds::analysis {

enum class OovGroup { kInLexAndTrain, kInTrainOnly, kInLexOnly, kTrueOov };
inline constexpr size_t kNumOovGroups = 4;

std::string_view group_name(OovGroup group);

// lexicon may be null (treated as empty).
OovGroup oov_partition(std::string_view form, const Vocabulary& train,
                       const Lexicon* lexicon);

struct GroupStats {
  size_t total = 0;
  size_t correct = 0;
  double accuracy = 0.0;
  double share_of_correct = 0.0;  // correct in group / all correct
  double share_of_errors = 0.0;   // errors in group / all errors
};

struct OovReport {
  // Indexed by OovGroup; nullopt for groups without tokens.
  std::array<std::optional<GroupStats>, kNumOovGroups> groups;
  size_t correct = 0;
  size_t errors = 0;
};

// Throws InvalidArgument on untagged gold tokens or shape mismatch.
OovReport accuracy_by_group(const std::vector<std::vector<PosTag>>& predictions,
                            const Corpus& gold, const Vocabulary& train,
                            const Lexicon* lexicon);

// Header "group,total,correct,accuracy,share_of_correct,share_of_errors";
// absent groups are omitted.
std::string write_oov_csv(const OovReport& report);

// Character bi-LSTM encodings, one per form. Throws InvalidArgument for a
// form outside the model's training vocabulary.
std::vector<std::vector<double>> extract_char_encodings(
    const tagger::TaggerModel& model, const std::vector<std::string>& forms);

enum class ProbeTask { kWordLength, kInLexicon };
std::string_view probe_task_name(ProbeTask task);
std::optional<ProbeTask> parse_probe_task(std::string_view name);

// At least 7 characters.
bool is_long_word(std::string_view form);

// Binary labels. kInLexicon throws InvalidArgument without a lexicon.
std::vector<int> probe_labels(const std::vector<std::string>& forms,
                              ProbeTask task, const Lexicon* lexicon);

struct ProbeDataset {
  std::vector<std::vector<double>> features;
  std::vector<int> labels;  // 0 or 1
};

struct ProbeOptions {
  size_t folds = 10;
  uint64_t seed = 0;
  double l2 = 1e-4;
  double learning_rate = 1.0;  // halved whenever an epoch raises the loss
  double tolerance = 1e-7;
  size_t max_epochs = 500;
};

struct ProbeResult {
  std::vector<double> fold_f1;
  std::vector<double> baseline_fold_f1;
  double mean_f1 = 0.0;
  double baseline_f1 = 0.0;
  size_t folds = 0;
  uint64_t seed = 0;
};

// Fold id per datum: each class is shuffled under seed and dealt round-robin.
std::vector<size_t> stratified_folds(std::span<const int> labels, size_t folds,
                                     uint64_t seed);

// Mean F1 over the classes that occur in gold or predicted.
double macro_f1(std::span<const int> gold, std::span<const int> predicted);

// L2-regularized logistic regression, trained by full-batch gradient
// descent on standardized features.
struct LogisticModel {
  std::vector<double> mean, scale, weights;
  double bias = 0.0;
  size_t epochs = 0;
  int predict(std::span<const double> x) const;
};
LogisticModel fit_logistic(const std::vector<std::vector<double>>& features,
                           std::span<const int> labels,
                           std::span<const size_t> rows,
                           const ProbeOptions& options);

// Throws InvalidArgument for a single-class dataset, folds < 2, or more
// folds than data.
ProbeResult train_probe(const ProbeDataset& dataset,
                        const ProbeOptions& options = {});

// Header "fold,macro_f1,baseline_macro_f1"; last row is "mean".
std::string write_probe_csv(const ProbeResult& result);

struct PosSample {
  PosTag pos = PosTag::kNoun;
  std::vector<std::string> words;  // sorted
  size_t candidates = 0;
  bool shortfall = false;
};

// Words unambiguously tagged `pos` in the lexicon and present in the
// embeddings, sampled uniformly without replacement. Throws
// InvalidArgument when a PoS has no candidate.
std::vector<PosSample> sample_pos_sets(
    const Lexicon& lexicon, const EmbeddingTable& embeddings,
    const std::vector<PosTag>& pos = {PosTag::kAdj, PosTag::kNoun, PosTag::kVerb},
    size_t size = 1000, uint64_t seed = 0);

struct MannWhitneyResult {
  double u = 0.0;  // for the first sample
  double p = 1.0;  // two-sided
  bool exact = false;
};

enum class MannWhitneyMethod { kAuto, kExact, kNormal };

// U = R_a - n(n+1)/2 with midranks. kAuto is exact for n*m <= 400 and
// the tie-corrected normal approximation with continuity correction
// otherwise. Throws InvalidArgument on an empty sample.
MannWhitneyResult mann_whitney_u(std::span<const double> a,
                                 std::span<const double> b,
                                 MannWhitneyMethod method = MannWhitneyMethod::kAuto);

struct DistanceSummary {
  size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};
// Quartiles by linear interpolation between order statistics.
DistanceSummary summarize(std::vector<double> values);

using Encoder = std::function<std::vector<double>(std::string_view)>;

struct SystemDistances {
  std::string name;
  // Indexed like the samples. Within: all ordered pairs (i, j), i != j, of
  // set t. Across: word i of set t against word j != i of set t+1 (mod P).
  std::vector<std::vector<double>> within;
  std::vector<std::vector<double>> across;
  std::vector<double> pooled_within() const;
  std::vector<double> pooled_across() const;
};

struct SimilarityReport {
  std::vector<PosSample> samples;
  SystemDistances a;
  SystemDistances b;
  MannWhitneyResult within_test;  // a vs b on pooled within distances
  MannWhitneyResult across_test;
};

// Throws InvalidArgument when a set has fewer than 2 words or the
// encoders disagree on dimensionality.
SimilarityReport cosine_distance_study(const std::string& name_a, const Encoder& a,
                                       const std::string& name_b, const Encoder& b,
                                       const std::vector<PosSample>& samples);
SimilarityReport cosine_distance_study(const tagger::TaggerModel& base,
                                       const tagger::TaggerModel& dsds,
                                       const std::vector<PosSample>& samples);

// Header "system,pool,pos,count,mean,min,q1,median,q3,max"; pos "all"
// rows hold the pooled distributions.
std::string write_similarity_csv(const SimilarityReport& report);
// Header "pool,u,p,method".
std::string write_similarity_tests_csv(const SimilarityReport& report);

// Self-contained SVG with one density polyline per series over [lo, hi].
std::string histogram_svg(
    const std::string& title,
    const std::vector<std::pair<std::string, std::vector<double>>>& series,
    double lo = 0.0, double hi = 2.0, size_t bins = 40);

}  // namespace dsds::analysis

#endif  // DSDS_ANALYSIS_ANALYSIS_H_
