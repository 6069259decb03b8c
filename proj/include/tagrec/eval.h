/*
 * Copyright 2026 The tagrec Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TAGREC_EVAL_H_
#define TAGREC_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tagrec/corpus.h"
#include "tagrec/embed.h"
#include "tagrec/recommend.h"
#include "tagrec/text.h"
#include "tagrec/tfidf.h"

namespace tagrec::eval {

using TagSet = std::set<std::string, std::less<>>;

// A book with review keywords; `relevant` holds the normalized keywords.
struct TestCase {
  const EBook* book = nullptr;
  TagSet relevant;
};

// Test cases for the given isbns, in the given order. Books without review
// keywords are skipped.
std::vector<TestCase> make_test_cases(const Corpus& corpus,
                                      const std::vector<std::string>& isbns);

// Books with review keywords split into validation and test halves by a
// seeded hash of the isbn. Both lists are in isbn order.
struct Split {
  std::vector<std::string> validation;
  std::vector<std::string> test;
};

Split split_cases(const Corpus& corpus, std::uint64_t seed);

// Binary-relevance DCG@k with gain 2^rel - 1 and discount log2(1 + i).
double dcg_at_k(const rec::ScoredTagList& recommended, const TagSet& relevant,
                std::size_t k);

// DCG@k over the ideal DCG of min(k, |relevant|) leading hits. Throws
// ConfigError for k == 0 and DataError for an empty relevant set.
double ndcg_at_k(const rec::ScoredTagList& recommended, const TagSet& relevant,
                 std::size_t k);

struct InferenceOptions {
  std::size_t epochs = 50;
  std::uint64_t seed = 7;
};

// Infers and memoizes document vectors for token sequences. Not thread-safe;
// use one encoder per thread.
class TagEncoder {
 public:
  TagEncoder(const embed::EmbeddingModel& model, InferenceOptions options);

  const embed::InferenceResult& encode(const text::TokenStream& tokens);

  // Pseudo-document of tags in the given order.
  text::TokenStream tokens_of(const std::vector<std::string>& tags) const;

  const embed::EmbeddingModel& model() const { return model_; }
  const InferenceOptions& options() const { return options_; }

 private:
  const embed::EmbeddingModel& model_;
  InferenceOptions options_;
  text::PreprocessConfig config_;
  std::map<std::string, embed::InferenceResult, std::less<>> cache_;
};

struct MetricValue {
  // Reported value, clamped to [0, 1].
  double value = 0.0;
  // Unclamped value.
  double raw = 0.0;
  // Set for degenerate inputs (empty list, out-of-vocabulary text, fewer
  // than two tags for diversity).
  bool flagged = false;
};

// Cosine between the inferred vectors of the recommended tags (rank order)
// and of the relevant tags (lexicographic order).
MetricValue semantic_similarity(TagEncoder& encoder,
                                const rec::ScoredTagList& recommended,
                                const TagSet& relevant);
MetricValue semantic_similarity(const embed::EmbeddingModel& model,
                                const rec::ScoredTagList& recommended,
                                const TagSet& relevant,
                                const InferenceOptions& options = {});

// Mean of 1 - cosine over all ordered pairs of distinct positions.
double mean_pairwise_dissimilarity(const std::vector<Vector>& vectors);

// Diversity of the top min(k, size) tags, each tag embedded on its own.
MetricValue diversity_at_k(TagEncoder& encoder,
                           const rec::ScoredTagList& recommended, std::size_t k);
MetricValue diversity_at_k(const embed::EmbeddingModel& model,
                           const rec::ScoredTagList& recommended, std::size_t k,
                           const InferenceOptions& options = {});

// Five-number summary plus mean. Quartiles are medians of the lower and
// upper halves, the overall median excluded when the count is odd.
struct Summary {
  double mean = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;

  bool operator==(const Summary&) const = default;
};

Summary summarize(std::vector<double> values);

struct AlgorithmRow {
  std::string algorithm;
  // ndcg[k - 1] = mean nDCG@k over the test cases, k = 1..k_max.
  std::vector<double> ndcg;
  Summary semantic_similarity;
  Summary diversity;
  std::size_t n_cases = 0;
  std::size_t n_empty = 0;
  std::size_t n_semantic_flagged = 0;
  std::size_t n_diversity_flagged = 0;

  bool operator==(const AlgorithmRow&) const = default;
};

struct SelectionReport {
  rec::HybridMembers members;
  // "validation", "pinned" or "default" (no validation cases).
  std::string method;
  std::map<std::string, double> validation_ndcg;

  bool operator==(const SelectionReport&) const = default;
};

struct ProtocolMetadata {
  std::uint64_t split_seed = 0;
  std::size_t n_validation = 0;
  std::size_t n_test = 0;
  std::size_t k_max = 10;
  std::string model_digest;
  std::uint64_t inference_seed = 0;
  std::size_t inference_epochs = 0;

  bool operator==(const ProtocolMetadata&) const = default;
};

struct EvaluationReport {
  std::vector<AlgorithmRow> rows;
  ProtocolMetadata metadata;
  SelectionReport selection;

  const AlgorithmRow* find(std::string_view algorithm) const;
  bool operator==(const EvaluationReport&) const = default;
};

struct NamedRecommender {
  std::string name;
  rec::Recommender recommend;
};

// Scores every recommender on every case: nDCG@1..k_max, semantic
// similarity and diversity at k_max. Empty recommendation lists score 0 on
// every metric and are counted in n_empty.
std::vector<AlgorithmRow> evaluate_cases(const std::vector<TestCase>& cases,
                                         const std::vector<NamedRecommender>& recommenders,
                                         TagEncoder& encoder, std::size_t k_max);

// Mean nDCG@k per algorithm without any embedding work.
std::map<std::string, double> mean_ndcg(const std::vector<TestCase>& cases,
                                        const std::vector<NamedRecommender>& recommenders,
                                        std::size_t k);

// Picks each hybrid slot's member by validation nDCG@k (ties: smaller
// algorithm name).
SelectionReport select_hybrid_members(const rec::Resources& resources,
                                      const std::vector<TestCase>& validation,
                                      std::size_t k = 10);

struct ProtocolOptions {
  std::size_t k_max = 10;
  std::uint64_t split_seed = 0;
  InferenceOptions inference;
  TfidfParams tfidf;
  std::size_t top_n = 20;
  text::StopwordSet stopwords = text::default_stopwords();
  // Fixes the hybrid members instead of selecting them on validation data.
  std::optional<rec::HybridMembers> pinned_members;
};

// Builds recommender resources from the corpus with review keywords
// stripped, resolves hybrid members on the validation half and scores
// `algorithms` on the test half. Throws DataError when there is no test
// case.
EvaluationReport run_protocol(const Corpus& corpus,
                              const std::vector<rec::AlgorithmId>& algorithms,
                              const embed::EmbeddingModel& model,
                              const ProtocolOptions& options = {});

struct RankCorrelation {
  double tau = 0.0;
  double p_value = 1.0;
  std::vector<std::string> ranking_a;
  std::vector<std::string> ranking_b;
};

// Kendall's tau-a between two strict rankings of the same ids, with a
// two-sided p-value from the normal approximation. Throws ConfigError on
// mismatched or repeated ids, or fewer than two items.
RankCorrelation kendall_tau(const std::vector<std::string>& ranking_a,
                            const std::vector<std::string>& ranking_b);

enum class Metric { kNdcg, kSemanticSimilarity, kDiversity };

struct MetricRanking {
  std::vector<std::string> order;
  // Adjacent pairs whose means tied exactly (broken by name).
  std::vector<std::pair<std::string, std::string>> ties;
};

// Algorithms ordered by descending mean metric; nDCG uses k.
MetricRanking rank_algorithms(const EvaluationReport& report, Metric metric,
                              std::size_t k = 10);

}  // namespace tagrec::eval

#endif  // TAGREC_EVAL_H_
