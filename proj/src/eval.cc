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

#include "tagrec/eval.h"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <unordered_map>

#include "tagrec/common.h"

namespace tagrec::eval {
namespace {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

double median_of(const std::vector<double>& sorted, std::size_t begin,
                 std::size_t end) {
  const std::size_t n = end - begin;
  const std::size_t mid = begin + n / 2;
  return n % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
}

double row_metric(const AlgorithmRow& row, Metric metric, std::size_t k) {
  switch (metric) {
    case Metric::kNdcg:
      if (k == 0 || k > row.ndcg.size()) {
        throw ConfigError("nDCG@" + std::to_string(k) + " not in report");
      }
      return row.ndcg[k - 1];
    case Metric::kSemanticSimilarity:
      return row.semantic_similarity.mean;
    case Metric::kDiversity:
      return row.diversity.mean;
  }
  return 0.0;
}

}  // namespace

std::vector<TestCase> make_test_cases(const Corpus& corpus,
                                      const std::vector<std::string>& isbns) {
  std::vector<TestCase> cases;
  for (const std::string& isbn : isbns) {
    const EBook& book = corpus.at(isbn);
    if (book.review_keywords.empty()) continue;
    TestCase c;
    c.book = &book;
    c.relevant.insert(book.review_keywords.begin(), book.review_keywords.end());
    cases.push_back(std::move(c));
  }
  return cases;
}

Split split_cases(const Corpus& corpus, std::uint64_t seed) {
  Split split;
  const std::uint64_t salt = mix64(seed ^ 0x5851f42d4c957f2dULL);
  for (const auto& [isbn, book] : corpus.books()) {
    if (book.review_keywords.empty()) continue;
    const std::uint64_t h = mix64(fnv1a64(isbn) ^ salt);
    (h >> 63 ? split.test : split.validation).push_back(isbn);
  }
  return split;
}

double dcg_at_k(const rec::ScoredTagList& recommended, const TagSet& relevant,
                std::size_t k) {
  double dcg = 0.0;
  const std::size_t n = std::min(k, recommended.size());
  for (std::size_t i = 1; i <= n; ++i) {
    if (relevant.count(recommended.entries[i - 1].tag) != 0) {
      dcg += 1.0 / std::log2(1.0 + static_cast<double>(i));
    }
  }
  return dcg;
}

double ndcg_at_k(const rec::ScoredTagList& recommended, const TagSet& relevant,
                 std::size_t k) {
  if (k == 0) throw ConfigError("nDCG cutoff k must be >= 1");
  if (relevant.empty()) throw DataError("nDCG needs a non-empty relevant set");
  double ideal = 0.0;
  const std::size_t hits = std::min(k, relevant.size());
  for (std::size_t i = 1; i <= hits; ++i) {
    ideal += 1.0 / std::log2(1.0 + static_cast<double>(i));
  }
  return dcg_at_k(recommended, relevant, k) / ideal;
}

TagEncoder::TagEncoder(const embed::EmbeddingModel& model, InferenceOptions options)
    : model_(model), options_(options), config_(text::default_config()) {}

const embed::InferenceResult& TagEncoder::encode(const text::TokenStream& tokens) {
  const std::string key = join(tokens, " ");
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    it = cache_.emplace(key, model_.infer(tokens, options_.epochs, options_.seed))
             .first;
  }
  return it->second;
}

text::TokenStream TagEncoder::tokens_of(const std::vector<std::string>& tags) const {
  text::TokenStream out;
  for (const std::string& tag : tags) {
    for (std::string& t : text::preprocess(tag, config_)) out.push_back(std::move(t));
  }
  return out;
}

MetricValue semantic_similarity(TagEncoder& encoder,
                                const rec::ScoredTagList& recommended,
                                const TagSet& relevant) {
  MetricValue out;
  if (recommended.empty() || relevant.empty()) {
    out.flagged = true;
    return out;
  }
  const std::vector<std::string> relevant_tags(relevant.begin(), relevant.end());
  const embed::InferenceResult& a = encoder.encode(encoder.tokens_of(recommended.tags()));
  const embed::InferenceResult& b = encoder.encode(encoder.tokens_of(relevant_tags));
  if (a.all_oov || b.all_oov) {
    out.flagged = true;
    return out;
  }
  out.raw = embed::cosine(a.vector, b.vector);
  out.value = std::clamp(out.raw, 0.0, 1.0);
  return out;
}

MetricValue semantic_similarity(const embed::EmbeddingModel& model,
                                const rec::ScoredTagList& recommended,
                                const TagSet& relevant,
                                const InferenceOptions& options) {
  TagEncoder encoder(model, options);
  return semantic_similarity(encoder, recommended, relevant);
}

double mean_pairwise_dissimilarity(const std::vector<Vector>& vectors) {
  const std::size_t n = vectors.size();
  if (n < 2) return 0.0;
  CompensatedSum sum;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) sum.add(1.0 - embed::cosine(vectors[i], vectors[j]));
    }
  }
  return sum.value() / static_cast<double>(n * (n - 1));
}

MetricValue diversity_at_k(TagEncoder& encoder,
                           const rec::ScoredTagList& recommended, std::size_t k) {
  MetricValue out;
  const std::size_t n = std::min(k, recommended.size());
  if (n < 2) {
    out.flagged = true;
    return out;
  }
  std::vector<Vector> vectors;
  vectors.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const embed::InferenceResult& r =
        encoder.encode(encoder.tokens_of({recommended.entries[i].tag}));
    out.flagged = out.flagged || r.all_oov;
    vectors.push_back(r.vector);
  }
  out.raw = mean_pairwise_dissimilarity(vectors);
  out.value = std::clamp(out.raw, 0.0, 1.0);
  return out;
}

MetricValue diversity_at_k(const embed::EmbeddingModel& model,
                           const rec::ScoredTagList& recommended, std::size_t k,
                           const InferenceOptions& options) {
  TagEncoder encoder(model, options);
  return diversity_at_k(encoder, recommended, k);
}

Summary summarize(std::vector<double> values) {
  Summary s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  s.mean = compensated_mean(values);
  s.min = values.front();
  s.max = values.back();
  s.median = median_of(values, 0, n);
  if (n == 1) {
    s.q1 = s.q3 = values[0];
  } else {
    const std::size_t half = n / 2;
    s.q1 = median_of(values, 0, half);
    s.q3 = median_of(values, n - half, n);
  }
  return s;
}

const AlgorithmRow* EvaluationReport::find(std::string_view algorithm) const {
  for (const AlgorithmRow& row : rows) {
    if (row.algorithm == algorithm) return &row;
  }
  return nullptr;
}

std::vector<AlgorithmRow> evaluate_cases(const std::vector<TestCase>& cases,
                                         const std::vector<NamedRecommender>& recommenders,
                                         TagEncoder& encoder, std::size_t k_max) {
  if (k_max == 0) throw ConfigError("k_max must be >= 1");
  std::vector<AlgorithmRow> rows;
  for (const NamedRecommender& r : recommenders) {
    AlgorithmRow row;
    row.algorithm = r.name;
    row.n_cases = cases.size();
    std::vector<CompensatedSum> ndcg(k_max);
    std::vector<double> semantic;
    std::vector<double> diversity;
    for (const TestCase& c : cases) {
      const rec::ScoredTagList list = r.recommend(*c.book, k_max);
      if (list.empty()) {
        ++row.n_empty;
        ++row.n_semantic_flagged;
        ++row.n_diversity_flagged;
        for (CompensatedSum& s : ndcg) s.add(0.0);
        semantic.push_back(0.0);
        diversity.push_back(0.0);
        continue;
      }
      for (std::size_t k = 1; k <= k_max; ++k) {
        ndcg[k - 1].add(ndcg_at_k(list, c.relevant, k));
      }
      const MetricValue sem = semantic_similarity(encoder, list, c.relevant);
      const MetricValue div = diversity_at_k(encoder, list, k_max);
      row.n_semantic_flagged += sem.flagged;
      row.n_diversity_flagged += div.flagged;
      semantic.push_back(sem.value);
      diversity.push_back(div.value);
    }
    const double n = static_cast<double>(std::max<std::size_t>(cases.size(), 1));
    for (const CompensatedSum& s : ndcg) row.ndcg.push_back(s.value() / n);
    row.semantic_similarity = summarize(std::move(semantic));
    row.diversity = summarize(std::move(diversity));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::map<std::string, double> mean_ndcg(const std::vector<TestCase>& cases,
                                        const std::vector<NamedRecommender>& recommenders,
                                        std::size_t k) {
  std::map<std::string, double> out;
  for (const NamedRecommender& r : recommenders) {
    CompensatedSum sum;
    for (const TestCase& c : cases) {
      const rec::ScoredTagList list = r.recommend(*c.book, k);
      sum.add(list.empty() ? 0.0 : ndcg_at_k(list, c.relevant, k));
    }
    out[r.name] = cases.empty() ? 0.0 : sum.value() / static_cast<double>(cases.size());
  }
  return out;
}

SelectionReport select_hybrid_members(const rec::Resources& resources,
                                      const std::vector<TestCase>& validation,
                                      std::size_t k) {
  SelectionReport report;
  if (validation.empty()) {
    report.method = "default";
    return report;
  }
  report.method = "validation";
  std::vector<NamedRecommender> candidates;
  for (const rec::AlgorithmId& id : rec::AlgorithmId::all()) {
    if (id.family() == rec::Family::kHYB) continue;
    candidates.push_back({id.name(), rec::make_algorithm(id, resources)});
  }
  report.validation_ndcg = mean_ndcg(validation, candidates, k);

  const auto best = [&](auto predicate) {
    std::optional<rec::AlgorithmId> winner;
    double winner_score = -1.0;
    // all() is not name-sorted; compare names explicitly on ties.
    for (const rec::AlgorithmId& id : rec::AlgorithmId::all()) {
      if (id.family() == rec::Family::kHYB || !predicate(id)) continue;
      const double score = report.validation_ndcg.at(id.name());
      if (!winner || score > winner_score ||
          (score == winner_score && id.name() < winner->name())) {
        winner = id;
        winner_score = score;
      }
    }
    return *winner;
  };
  using rec::Context;
  using rec::Family;
  rec::HybridMembers& m = report.members;
  m.mp_none = best([](auto id) {
    return id.family() == Family::kMP && id.context() == Context::kNone;
  });
  m.mp_author = best([](auto id) {
    return id.family() == Family::kMP && id.context() == Context::kAuthor;
  });
  m.mp_bisac = best([](auto id) {
    return id.family() == Family::kMP && id.context() == Context::kBisac;
  });
  m.sim_title = best([](auto id) {
    return id.family() == Family::kSIM && id.context() == Context::kTitle;
  });
  m.sim_description = best([](auto id) {
    return id.family() == Family::kSIM && id.context() == Context::kDescription;
  });
  m.best_mp = best([](auto id) { return id.family() == Family::kMP; });
  m.best_sim = best([](auto id) { return id.family() == Family::kSIM; });
  return report;
}

EvaluationReport run_protocol(const Corpus& corpus,
                              const std::vector<rec::AlgorithmId>& algorithms,
                              const embed::EmbeddingModel& model,
                              const ProtocolOptions& options) {
  if (algorithms.empty()) throw ConfigError("no algorithms to evaluate");
  if (options.k_max == 0) throw ConfigError("k_max must be >= 1");
  if (options.pinned_members) options.pinned_members->validate();

  const Split split = split_cases(corpus, options.split_seed);
  const std::vector<TestCase> validation = make_test_cases(corpus, split.validation);
  const std::vector<TestCase> test = make_test_cases(corpus, split.test);
  if (test.empty()) {
    throw DataError("no test cases: no book in the test split has review keywords");
  }

  auto training = std::make_shared<const Corpus>(corpus.without_review_keywords());
  rec::Resources resources =
      rec::Resources::build(training, options.tfidf, options.stopwords, options.top_n);

  EvaluationReport report;
  if (options.pinned_members) {
    report.selection.members = *options.pinned_members;
    report.selection.method = "pinned";
  } else {
    report.selection = select_hybrid_members(resources, validation, 10);
  }
  resources.members = report.selection.members;

  std::vector<NamedRecommender> recommenders;
  for (const rec::AlgorithmId& id : algorithms) {
    recommenders.push_back({id.name(), rec::make_algorithm(id, resources)});
  }
  TagEncoder encoder(model, options.inference);
  report.rows = evaluate_cases(test, recommenders, encoder, options.k_max);

  report.metadata.split_seed = options.split_seed;
  report.metadata.n_validation = validation.size();
  report.metadata.n_test = test.size();
  report.metadata.k_max = options.k_max;
  report.metadata.model_digest = model.digest();
  report.metadata.inference_seed = options.inference.seed;
  report.metadata.inference_epochs = options.inference.epochs;
  return report;
}

RankCorrelation kendall_tau(const std::vector<std::string>& ranking_a,
                            const std::vector<std::string>& ranking_b) {
  const std::size_t n = ranking_a.size();
  if (n != ranking_b.size()) throw ConfigError("rankings differ in length");
  if (n < 2) throw ConfigError("Kendall's tau needs at least two items");
  std::unordered_map<std::string, std::size_t> position_b;
  for (std::size_t i = 0; i < n; ++i) {
    if (!position_b.emplace(ranking_b[i], i).second) {
      throw ConfigError("ranking contains '" + ranking_b[i] + "' twice");
    }
  }
  std::vector<std::size_t> b_of_a(n);
  std::unordered_map<std::string, bool> seen;
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen.emplace(ranking_a[i], true).second) {
      throw ConfigError("ranking contains '" + ranking_a[i] + "' twice");
    }
    const auto it = position_b.find(ranking_a[i]);
    if (it == position_b.end()) {
      throw ConfigError("'" + ranking_a[i] + "' missing from the second ranking");
    }
    b_of_a[i] = it->second;
  }
  long long concordant = 0;
  long long discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      (b_of_a[i] < b_of_a[j] ? concordant : discordant) += 1;
    }
  }
  const double nn = static_cast<double>(n);
  RankCorrelation out;
  out.tau = static_cast<double>(concordant - discordant) / (nn * (nn - 1.0) / 2.0);
  const double z =
      3.0 * out.tau * std::sqrt(nn * (nn - 1.0)) / std::sqrt(2.0 * (2.0 * nn + 5.0));
  out.p_value = std::clamp(std::erfc(std::abs(z) / std::sqrt(2.0)), DBL_MIN, 1.0);
  out.ranking_a = ranking_a;
  out.ranking_b = ranking_b;
  return out;
}

MetricRanking rank_algorithms(const EvaluationReport& report, Metric metric,
                              std::size_t k) {
  std::vector<std::pair<double, std::string>> scored;
  for (const AlgorithmRow& row : report.rows) {
    scored.emplace_back(row_metric(row, metric, k), row.algorithm);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  MetricRanking out;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    out.order.push_back(scored[i].second);
    if (i > 0 && scored[i].first == scored[i - 1].first) {
      out.ties.emplace_back(scored[i - 1].second, scored[i].second);
    }
  }
  return out;
}

}  // namespace tagrec::eval
