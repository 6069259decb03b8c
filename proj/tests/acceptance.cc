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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.h"
#include "oracles.h"
#include "tagrec/common.h"
#include "tagrec/embed.h"
#include "tagrec/eval.h"
#include "tagrec/pipeline.h"
#include "tagrec/recommend.h"
#include "tagrec/synthetic.h"
#include "tagrec/tfidf.h"

namespace {

namespace fs = std::filesystem;
using namespace tagrec;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0,
                double d = 0.0) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, format, a, b, c, d);
  return buffer;
}

rec::ScoredTagList list_of(const std::vector<std::string>& tags) {
  rec::ScoredTagList out;
  double score = static_cast<double>(tags.size());
  for (const std::string& t : tags) out.entries.push_back({t, score--});
  out.k_max = tags.size();
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

const fs::path& work_dir() {
  static const fs::path dir = fs::current_path() / "acceptance_work";
  return dir;
}

// Metric implementations against brute-force oracles.
Outcome metric_oracles() {
  Rng rng(2026);
  const auto docs = fixture::two_topic_docs();
  embed::EmbeddingParams params;
  params.seed = 42;
  const embed::EmbeddingModel model = embed::EmbeddingModel::train(docs, params);
  const std::vector<std::string>& vocab = model.words();  // 40 words
  const eval::InferenceOptions inference;

  std::map<std::string, Vector> oracle_vectors;
  const auto oracle_vector = [&](const std::string& tag) -> const Vector& {
    auto it = oracle_vectors.find(tag);
    if (it == oracle_vectors.end()) {
      it = oracle_vectors
               .emplace(tag, model.infer({tag}, inference.epochs, inference.seed).vector)
               .first;
    }
    return it->second;
  };
  eval::TagEncoder encoder(model, inference);

  const std::size_t instances = 1000;
  double worst_ndcg = 0.0, worst_div = 0.0, worst_tau = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    std::vector<std::string> pool = vocab;
    rng.shuffle(pool);
    std::vector<std::string> ranked(pool.begin(), pool.begin() + static_cast<long>(rng.index(11)));
    rng.shuffle(pool);
    eval::TagSet relevant(pool.begin(), pool.begin() + 1 + static_cast<long>(rng.index(10)));
    for (const std::string& t : ranked) {
      if (rng.bernoulli(0.3)) relevant.insert(t);
    }
    const std::size_t k = 1 + rng.index(10);
    worst_ndcg = std::max(worst_ndcg, std::abs(eval::ndcg_at_k(list_of(ranked), relevant, k) -
                                               oracle::ndcg(ranked, relevant, k)));

    rng.shuffle(pool);
    const std::vector<std::string> tags(pool.begin(),
                                        pool.begin() + 2 + static_cast<long>(rng.index(9)));
    const std::size_t dk = 2 + rng.index(9);
    const std::size_t used = std::min(dk, tags.size());
    double sum = 0.0;
    for (std::size_t a = 0; a < used; ++a) {
      for (std::size_t b = 0; b < used; ++b) {
        if (a != b) sum += 1.0 - oracle::cosine(oracle_vector(tags[a]), oracle_vector(tags[b]));
      }
    }
    const double want = sum / static_cast<double>(used * (used - 1));
    worst_div = std::max(worst_div,
                         std::abs(eval::diversity_at_k(encoder, list_of(tags), dk).raw - want));

    rng.shuffle(pool);
    const std::vector<std::string> a(pool.begin(),
                                     pool.begin() + 2 + static_cast<long>(rng.index(9)));
    std::vector<std::string> b = a;
    rng.shuffle(b);
    const eval::RankCorrelation got = eval::kendall_tau(a, b);
    const oracle::Tau ref = oracle::kendall(a, b);
    worst_tau = std::max({worst_tau, std::abs(got.tau - ref.tau), std::abs(got.p_value - ref.p)});
  }
  const double tolerance = 1e-9;
  Outcome o;
  o.pass = worst_ndcg <= tolerance && worst_div <= tolerance && worst_tau <= tolerance;
  o.detail = std::to_string(instances) + " instances each; max |error| nDCG " +
             fmt("%.2e, diversity %.2e, tau/p %.2e", worst_ndcg, worst_div, worst_tau);
  return o;
}

// Similarity recommender against exhaustive cosine neighbors.
Outcome cross_source_oracle() {
  std::size_t queries = 0, mismatches = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Corpus corpus = fixture::random_corpus(seed, 50);
    for (const TextField field : {TextField::kDescription, TextField::kTitle}) {
      const TfidfParams params{1 + seed % 3, 3};
      std::optional<TfidfIndex> index;
      try {
        index = TfidfIndex::build(corpus, field, params);
      } catch (const DataError&) {
        continue;
      }
      for (const auto& [isbn, book] : corpus.books()) {
        for (const Source source : {Source::kEditor, Source::kAmazon}) {
          const rec::ScoredTagList got = rec::sim_recommend(*index, corpus, source, book, 10);
          const auto want = oracle::similarity_tags(corpus, field == TextField::kTitle,
                                                    source, isbn, params.min_df,
                                                    params.min_word_length, 20, 10);
          ++queries;
          bool same = got.size() == want.size();
          for (std::size_t i = 0; same && i < want.size(); ++i) {
            same = got.entries[i].tag == want[i].tag;
            worst = std::max(worst, std::abs(got.entries[i].score - want[i].score));
          }
          mismatches += !same;
        }
      }
    }
  }
  Outcome o;
  o.pass = mismatches == 0 && queries > 0;
  o.detail = "100 seeds, " + std::to_string(queries) + " queries, " +
             std::to_string(mismatches) + " tag-order mismatches" +
             fmt(", max score |error| %.2e", worst);
  return o;
}

// Gradient check and topic separation.
Outcome embedding_correctness() {
  Rng rng(99);
  const std::size_t dim = 50;
  const std::size_t negative = 10;
  const double h = 1e-6;
  double worst_relative = 0.0;
  double worst_update = 0.0;
  for (int step = 0; step < 100; ++step) {
    const auto random_vec = [&] {
      Vector v(dim);
      for (double& x : v) x = rng.uniform(-0.5, 0.5);
      return v;
    };
    Vector doc = random_vec(), target = random_vec();
    std::vector<Vector> negs;
    for (std::size_t n = 0; n < negative; ++n) negs.push_back(random_vec());
    const auto loss = [&] {
      const std::vector<std::span<const double>> n(negs.begin(), negs.end());
      return embed::negative_sampling_loss(doc, target, n);
    };
    const std::vector<std::span<const double>> views(negs.begin(), negs.end());
    const embed::NegativeSamplingGradient g =
        embed::negative_sampling_gradient(doc, target, views);

    double diff2 = 0.0, analytic2 = 0.0, numeric2 = 0.0;
    const auto check = [&](Vector& x, const Vector& grad) {
      for (std::size_t j = 0; j < dim; ++j) {
        const double saved = x[j];
        x[j] = saved + h;
        const double up = loss();
        x[j] = saved - h;
        const double down = loss();
        x[j] = saved;
        const double numeric = (up - down) / (2.0 * h);
        diff2 += (numeric - grad[j]) * (numeric - grad[j]);
        analytic2 += grad[j] * grad[j];
        numeric2 += numeric * numeric;
      }
    };
    check(doc, g.doc);
    check(target, g.target);
    for (std::size_t n = 0; n < negative; ++n) check(negs[n], g.negatives[n]);
    const double scale = std::max(std::sqrt(std::max(analytic2, numeric2)), 1e-12);
    worst_relative = std::max(worst_relative, std::sqrt(diff2) / scale);

    // The trainer's update moves each input by -lr times this gradient.
    const double lr = 0.025;
    const Vector doc_before = doc;
    std::vector<std::span<double>> spans(negs.begin(), negs.end());
    embed::sgd_step(doc, target, spans, lr);
    for (std::size_t j = 0; j < dim; ++j) {
      worst_update = std::max(worst_update, std::abs(doc[j] - (doc_before[j] - lr * g.doc[j])));
    }
  }

  const auto docs = fixture::two_topic_docs(42);
  const embed::EmbeddingModel model = embed::EmbeddingModel::train(docs, {});
  double within = 0.0, cross = 0.0;
  int nw = 0, nc = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (std::size_t j = i + 1; j < docs.size(); ++j) {
      const double c =
          embed::cosine(model.doc_vector(docs[i].isbn), model.doc_vector(docs[j].isbn));
      (fixture::same_topic(i, j) ? within : cross) += c;
      (fixture::same_topic(i, j) ? nw : nc) += 1;
    }
  }
  within /= nw;
  cross /= nc;
  Outcome o;
  o.pass = worst_relative <= 1e-4 && worst_update <= 1e-12 && within - cross >= 0.2;
  o.detail = fmt("(a) 100 steps, max relative gradient error %.2e, update error %.1e; ",
                 worst_relative, worst_update) +
             fmt("(b) within %.3f, cross %.3f, gap %.3f after 10 epochs", within, cross,
                 within - cross);
  return o;
}

// Two runs of one manifest write byte-identical reports.
Outcome determinism() {
  const fs::path first = work_dir() / "determinism_a";
  const fs::path second = work_dir() / "determinism_b";
  fs::remove_all(first);
  fs::remove_all(second);
  ExperimentConfig config = ExperimentConfig::from_key_values(
      {{"synthetic.books", "600"}, {"output.out_dir", first.string()}});
  run_experiment(config);
  const Manifest manifest = load_manifest((first / "manifest.json").string());
  rerun_manifest(manifest, {{"output.out_dir", second.string()}});
  std::size_t identical = 0;
  const std::vector<std::string> files = {"report.json", "report.csv", "report.md",
                                          "embedding.bin"};
  for (const std::string& name : files) {
    const std::string a = read_file(first / name);
    identical += !a.empty() && a == read_file(second / name);
  }
  Outcome o;
  o.pass = identical == files.size();
  o.detail = std::to_string(identical) + "/" + std::to_string(files.size()) +
             " artifacts byte-identical across two runs of one manifest";
  return o;
}

struct TrendRun {
  eval::EvaluationReport report;
  double seconds = 0.0;
};

const TrendRun& trend_run() {
  static const TrendRun run = [] {
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = work_dir() / "trend";
    fs::remove_all(dir);
    const ExperimentConfig config = ExperimentConfig::from_key_values(
        {{"synthetic.seed", "1"}, {"synthetic.books", "5000"}, {"output.out_dir", dir.string()}});
    TrendRun r;
    r.report = run_experiment(config).report;
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }();
  return run;
}

double ndcg10(const eval::EvaluationReport& report, const std::string& name) {
  const eval::AlgorithmRow* row = report.find(name);
  if (row == nullptr) throw Error("missing row " + name);
  return row->ndcg.at(9);
}

// Qualitative trends on the 5,000-book synthetic corpus.
Outcome trends() {
  const TrendRun& run = trend_run();
  const eval::EvaluationReport& r = run.report;
  std::string best_single;
  double best = -1.0;
  for (const rec::AlgorithmId& id : rec::AlgorithmId::all()) {
    if (id.family() == rec::Family::kHYB) continue;
    const double v = ndcg10(r, id.name());
    if (v > best) {
      best = v;
      best_single = id.name();
    }
  }
  const double hyb = ndcg10(r, "hyb-best");
  const bool a = hyb >= best - 0.005;

  bool b = true;
  std::string detail_b;
  for (const std::string field : {"desc", "title"}) {
    const std::string editor = "sim-" + field + "-editor";
    const std::string amazon = "sim-" + field + "-amazon";
    const double ne = ndcg10(r, editor), na = ndcg10(r, amazon);
    const double de = r.find(editor)->diversity.mean, da = r.find(amazon)->diversity.mean;
    b = b && na < ne && da > de;
    detail_b += "; (b) " + field +
                fmt(": nDCG amazon %.4f vs editor %.4f, diversity %.4f vs %.4f", na, ne, da, de);
  }
  Outcome o;
  o.pass = a && b && run.seconds < 600.0;
  o.detail = fmt("(a) hyb-best %.4f vs best single %.4f", hyb, best) + " (" + best_single +
             ")" + detail_b + fmt("; %.0f s", run.seconds);
  return o;
}

// nDCG@10 and semantic-similarity rankings agree.
Outcome ranking_correlation() {
  const eval::EvaluationReport& r = trend_run().report;
  const eval::MetricRanking by_ndcg = eval::rank_algorithms(r, eval::Metric::kNdcg, 10);
  const eval::MetricRanking by_semantic =
      eval::rank_algorithms(r, eval::Metric::kSemanticSimilarity);
  const eval::RankCorrelation tau = eval::kendall_tau(by_ndcg.order, by_semantic.order);
  Outcome o;
  o.pass = tau.tau > 0.0 && tau.p_value < 0.05;
  o.detail = fmt("tau %.3f, p %.2e over 19 algorithms", tau.tau, tau.p_value) + ", " +
             std::to_string(by_ndcg.ties.size() + by_semantic.ties.size()) + " exact ties";
  return o;
}

// Review keywords never reach a recommender.
Outcome protocol_isolation() {
  const auto raw = std::make_shared<const Corpus>(generate_synthetic(7, 1500));
  const auto stripped = std::make_shared<const Corpus>(raw->without_review_keywords());
  rec::Resources with = rec::Resources::build(raw);
  rec::Resources without = rec::Resources::build(stripped);
  // Hybrid members chosen on validation data must not differ either.
  const eval::Split split = eval::split_cases(*raw, 0);
  const auto validation = eval::make_test_cases(*raw, split.validation);
  with.members = eval::select_hybrid_members(with, validation).members;
  without.members = eval::select_hybrid_members(without, validation).members;
  std::size_t compared = 0, changed = 0;
  for (const rec::AlgorithmId& id : rec::AlgorithmId::all()) {
    const rec::Recommender a = rec::make_algorithm(id, with);
    const rec::Recommender b = rec::make_algorithm(id, without);
    for (const auto& [isbn, book] : raw->books()) {
      ++compared;
      changed += !(a(book, 10) == b(stripped->at(isbn), 10));
    }
  }
  Outcome o;
  o.pass = changed == 0 && with.members == without.members;
  o.detail = std::to_string(changed) + " of " + std::to_string(compared) +
             " outputs changed across 19 algorithms";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_seconds;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {"1 metric oracles", 30.0, metric_oracles},
      {"2 cross-source weighting oracle", 60.0, cross_source_oracle},
      {"3 embedding gradient and topic separation", 120.0, embedding_correctness},
      {"4 manifest determinism", 0.0, determinism},
      {"5 qualitative trends", 0.0, trends},
      {"6 ranking correlation", 0.0, ranking_correlation},
      {"7 protocol isolation", 0.0, protocol_isolation},
  };
  fs::create_directories(work_dir());
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0.0 && seconds > c.limit_seconds) {
      o.pass = false;
      o.detail += fmt(" (took %.1f s, limit %.0f s)", seconds, c.limit_seconds);
    }
    failures += !o.pass;
    std::printf("%s criterion %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  fs::remove_all(work_dir());
  return failures == 0 ? 0 : 1;
}
