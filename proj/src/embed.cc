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

#include "tagrec/embed.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

namespace tagrec::embed {
namespace {

constexpr char kMagic[8] = {'T', 'A', 'G', 'R', 'E', 'C', 'E', 'M'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr double kFinalLrFraction = 0.01;

double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// d(loss)/d(d.u) for one pair.
double pair_coefficient(double score, bool positive) {
  return sigmoid(score) - (positive ? 1.0 : 0.0);
}

double pair_loss(double score, bool positive) {
  return positive ? -log_sigmoid(score) : -log_sigmoid(-score);
}

template <bool kShared>
double load(const double* p) {
  if constexpr (kShared) {
    return std::atomic_ref<double>(*const_cast<double*>(p))
        .load(std::memory_order_relaxed);
  } else {
    return *p;
  }
}

template <bool kShared>
void add(double* p, double delta) {
  if constexpr (kShared) {
    std::atomic_ref<double>(*p).fetch_add(delta, std::memory_order_relaxed);
  } else {
    *p += delta;
  }
}

// Gradient step on one sample. rows[0] is the target, the rest are noise
// words. All coefficients are computed before anything moves, so the update
// is exactly -lr times the gradient at the current point. Returns the loss
// before the update.
template <bool kShared>
double sgd_step_impl(double* doc, double* const* rows, std::size_t n_rows,
                     std::size_t dim, double lr, bool update_words,
                     std::vector<double>& grad_doc,
                     std::vector<double>& coefficients) {
  grad_doc.assign(dim, 0.0);
  coefficients.resize(n_rows);
  double loss = 0.0;
  for (std::size_t r = 0; r < n_rows; ++r) {
    const double* u = rows[r];
    double score = 0.0;
    for (std::size_t j = 0; j < dim; ++j) score += doc[j] * load<kShared>(u + j);
    const bool positive = r == 0;
    loss += pair_loss(score, positive);
    const double c = pair_coefficient(score, positive);
    coefficients[r] = c;
    for (std::size_t j = 0; j < dim; ++j) grad_doc[j] += c * load<kShared>(u + j);
  }
  if (update_words) {
    for (std::size_t r = 0; r < n_rows; ++r) {
      const double step = -lr * coefficients[r];
      for (std::size_t j = 0; j < dim; ++j) add<kShared>(rows[r] + j, step * doc[j]);
    }
  }
  for (std::size_t j = 0; j < dim; ++j) doc[j] -= lr * grad_doc[j];
  return loss;
}

double learning_rate(double lr0, std::size_t step, std::size_t total) {
  const double progress =
      total == 0 ? 0.0 : static_cast<double>(step) / static_cast<double>(total);
  return lr0 * (1.0 - (1.0 - kFinalLrFraction) * progress);
}

bool all_finite(const double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(v[i])) return false;
  }
  return true;
}

// Little-endian primitives for the artifact.
void put_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void put_string(std::ostream& out, const std::string& s) {
  put_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) {
    throw DataError("embedding artifact truncated");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

std::string get_string(std::istream& in) {
  const std::uint64_t n = get_u64(in);
  if (n > (1u << 20)) throw DataError("embedding artifact: string too long");
  std::string s(n, '\0');
  if (!in.read(s.data(), static_cast<std::streamsize>(n))) {
    throw DataError("embedding artifact truncated");
  }
  return s;
}

void check_finite_or_throw(const double* v, std::size_t n, double loss,
                           std::string_view where, double lr) {
  if (!std::isfinite(loss) || !all_finite(v, n)) {
    throw NumericError("non-finite value during " + std::string(where) +
                       " (learning rate " + std::to_string(lr) +
                       " is too high for this corpus)");
  }
}

}  // namespace

void EmbeddingParams::validate() const {
  if (dim == 0) throw ConfigError("embedding dim must be >= 1");
  if (epochs == 0) throw ConfigError("embedding epochs must be >= 1");
  if (!(lr0 > 0.0) || !std::isfinite(lr0)) {
    throw ConfigError("embedding lr must be positive");
  }
  if (min_count == 0) throw ConfigError("embedding min_count must be >= 1");
  if (!(sample >= 0.0)) throw ConfigError("embedding sample must be >= 0");
  if (threads == 0) throw ConfigError("embedding threads must be >= 1");
}

TrainingCorpus build_training_corpus(const Corpus& corpus,
                                     const text::PreprocessConfig& config) {
  TrainingCorpus out;
  for (const auto& [isbn, book] : corpus.books()) {
    std::string content = book.description;
    content += ' ';
    content += book.title;
    for (const std::string& t : book.editor_tags) (content += ' ') += t;
    for (const std::string& t : book.search_terms) (content += ' ') += t;
    text::TokenStream tokens = text::preprocess(content, config);
    if (tokens.empty()) {
      out.skipped.push_back(isbn);
    } else {
      out.docs.push_back({isbn, std::move(tokens)});
    }
  }
  if (out.docs.empty()) {
    throw DataError("no book has any text to train embeddings on");
  }
  return out;
}

void EmbeddingModel::build_vocab(const std::vector<TrainingDoc>& docs) {
  std::unordered_map<std::string, std::size_t> freq;
  for (const TrainingDoc& doc : docs) {
    for (const std::string& t : doc.tokens) ++freq[t];
  }
  std::vector<std::pair<std::string, std::size_t>> entries;
  for (auto& [token, count] : freq) {
    if (count >= params_.min_count) entries.emplace_back(token, count);
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  words_.clear();
  counts_.clear();
  word_ids_.clear();
  for (auto& [token, count] : entries) {
    word_ids_.emplace(token, words_.size());
    words_.push_back(token);
    counts_.push_back(count);
  }
  noise_cdf_.resize(words_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    total += std::pow(static_cast<double>(counts_[i]), 0.75);
    noise_cdf_[i] = total;
  }
  for (double& c : noise_cdf_) c /= total;
}

std::size_t EmbeddingModel::sample_noise(Rng& rng) const {
  const auto it = std::upper_bound(noise_cdf_.begin(), noise_cdf_.end(), rng.uniform());
  return std::min<std::size_t>(it - noise_cdf_.begin(), noise_cdf_.size() - 1);
}

std::optional<std::size_t> EmbeddingModel::word_index(std::string_view token) const {
  const auto it = word_ids_.find(std::string(token));
  if (it == word_ids_.end()) return std::nullopt;
  return it->second;
}

const Vector& EmbeddingModel::doc_vector(std::string_view isbn) const {
  const auto it = doc_vectors_.find(isbn);
  if (it == doc_vectors_.end()) {
    throw LookupError("no document vector for isbn " + std::string(isbn));
  }
  return it->second;
}

EmbeddingModel EmbeddingModel::train(const std::vector<TrainingDoc>& docs,
                                     const EmbeddingParams& params) {
  params.validate();
  if (docs.size() < 2) {
    throw ConfigError("embedding training needs at least two documents");
  }
  EmbeddingModel model;
  model.params_ = params;
  model.build_vocab(docs);
  if (model.words_.empty()) throw DataError("embedding vocabulary is empty");

  const std::size_t dim = params.dim;
  model.word_out_.assign(model.words_.size() * dim, 0.0);

  Rng init_rng(params.seed);
  const double bound = 0.5 / static_cast<double>(dim);
  std::vector<Vector> vectors(docs.size(), Vector(dim));
  for (Vector& v : vectors) {
    for (double& x : v) x = init_rng.uniform(-bound, bound);
  }

  // Token ids per document; out-of-vocabulary tokens (min_count) dropped.
  std::vector<std::vector<std::size_t>> ids(docs.size());
  std::size_t total_tokens = 0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const std::string& t : docs[d].tokens) {
      const auto it = model.word_ids_.find(t);
      if (it != model.word_ids_.end()) ids[d].push_back(it->second);
    }
    total_tokens += ids[d].size();
  }

  // word2vec keep probability for frequent-word subsampling.
  std::vector<double> keep(model.words_.size(), 1.0);
  if (params.sample > 0.0) {
    const double threshold = params.sample * static_cast<double>(total_tokens);
    for (std::size_t i = 0; i < keep.size(); ++i) {
      const double f = static_cast<double>(model.counts_[i]);
      keep[i] = std::min(1.0, (std::sqrt(f / threshold) + 1.0) * threshold / f);
    }
  }

  const std::size_t n_threads = std::min(params.threads, docs.size());
  std::vector<std::vector<double>> loss_sums(n_threads,
                                             std::vector<double>(params.epochs, 0.0));
  std::vector<std::vector<std::size_t>> loss_counts(
      n_threads, std::vector<std::size_t>(params.epochs, 0));

  const auto worker = [&]<bool kShared>(std::size_t thread_id) {
    Rng rng(thread_id == 0 ? params.seed + 1
                           : params.seed + 1 + 0x9E3779B97F4A7C15ULL * thread_id);
    std::size_t local_tokens = 0;
    for (std::size_t d = thread_id; d < docs.size(); d += n_threads) {
      local_tokens += ids[d].size();
    }
    const std::size_t total_steps = local_tokens * params.epochs;
    std::size_t step = 0;
    std::vector<double*> rows;
    std::vector<double> grad_doc;
    std::vector<double> coefficients;
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
      for (std::size_t d = thread_id; d < docs.size(); d += n_threads) {
        double* doc = vectors[d].data();
        double doc_loss = 0.0;
        double lr = params.lr0;
        for (std::size_t target : ids[d]) {
          lr = learning_rate(params.lr0, step++, total_steps);
          if (keep[target] < 1.0 && rng.uniform() >= keep[target]) continue;
          rows.assign(1, model.word_out_.data() + target * dim);
          for (std::size_t k = 0; k < params.negative; ++k) {
            const std::size_t noise = model.sample_noise(rng);
            if (noise == target) continue;
            rows.push_back(model.word_out_.data() + noise * dim);
          }
          doc_loss += sgd_step_impl<kShared>(doc, rows.data(), rows.size(), dim, lr,
                                             true, grad_doc, coefficients);
          ++loss_counts[thread_id][epoch];
        }
        check_finite_or_throw(doc, dim, doc_loss, "embedding training", lr);
        loss_sums[thread_id][epoch] += doc_loss;
      }
    }
  };

  if (n_threads == 1) {
    worker.operator()<false>(0);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          worker.template operator()<true>(t);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  if (!all_finite(model.word_out_.data(), model.word_out_.size())) {
    throw NumericError("non-finite word vectors after training");
  }

  model.epoch_losses_.assign(params.epochs, 0.0);
  for (std::size_t e = 0; e < params.epochs; ++e) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t < n_threads; ++t) {
      sum += loss_sums[t][e];
      count += loss_counts[t][e];
    }
    model.epoch_losses_[e] = count == 0 ? 0.0 : sum / static_cast<double>(count);
  }
  for (std::size_t d = 0; d < docs.size(); ++d) {
    model.doc_vectors_[docs[d].isbn] = std::move(vectors[d]);
  }
  return model;
}

InferenceResult EmbeddingModel::infer(const text::TokenStream& tokens,
                                      std::size_t epochs,
                                      std::uint64_t seed) const {
  const std::size_t dim = params_.dim;
  InferenceResult result;
  std::vector<std::size_t> ids;
  for (const std::string& t : tokens) {
    const auto it = word_ids_.find(t);
    if (it != word_ids_.end()) ids.push_back(it->second);
  }
  if (ids.empty()) {
    result.vector.assign(dim, 0.0);
    result.all_oov = true;
    return result;
  }
  Rng rng(seed);
  const double bound = 0.5 / static_cast<double>(dim);
  result.vector.resize(dim);
  for (double& x : result.vector) x = rng.uniform(-bound, bound);

  const std::size_t total_steps = epochs * ids.size();
  std::size_t step = 0;
  std::vector<double*> rows;
  std::vector<double> grad_doc;
  std::vector<double> coefficients;
  // Rows are never written with update_words == false.
  double* out = const_cast<double*>(word_out_.data());
  double loss = 0.0;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    for (std::size_t target : ids) {
      const double lr = learning_rate(params_.lr0, step++, total_steps);
      rows.assign(1, out + target * dim);
      for (std::size_t k = 0; k < params_.negative; ++k) {
        const std::size_t noise = sample_noise(rng);
        if (noise == target) continue;
        rows.push_back(out + noise * dim);
      }
      loss = sgd_step_impl<false>(result.vector.data(), rows.data(), rows.size(),
                                  dim, lr, false, grad_doc, coefficients);
    }
  }
  check_finite_or_throw(result.vector.data(), dim, loss, "inference", params_.lr0);
  return result;
}

void EmbeddingModel::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  put_u64(out, kFormatVersion);
  put_u64(out, params_.dim);
  put_u64(out, params_.negative);
  put_f64(out, params_.lr0);
  put_u64(out, params_.epochs);
  put_u64(out, params_.seed);
  put_u64(out, params_.infer_epochs);
  put_u64(out, params_.min_count);
  put_f64(out, params_.sample);
  put_u64(out, params_.threads);
  put_u64(out, words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    put_string(out, words_[i]);
    put_u64(out, counts_[i]);
  }
  for (double x : word_out_) put_f64(out, x);
  put_u64(out, doc_vectors_.size());
  for (const auto& [isbn, v] : doc_vectors_) {
    put_string(out, isbn);
    for (double x : v) put_f64(out, x);
  }
  put_u64(out, epoch_losses_.size());
  for (double x : epoch_losses_) put_f64(out, x);
}

void EmbeddingModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write embedding model: " + path);
  save(out);
  if (!out) throw DataError("failed writing embedding model: " + path);
}

EmbeddingModel EmbeddingModel::load(std::istream& in) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("not a tagrec embedding artifact");
  }
  const std::uint64_t version = get_u64(in);
  if (version != kFormatVersion) {
    throw DataError("unsupported embedding artifact version " +
                    std::to_string(version));
  }
  EmbeddingModel model;
  EmbeddingParams& p = model.params_;
  p.dim = get_u64(in);
  p.negative = get_u64(in);
  p.lr0 = get_f64(in);
  p.epochs = get_u64(in);
  p.seed = get_u64(in);
  p.infer_epochs = get_u64(in);
  p.min_count = get_u64(in);
  p.sample = get_f64(in);
  p.threads = get_u64(in);
  p.validate();
  const std::uint64_t n_words = get_u64(in);
  for (std::uint64_t i = 0; i < n_words; ++i) {
    std::string word = get_string(in);
    const std::uint64_t count = get_u64(in);
    model.word_ids_.emplace(word, model.words_.size());
    model.words_.push_back(std::move(word));
    model.counts_.push_back(count);
  }
  double total = 0.0;
  model.noise_cdf_.resize(n_words);
  for (std::size_t i = 0; i < n_words; ++i) {
    total += std::pow(static_cast<double>(model.counts_[i]), 0.75);
    model.noise_cdf_[i] = total;
  }
  for (double& c : model.noise_cdf_) c /= total;
  model.word_out_.resize(n_words * p.dim);
  for (double& x : model.word_out_) x = get_f64(in);
  const std::uint64_t n_docs = get_u64(in);
  for (std::uint64_t d = 0; d < n_docs; ++d) {
    std::string isbn = get_string(in);
    Vector v(p.dim);
    for (double& x : v) x = get_f64(in);
    model.doc_vectors_.emplace(std::move(isbn), std::move(v));
  }
  const std::uint64_t n_losses = get_u64(in);
  if (n_losses > p.epochs) throw DataError("embedding artifact: bad loss count");
  model.epoch_losses_.resize(n_losses);
  for (double& x : model.epoch_losses_) x = get_f64(in);
  return model;
}

EmbeddingModel EmbeddingModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embedding model: " + path);
  return load(in);
}

std::string EmbeddingModel::digest() const {
  std::ostringstream out;
  save(out);
  return to_hex(fnv1a64(out.str()));
}

double negative_sampling_loss(
    std::span<const double> doc, std::span<const double> target,
    const std::vector<std::span<const double>>& negatives) {
  const auto score = [&](std::span<const double> u) {
    double s = 0.0;
    for (std::size_t j = 0; j < doc.size(); ++j) s += doc[j] * u[j];
    return s;
  };
  double loss = pair_loss(score(target), true);
  for (const auto& u : negatives) loss += pair_loss(score(u), false);
  return loss;
}

NegativeSamplingGradient negative_sampling_gradient(
    std::span<const double> doc, std::span<const double> target,
    const std::vector<std::span<const double>>& negatives) {
  const std::size_t dim = doc.size();
  NegativeSamplingGradient g;
  g.doc.assign(dim, 0.0);
  const auto accumulate = [&](std::span<const double> u, bool positive) {
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) s += doc[j] * u[j];
    const double c = pair_coefficient(s, positive);
    Vector grad_u(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      g.doc[j] += c * u[j];
      grad_u[j] = c * doc[j];
    }
    return grad_u;
  };
  g.target = accumulate(target, true);
  for (const auto& u : negatives) g.negatives.push_back(accumulate(u, false));
  return g;
}

double sgd_step(std::span<double> doc, std::span<double> target,
                const std::vector<std::span<double>>& negatives, double lr) {
  std::vector<double*> rows;
  rows.push_back(target.data());
  for (const auto& u : negatives) rows.push_back(u.data());
  std::vector<double> grad_doc;
  std::vector<double> coefficients;
  return sgd_step_impl<false>(doc.data(), rows.data(), rows.size(), doc.size(), lr,
                              true, grad_doc, coefficients);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ConfigError("cosine: vector lengths differ (" + std::to_string(a.size()) +
                      " vs " + std::to_string(b.size()) + ")");
  }
  double ab = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  const double c = ab / std::sqrt(aa * bb);
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace tagrec::embed
