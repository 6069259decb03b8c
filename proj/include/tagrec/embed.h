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

#ifndef TAGREC_EMBED_H_
#define TAGREC_EMBED_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tagrec/common.h"
#include "tagrec/corpus.h"
#include "tagrec/text.h"

namespace tagrec::embed {

struct EmbeddingParams {
  std::size_t dim = 50;
  std::size_t negative = 10;
  double lr0 = 0.025;
  std::size_t epochs = 10;
  std::uint64_t seed = 1;
  // Passes used by infer() when the caller does not override them.
  std::size_t infer_epochs = 50;
  // Vocabulary cutoff; 1 keeps every word.
  std::size_t min_count = 1;
  // Frequent-word subsampling threshold; 0 disables it.
  double sample = 0.0;
  // 1 = deterministic single-threaded training. More threads train
  // lock-free and are not reproducible.
  std::size_t threads = 1;

  void validate() const;
  bool operator==(const EmbeddingParams&) const = default;
};

struct TrainingDoc {
  std::string isbn;
  text::TokenStream tokens;
};

struct TrainingCorpus {
  std::vector<TrainingDoc> docs;
  // Isbns of books without any text.
  std::vector<std::string> skipped;
};

// One document per book from description, title, editor tags and search
// terms (in that order), isbn order. Throws DataError when every book is
// empty.
TrainingCorpus build_training_corpus(
    const Corpus& corpus,
    const text::PreprocessConfig& config = text::default_config());

struct InferenceResult {
  Vector vector;
  // Set when no token is in the vocabulary; `vector` is then all zeros.
  bool all_oov = false;
};

// Paragraph vectors, distributed bag-of-words variant: each document vector
// is trained to predict every token of its document against `negative`
// noise words drawn from the unigram distribution raised to 0.75.
class EmbeddingModel {
 public:
  // Throws ConfigError for invalid params or fewer than two documents, and
  // NumericError when training diverges.
  static EmbeddingModel train(const std::vector<TrainingDoc>& docs,
                              const EmbeddingParams& params);

  std::size_t dim() const { return params_.dim; }
  const EmbeddingParams& params() const { return params_; }

  std::size_t vocab_size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  std::optional<std::size_t> word_index(std::string_view token) const;
  std::size_t word_count(std::size_t index) const { return counts_[index]; }
  std::span<const double> word_vector(std::size_t index) const {
    return {word_out_.data() + index * params_.dim, params_.dim};
  }

  const std::map<std::string, Vector, std::less<>>& doc_vectors() const {
    return doc_vectors_;
  }
  // Throws LookupError.
  const Vector& doc_vector(std::string_view isbn) const;

  // Mean per-target loss of each training epoch.
  const std::vector<double>& epoch_losses() const { return epoch_losses_; }

  // Fits a fresh document vector to `tokens` with the word vectors frozen.
  // Out-of-vocabulary tokens are ignored. Deterministic in (tokens, seed).
  InferenceResult infer(const text::TokenStream& tokens, std::size_t epochs,
                        std::uint64_t seed) const;
  InferenceResult infer(const text::TokenStream& tokens,
                        std::uint64_t seed) const {
    return infer(tokens, params_.infer_epochs, seed);
  }

  // Versioned little-endian binary artifact with a hyperparameter header.
  void save(std::ostream& out) const;
  void save(const std::string& path) const;
  static EmbeddingModel load(std::istream& in);
  static EmbeddingModel load(const std::string& path);

  // FNV-1a over the serialized artifact, hex encoded.
  std::string digest() const;

  bool operator==(const EmbeddingModel&) const = default;

 private:
  std::size_t sample_noise(Rng& rng) const;
  void build_vocab(const std::vector<TrainingDoc>& docs);

  EmbeddingParams params_;
  std::vector<std::string> words_;
  std::vector<std::size_t> counts_;
  std::unordered_map<std::string, std::size_t> word_ids_;
  std::vector<double> word_out_;  // vocab_size x dim, row major
  std::vector<double> noise_cdf_;
  std::map<std::string, Vector, std::less<>> doc_vectors_;
  std::vector<double> epoch_losses_;
};

// Loss of one (document, target, negatives) sample:
//   -log s(d.u_t) - sum_n log s(-d.u_n),  s = logistic sigmoid.
double negative_sampling_loss(
    std::span<const double> doc, std::span<const double> target,
    const std::vector<std::span<const double>>& negatives);

struct NegativeSamplingGradient {
  Vector doc;
  Vector target;
  std::vector<Vector> negatives;
};

// Analytic gradient of negative_sampling_loss with respect to every input
// vector. This is the update direction the trainer applies.
NegativeSamplingGradient negative_sampling_gradient(
    std::span<const double> doc, std::span<const double> target,
    const std::vector<std::span<const double>>& negatives);

// One in-place update: every input moves by -lr times its gradient at the
// current point. Returns the loss before the update. Used by train() and
// infer() through the same code path.
double sgd_step(std::span<double> doc, std::span<double> target,
                const std::vector<std::span<double>>& negatives, double lr);

// Cosine similarity; 0 when either vector is zero. Throws ConfigError on a
// length mismatch.
double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace tagrec::embed

#endif  // TAGREC_EMBED_H_
