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

#ifndef TAGREC_TFIDF_H_
#define TAGREC_TFIDF_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tagrec/corpus.h"
#include "tagrec/text.h"

namespace tagrec {

enum class TextField { kTitle, kDescription };

std::string_view field_name(TextField field);
TextField parse_text_field(std::string_view name);

struct TfidfParams {
  std::size_t min_df = 10;
  std::size_t min_word_length = 5;
};

struct Neighbor {
  std::string isbn;
  double similarity = 0.0;

  bool operator==(const Neighbor&) const = default;
};

// Sparse vector as (term index, weight) pairs sorted by term index. Terms
// with zero weight are not stored.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

// TF-IDF vector space over one text field with exact top-N cosine search
// through an inverted index.
//
// Weights are raw term frequency times ln(N / df), N counting documents
// whose field is non-empty after preprocessing; vectors are L2-normalized,
// so cosine similarity is a plain dot product.
class TfidfIndex {
 public:
  struct Term {
    std::string token;
    std::size_t df = 0;
    double idf = 0.0;

    bool operator==(const Term&) const = default;
  };

  // Throws DataError("empty index") when no document survives the
  // preprocessing and document-frequency filters.
  static TfidfIndex build(const Corpus& corpus, TextField field,
                          const TfidfParams& params = {},
                          const text::StopwordSet& stopwords =
                              text::default_stopwords());

  TextField field() const { return field_; }
  const TfidfParams& params() const { return params_; }
  std::size_t n_documents() const { return n_documents_; }
  const std::vector<Term>& terms() const { return terms_; }
  // Term index for a token, or -1.
  std::int64_t term_id(std::string_view token) const;

  // Isbns with a stored vector (possibly empty), ascending.
  const std::vector<std::string>& isbns() const { return isbns_; }
  bool contains(std::string_view isbn) const;
  // True when `isbn` has a non-empty vector.
  bool is_queryable(std::string_view isbn) const;
  // Throws LookupError for unknown isbns.
  const SparseVector& vector(std::string_view isbn) const;

  // Top-n other documents by cosine, descending, ties by ascending isbn;
  // zero similarities are dropped. Throws LookupError when `isbn` is unknown
  // or has an empty vector.
  std::vector<Neighbor> neighbors(std::string_view isbn, std::size_t n) const;

  // JSON artifact; load(save()) reproduces the index exactly.
  std::string to_json() const;
  static TfidfIndex from_json(std::string_view json);

  bool operator==(const TfidfIndex& other) const;

 private:
  std::size_t doc_position(std::string_view isbn) const;
  void build_postings();

  TextField field_ = TextField::kDescription;
  TfidfParams params_;
  std::size_t n_documents_ = 0;
  std::vector<Term> terms_;
  std::map<std::string, std::uint32_t, std::less<>> term_ids_;
  std::vector<std::string> isbns_;
  std::vector<SparseVector> vectors_;
  // postings_[term] = (document position, weight), ascending by position.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> postings_;
};

double dot(const SparseVector& a, const SparseVector& b);

}  // namespace tagrec

#endif  // TAGREC_TFIDF_H_
