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

#ifndef TAGREC_SYNTHETIC_H_
#define TAGREC_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>

#include "tagrec/corpus.h"

namespace tagrec {

// Parameters of the topic-clustered corpus generator. Defaults follow the
// shape of the production annotation data: editor tags on ~70% of books,
// search terms on ~31%, and a deliberately tiny overlap of both.
struct SyntheticProfile {
  std::size_t n_topics = 25;

  // Fractions of books carrying each annotation source. Exact counts are
  // round(fraction * n_books).
  double editor_fraction = 0.70;
  double amazon_fraction = 0.31;
  double both_fraction = 0.01;
  double review_fraction = 0.20;

  double books_per_author = 2.8;
  // Author/BISAC coverage for books with and without editor tags.
  double editor_author_rate = 0.97;
  double other_author_rate = 0.10;
  double editor_bisac_rate = 0.90;
  double other_bisac_rate = 0.0238;

  // Vocabulary sizes. Search terms draw from a broader, flatter vocabulary
  // than editor tags.
  std::size_t topic_title_words = 30;
  std::size_t topic_description_words = 60;
  std::size_t generic_description_words = 150;
  std::size_t topic_editor_tags = 20;
  std::size_t generic_editor_tags = 10;
  std::size_t topic_search_terms = 60;
  std::size_t generic_search_terms = 150;
  std::size_t opinion_words = 40;

  // Per-book list lengths, inclusive ranges.
  std::size_t description_words_min = 60;
  std::size_t description_words_max = 140;
  std::size_t editor_tags_min = 3;
  std::size_t editor_tags_max = 7;
  std::size_t search_terms_min = 2;
  std::size_t search_terms_max = 6;
  std::size_t review_keywords_min = 10;
  std::size_t review_keywords_max = 20;

  // Probability that a search term is a fragment of the book's own title.
  double title_term_rate = 0.30;

  // Author-specific tags (series and character names) per author.
  std::size_t author_signature_tags = 3;

  // Review keyword mix; the remainder are opinion words.
  double review_author_rate = 0.35;
  double review_editor_rate = 0.20;
  double review_search_rate = 0.20;
  double review_title_rate = 0.10;

  // Throws ConfigError naming the offending parameter.
  void validate() const;
};

// Deterministic for a given (seed, n_books, profile). Throws ConfigError on
// n_books == 0 or an invalid profile.
Corpus generate_synthetic(std::uint64_t seed, std::size_t n_books,
                          const SyntheticProfile& profile = {});

}  // namespace tagrec

#endif  // TAGREC_SYNTHETIC_H_
