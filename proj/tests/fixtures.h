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

// Small deterministic fixtures shared by the tests.

#ifndef TAGREC_TESTS_FIXTURES_H_
#define TAGREC_TESTS_FIXTURES_H_

#include <string>
#include <vector>

#include "tagrec/common.h"
#include "tagrec/corpus.h"
#include "tagrec/embed.h"

namespace fixture {

// Pseudo-words of 5-8 lowercase letters; never stopwords.
inline std::vector<std::string> words(tagrec::Rng& rng, std::size_t n,
                                      const std::string& prefix) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string w = prefix;
    const std::size_t len = 4 + rng.index(4);
    for (std::size_t j = 0; j < len; ++j) w += static_cast<char>('a' + rng.index(26));
    out.push_back(w + std::to_string(i));
  }
  return out;
}

// Up to `max_books` books with 2 topics, random titles, descriptions and
// tags; some books lack fields entirely.
inline tagrec::Corpus random_corpus(std::uint64_t seed, std::size_t max_books = 50) {
  tagrec::Rng rng(seed);
  const std::size_t n = 5 + rng.index(max_books - 4);
  const std::vector<std::string> vocab = words(rng, 10 + rng.index(30), "w");
  const std::vector<std::string> tags = words(rng, 5 + rng.index(15), "t");
  std::vector<tagrec::EBook> books;
  for (std::size_t i = 0; i < n; ++i) {
    tagrec::EBook b;
    b.isbn = "97800000" + std::to_string(10000 + rng.index(90000));
    const std::size_t half = vocab.size() / 2;
    const std::size_t offset = rng.bernoulli(0.5) ? 0 : half;
    const auto draw = [&] { return vocab[offset + rng.index(half)]; };
    for (std::size_t w = 0, len = rng.index(5); w < len; ++w) b.title += draw() + " ";
    for (std::size_t w = 0, len = rng.index(25); w < len; ++w) {
      b.description += (rng.bernoulli(0.8) ? draw() : vocab[rng.index(vocab.size())]) + " ";
    }
    for (std::size_t t = 0, len = rng.index(5); t < len; ++t) {
      b.editor_tags.push_back(tags[rng.index(tags.size())]);
    }
    for (std::size_t t = 0, len = rng.index(4); t < len; ++t) {
      b.search_terms.push_back(tags[rng.index(tags.size())]);
    }
    if (b.title.empty()) b.title = "x";
    books.push_back(std::move(b));
  }
  return tagrec::Corpus::from_books(std::move(books));
}

// 20 documents, 10 per topic, 100 tokens each, drawn from disjoint 20-word
// vocabularies. Each document favours three of its topic's words (30% of its
// tokens) so documents of one topic are not interchangeable.
inline std::vector<tagrec::embed::TrainingDoc> two_topic_docs(std::uint64_t seed = 42) {
  tagrec::Rng rng(seed);
  const std::vector<std::string> a = words(rng, 20, "alpha");
  const std::vector<std::string> b = words(rng, 20, "beta");
  std::vector<tagrec::embed::TrainingDoc> docs;
  for (int d = 0; d < 20; ++d) {
    tagrec::embed::TrainingDoc doc;
    doc.isbn = "doc" + std::to_string(100 + d);
    const auto& vocab = d < 10 ? a : b;
    std::vector<std::string> favourites;
    for (int i = 0; i < 3; ++i) favourites.push_back(vocab[rng.index(vocab.size())]);
    for (int i = 0; i < 100; ++i) {
      doc.tokens.push_back(rng.bernoulli(0.3) ? favourites[rng.index(3)]
                                              : vocab[rng.index(vocab.size())]);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

inline bool same_topic(std::size_t i, std::size_t j) { return (i < 10) == (j < 10); }

}  // namespace fixture

#endif  // TAGREC_TESTS_FIXTURES_H_
