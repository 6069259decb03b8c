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

#include "tagrec/synthetic.h"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <string>
#include <unordered_set>
#include <vector>

#include "tagrec/common.h"
#include "tagrec/text.h"

namespace tagrec {
namespace {

// Rank-frequency sampler: P(rank r) proportional to 1 / (r + 1)^exponent.
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double exponent) : cumulative_(n) {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      total += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
      cumulative_[r] = total;
    }
    for (double& c : cumulative_) c /= total;
  }

  std::size_t operator()(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(it - cumulative_.begin(), cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

// Produces pronounceable, globally unique pseudo-words.
class WordFactory {
 public:
  explicit WordFactory(Rng& rng) : rng_(rng) {
    for (const std::string& w : text::default_stopwords()) used_.insert(w);
  }

  std::string make(std::size_t min_length = 5) {
    static constexpr const char* kOnsets[] = {
        "b", "br", "d", "dr", "f", "g", "gr", "h", "k", "kl", "l", "m", "n",
        "p", "pr", "r", "s", "sch", "st", "t", "tr", "v", "w", "z"};
    static constexpr const char* kVowels[] = {"a", "e", "i", "o", "u", "au",
                                              "ei", "ie", "ä", "ö", "ü"};
    static constexpr const char* kCodas[] = {"", "", "n", "r", "l", "s", "nd",
                                             "rt", "ck", "ng"};
    while (true) {
      std::string word;
      const std::size_t syllables = 2 + rng_.index(2);
      for (std::size_t s = 0; s < syllables; ++s) {
        word += kOnsets[rng_.index(std::size(kOnsets))];
        word += kVowels[rng_.index(std::size(kVowels))];
        if (s + 1 == syllables) word += kCodas[rng_.index(std::size(kCodas))];
      }
      if (text::codepoint_length(word) < min_length) continue;
      if (used_.insert(word).second) return word;
    }
  }

  std::vector<std::string> make_many(std::size_t n) {
    std::vector<std::string> words;
    words.reserve(n);
    for (std::size_t i = 0; i < n; ++i) words.push_back(make());
    return words;
  }

 private:
  Rng& rng_;
  std::unordered_set<std::string> used_;
};

struct Topic {
  std::vector<std::string> title_words;
  std::vector<std::string> description_words;
  std::vector<std::string> editor_tags;
  std::vector<std::string> search_terms;
  std::vector<std::string> bisacs;
};

struct Author {
  std::string name;
  std::size_t topic = 0;
  std::vector<std::string> signature_tags;
  std::vector<std::string> signature_words;
};

std::string capitalize(std::string word) {
  if (!word.empty() && word[0] >= 'a' && word[0] <= 'z') word[0] -= 32;
  return word;
}

std::string isbn13(std::size_t serial) {
  std::string digits = "978" + std::to_string(100000000 + serial % 900000000);
  int sum = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    sum += (digits[i] - '0') * (i % 2 == 0 ? 1 : 3);
  }
  digits.push_back(static_cast<char>('0' + (10 - sum % 10) % 10));
  return digits;
}

std::size_t draw_count(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + rng.index(hi - lo + 1);
}

void check_fraction(const char* name, double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ConfigError(std::string("synthetic profile: ") + name +
                      " must lie in [0, 1], got " + std::to_string(value));
  }
}

void check_positive(const char* name, std::size_t value) {
  if (value == 0) {
    throw ConfigError(std::string("synthetic profile: ") + name +
                      " must be positive");
  }
}

void check_range(const char* name, std::size_t lo, std::size_t hi) {
  if (lo > hi) {
    throw ConfigError(std::string("synthetic profile: ") + name +
                      " minimum exceeds maximum");
  }
}

}  // namespace

void SyntheticProfile::validate() const {
  check_fraction("editor_fraction", editor_fraction);
  check_fraction("amazon_fraction", amazon_fraction);
  check_fraction("both_fraction", both_fraction);
  check_fraction("review_fraction", review_fraction);
  check_fraction("editor_author_rate", editor_author_rate);
  check_fraction("other_author_rate", other_author_rate);
  check_fraction("editor_bisac_rate", editor_bisac_rate);
  check_fraction("other_bisac_rate", other_bisac_rate);
  check_fraction("title_term_rate", title_term_rate);
  if (both_fraction > std::min(editor_fraction, amazon_fraction)) {
    throw ConfigError(
        "synthetic profile: both_fraction exceeds editor_fraction or "
        "amazon_fraction");
  }
  if (editor_fraction + amazon_fraction - both_fraction > 1.0 + 1e-12) {
    throw ConfigError(
        "synthetic profile: editor_fraction + amazon_fraction - both_fraction "
        "exceeds 1");
  }
  if (!(books_per_author >= 1.0)) {
    throw ConfigError("synthetic profile: books_per_author must be >= 1");
  }
  check_positive("n_topics", n_topics);
  check_positive("topic_title_words", topic_title_words);
  check_positive("topic_description_words", topic_description_words);
  check_positive("generic_description_words", generic_description_words);
  check_positive("topic_editor_tags", topic_editor_tags);
  check_positive("generic_editor_tags", generic_editor_tags);
  check_positive("topic_search_terms", topic_search_terms);
  check_positive("generic_search_terms", generic_search_terms);
  check_positive("opinion_words", opinion_words);
  check_positive("author_signature_tags", author_signature_tags);
  check_fraction("review_author_rate", review_author_rate);
  check_fraction("review_editor_rate", review_editor_rate);
  check_fraction("review_search_rate", review_search_rate);
  check_fraction("review_title_rate", review_title_rate);
  if (review_author_rate + review_editor_rate + review_search_rate +
          review_title_rate > 1.0 + 1e-12) {
    throw ConfigError("synthetic profile: review keyword rates sum to more than 1");
  }
  check_range("description_words", description_words_min, description_words_max);
  check_range("editor_tags", editor_tags_min, editor_tags_max);
  check_range("search_terms", search_terms_min, search_terms_max);
  check_range("review_keywords", review_keywords_min, review_keywords_max);
}

Corpus generate_synthetic(std::uint64_t seed, std::size_t n_books,
                          const SyntheticProfile& profile) {
  if (n_books == 0) throw ConfigError("synthetic corpus needs n_books >= 1");
  profile.validate();

  Rng rng(seed);
  WordFactory words(rng);

  std::vector<Topic> topics(profile.n_topics);
  for (std::size_t t = 0; t < topics.size(); ++t) {
    Topic& topic = topics[t];
    topic.title_words = words.make_many(profile.topic_title_words);
    topic.description_words = words.make_many(profile.topic_description_words);
    topic.editor_tags = words.make_many(profile.topic_editor_tags);
    topic.search_terms = words.make_many(profile.topic_search_terms);
    // A quarter of the search vocabulary are two-word queries.
    for (std::size_t i = 0; i < topic.search_terms.size(); i += 4) {
      topic.search_terms[i] += " " + topic.title_words[rng.index(topic.title_words.size())];
    }
    for (std::size_t b = 0; b < 3; ++b) {
      char code[48];
      std::snprintf(code, sizeof(code), "FIC%03zu%03zu", t + 1, b * 10);
      topic.bisacs.emplace_back(code);
    }
  }
  const std::vector<std::string> generic_description =
      words.make_many(profile.generic_description_words);
  const std::vector<std::string> generic_editor =
      words.make_many(profile.generic_editor_tags);
  const std::vector<std::string> generic_search =
      words.make_many(profile.generic_search_terms);
  const std::vector<std::string> opinions = words.make_many(profile.opinion_words);
  static constexpr const char* kFiller[] = {"the", "and", "of",  "a",   "with",
                                            "der", "die", "und", "ein", "mit"};

  const ZipfSampler title_zipf(profile.topic_title_words, 1.0);
  const ZipfSampler description_zipf(profile.topic_description_words, 0.9);
  const ZipfSampler generic_description_zipf(profile.generic_description_words, 1.0);
  const ZipfSampler editor_zipf(profile.topic_editor_tags, 1.1);
  const ZipfSampler generic_editor_zipf(profile.generic_editor_tags, 1.0);
  const ZipfSampler search_zipf(profile.topic_search_terms, 0.5);
  const ZipfSampler generic_search_zipf(profile.generic_search_terms, 0.6);
  const ZipfSampler opinion_zipf(profile.opinion_words, 1.0);

  const auto n_authors = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(
             static_cast<double>(n_books) / profile.books_per_author)));
  std::vector<Author> authors(n_authors);
  for (std::size_t a = 0; a < n_authors; ++a) {
    Author& author = authors[a];
    author.name = capitalize(words.make()) + " " + capitalize(words.make());
    author.topic = a % topics.size();
    const Topic& topic = topics[author.topic];
    author.signature_tags = words.make_many(profile.author_signature_tags);
    author.signature_words = {words.make(), words.make()};
  }

  // Exact source assignment: both, editor-only, amazon-only, neither.
  const auto count_of = [&](double fraction) {
    return static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(n_books)));
  };
  const std::size_t n_both = count_of(profile.both_fraction);
  const std::size_t n_editor =
      std::max(count_of(profile.editor_fraction), n_both);
  const std::size_t n_amazon =
      std::max(count_of(profile.amazon_fraction), n_both);
  enum Role : int { kBoth, kEditorOnly, kAmazonOnly, kNeither };
  std::vector<int> roles;
  roles.reserve(n_books);
  roles.insert(roles.end(), std::min(n_both, n_books), kBoth);
  roles.insert(roles.end(), std::min(n_editor - n_both, n_books - roles.size()),
               kEditorOnly);
  roles.insert(roles.end(), std::min(n_amazon - n_both, n_books - roles.size()),
               kAmazonOnly);
  roles.resize(n_books, kNeither);
  rng.shuffle(roles);

  std::vector<char> reviewed(n_books, 0);
  std::fill_n(reviewed.begin(),
              std::min(n_books, count_of(profile.review_fraction)), 1);
  rng.shuffle(reviewed);

  std::vector<EBook> books;
  books.reserve(n_books);
  for (std::size_t i = 0; i < n_books; ++i) {
    const bool has_editor = roles[i] == kBoth || roles[i] == kEditorOnly;
    const bool has_amazon = roles[i] == kBoth || roles[i] == kAmazonOnly;

    EBook book;
    book.isbn = isbn13(i);

    const Author* author = nullptr;
    std::size_t topic_id = rng.index(topics.size());
    if (rng.bernoulli(has_editor ? profile.editor_author_rate
                                 : profile.other_author_rate)) {
      author = &authors[rng.index(authors.size())];
      topic_id = author->topic;
      book.authors.push_back(author->name);
      if (rng.bernoulli(0.05)) {
        const Author& co = authors[rng.index(authors.size())];
        if (co.topic == topic_id) book.authors.push_back(co.name);
      }
    }
    const Topic& topic = topics[topic_id];
    if (rng.bernoulli(has_editor ? profile.editor_bisac_rate
                                 : profile.other_bisac_rate)) {
      book.bisacs.push_back(topic.bisacs[rng.index(topic.bisacs.size())]);
      if (rng.bernoulli(0.3)) {
        book.bisacs.push_back(topic.bisacs[rng.index(topic.bisacs.size())]);
      }
    }

    std::vector<std::string> title_words;
    const std::size_t title_len = draw_count(rng, 2, 4);
    for (std::size_t w = 0; w < title_len; ++w) {
      title_words.push_back(topic.title_words[title_zipf(rng)]);
    }
    book.title = (rng.bernoulli(0.3) ? "The " : "");
    for (std::size_t w = 0; w < title_words.size(); ++w) {
      if (w > 0) book.title += ' ';
      book.title += capitalize(title_words[w]);
    }

    const std::size_t description_len = draw_count(rng, profile.description_words_min,
                                                  profile.description_words_max);
    for (std::size_t w = 0; w < description_len; ++w) {
      const double u = rng.uniform();
      std::string word;
      if (author != nullptr && u < 0.06) {
        word = capitalize(author->signature_words[rng.index(2)]);
      } else if (u < 0.62) {
        word = topic.description_words[description_zipf(rng)];
      } else if (u < 0.85) {
        word = generic_description[generic_description_zipf(rng)];
      } else {
        word = kFiller[rng.index(std::size(kFiller))];
      }
      if (w == 0) word = capitalize(word);
      book.description += word;
      book.description += (w + 1 == description_len) ? "." : (w % 9 == 8 ? ", " : " ");
    }

    if (has_editor) {
      const std::size_t n = draw_count(rng, profile.editor_tags_min,
                                       profile.editor_tags_max);
      for (std::size_t k = 0; k < n; ++k) {
        const double u = rng.uniform();
        if (author != nullptr && u < 0.35) {
          book.editor_tags.push_back(author->signature_tags[rng.index(author->signature_tags.size())]);
        } else if (u < 0.85) {
          book.editor_tags.push_back(topic.editor_tags[editor_zipf(rng)]);
        } else {
          book.editor_tags.push_back(generic_editor[generic_editor_zipf(rng)]);
        }
      }
    }

    if (has_amazon) {
      const std::size_t n = draw_count(rng, profile.search_terms_min,
                                       profile.search_terms_max);
      for (std::size_t k = 0; k < n; ++k) {
        const double u = rng.uniform();
        if (u < profile.title_term_rate) {
          const std::size_t start = rng.index(title_words.size());
          const std::size_t len =
              std::min<std::size_t>(1 + rng.index(2), title_words.size() - start);
          std::vector<std::string> part(title_words.begin() + start,
                                        title_words.begin() + start + len);
          book.search_terms.push_back(join(part, " "));
        } else if (u < profile.title_term_rate +
                           0.55 * (1.0 - profile.title_term_rate)) {
          book.search_terms.push_back(topic.search_terms[search_zipf(rng)]);
        } else if (u < profile.title_term_rate +
                           0.85 * (1.0 - profile.title_term_rate)) {
          // Readers also reach a book through queries from other genres.
          const Topic& other = topics[rng.index(topics.size())];
          book.search_terms.push_back(other.search_terms[search_zipf(rng)]);
        } else {
          book.search_terms.push_back(generic_search[generic_search_zipf(rng)]);
        }
      }
    }

    if (reviewed[i]) {
      const std::size_t n = draw_count(rng, profile.review_keywords_min,
                                       profile.review_keywords_max);
      for (std::size_t k = 0; k < n; ++k) {
        const double u = rng.uniform();
        const double a = profile.review_author_rate;
        const double e = a + profile.review_editor_rate;
        const double q = e + profile.review_search_rate;
        const double t = q + profile.review_title_rate;
        if (u < a && author != nullptr) {
          book.review_keywords.push_back(
              author->signature_tags[rng.index(author->signature_tags.size())]);
        } else if (u < e) {
          book.review_keywords.push_back(topic.editor_tags[editor_zipf(rng)]);
        } else if (u < q) {
          book.review_keywords.push_back(topic.search_terms[search_zipf(rng)]);
        } else if (u < t) {
          book.review_keywords.push_back(title_words[rng.index(title_words.size())]);
        } else {
          book.review_keywords.push_back(opinions[opinion_zipf(rng)]);
        }
      }
    }
    books.push_back(std::move(book));
  }
  return Corpus::from_books(std::move(books));
}

}  // namespace tagrec
