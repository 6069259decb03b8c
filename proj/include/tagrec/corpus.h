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

#ifndef TAGREC_CORPUS_H_
#define TAGREC_CORPUS_H_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tagrec {

// The two annotation vocabularies recommenders are trained on.
enum class Source { kEditor, kAmazon };

std::string_view source_name(Source source);

struct EBook {
  std::string isbn;
  std::string title;
  std::string description;
  std::vector<std::string> authors;
  std::vector<std::string> bisacs;
  std::vector<std::string> editor_tags;
  std::vector<std::string> search_terms;
  // Evaluation ground truth. Never read by any recommender.
  std::vector<std::string> review_keywords;

  const std::vector<std::string>& tags(Source source) const {
    return source == Source::kEditor ? editor_tags : search_terms;
  }

  bool operator==(const EBook&) const = default;
};

using IsbnSet = std::set<std::string, std::less<>>;
using AttributeIndex = std::map<std::string, IsbnSet, std::less<>>;
using TagCounts = std::map<std::string, std::size_t, std::less<>>;

// Immutable, validated collection of e-books keyed and ordered by isbn.
class Corpus {
 public:
  Corpus() = default;

  // Normalizes every book (tags through text::normalize_tag, whitespace
  // trimming of identifiers), drops empty and duplicate list entries, and
  // merges records sharing an isbn by unioning their lists. A title conflict
  // keeps the first title and appends a message to `warnings` when given.
  // Throws DataError on an empty isbn.
  static Corpus from_books(std::vector<EBook> books,
                           std::vector<std::string>* warnings = nullptr);

  const std::map<std::string, EBook, std::less<>>& books() const {
    return books_;
  }
  std::size_t size() const { return books_.size(); }
  bool empty() const { return books_.empty(); }

  const EBook* find(std::string_view isbn) const;
  // Throws LookupError for an unknown isbn.
  const EBook& at(std::string_view isbn) const;

  const AttributeIndex& author_index() const { return author_index_; }
  const AttributeIndex& bisac_index() const { return bisac_index_; }

  // Number of (book, tag) assignments per distinct tag.
  const TagCounts& tag_counts(Source source) const {
    return source == Source::kEditor ? editor_counts_ : amazon_counts_;
  }

  // Same corpus with every review keyword removed; this is the view all
  // recommender resources are built from.
  Corpus without_review_keywords() const;

  bool operator==(const Corpus& other) const { return books_ == other.books_; }

 private:
  void build_indices();

  std::map<std::string, EBook, std::less<>> books_;
  AttributeIndex author_index_;
  AttributeIndex bisac_index_;
  TagCounts editor_counts_;
  TagCounts amazon_counts_;
};

enum class CorpusFormat { kJsonl, kCsv };

// Accepts "jsonl" or "csv"; throws ConfigError otherwise.
CorpusFormat parse_corpus_format(std::string_view name);

struct IngestResult {
  Corpus corpus;
  std::vector<std::string> warnings;
};

// Reads one EBook per JSONL line (blank lines skipped) or per CSV record
// (header row required, multi-value cells separated by ';'). Every record
// needs an isbn and a title; other fields default to empty. Malformed
// records raise DataError naming the 1-based line number.
IngestResult ingest(const std::string& path, CorpusFormat format);
IngestResult parse_jsonl(std::istream& in);
IngestResult parse_csv(std::istream& in);

// Canonical serializations, books in isbn order.
void write_jsonl(const Corpus& corpus, std::ostream& out);
void write_csv(const Corpus& corpus, std::ostream& out);
std::string to_jsonl(const Corpus& corpus);

struct CorpusStats {
  std::size_t n_books = 0;
  std::size_t n_with_editor_tags = 0;
  std::size_t n_with_search_terms = 0;
  std::size_t n_with_both = 0;
  std::size_t n_authors = 0;
  std::size_t n_bisacs = 0;
  std::size_t n_distinct_editor_tags = 0;
  std::size_t n_distinct_search_terms = 0;
  std::size_t n_with_review_keywords = 0;
  std::size_t n_distinct_review_keywords = 0;
  double avg_review_keywords_per_book = 0.0;
  // Share of search-term assignments whose tokens occur as a contiguous
  // token run inside the same book's preprocessed title.
  double title_overlap_fraction = 0.0;

  bool operator==(const CorpusStats&) const = default;
};

CorpusStats compute_stats(const Corpus& corpus);

// True when `needle` is a non-empty contiguous run of `haystack`.
bool contains_token_run(const std::vector<std::string>& haystack,
                        const std::vector<std::string>& needle);

}  // namespace tagrec

#endif  // TAGREC_CORPUS_H_
