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

#include "tagrec/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "tagrec/common.h"
#include "tagrec/text.h"

namespace tagrec {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr const char* kFields[] = {"isbn",        "title",        "description",
                                   "authors",     "bisacs",       "editor_tags",
                                   "search_terms", "review_keywords"};

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : trim(s)) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

// Applies `clean` to each entry, dropping empties and repeats while keeping
// first-occurrence order.
template <typename Clean>
std::vector<std::string> clean_list(const std::vector<std::string>& in,
                                    Clean clean) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const std::string& raw : in) {
    std::string v = clean(raw);
    if (v.empty() || !seen.insert(v).second) continue;
    out.push_back(std::move(v));
  }
  return out;
}

void append_unique(std::vector<std::string>& into,
                   const std::vector<std::string>& from) {
  for (const std::string& v : from) {
    if (std::find(into.begin(), into.end(), v) == into.end()) into.push_back(v);
  }
}

EBook normalize(EBook book) {
  const auto tag = [](const std::string& s) { return text::normalize_tag(s); };
  const auto name = [](const std::string& s) { return collapse_spaces(s); };
  book.isbn = trim(book.isbn);
  book.title = collapse_spaces(book.title);
  book.description = trim(book.description);
  book.authors = clean_list(book.authors, name);
  book.bisacs = clean_list(book.bisacs, name);
  book.editor_tags = clean_list(book.editor_tags, tag);
  book.search_terms = clean_list(book.search_terms, tag);
  book.review_keywords = clean_list(book.review_keywords, tag);
  return book;
}

std::string line_error(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

std::vector<std::string> json_string_list(const json& record,
                                          const char* field,
                                          std::size_t line) {
  std::vector<std::string> out;
  const auto it = record.find(field);
  if (it == record.end() || it->is_null()) return out;
  if (!it->is_array()) {
    throw DataError(line_error(line, std::string("field '") + field +
                                        "' must be an array of strings"));
  }
  for (const json& v : *it) {
    if (!v.is_string()) {
      throw DataError(line_error(line, std::string("field '") + field +
                                          "' must contain only strings"));
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::string json_string(const json& record, const char* field,
                        std::size_t line, bool required) {
  const auto it = record.find(field);
  if (it == record.end() || it->is_null()) {
    if (required) {
      throw DataError(line_error(line, std::string("missing '") + field + "'"));
    }
    return {};
  }
  if (!it->is_string()) {
    throw DataError(
        line_error(line, std::string("field '") + field + "' must be a string"));
  }
  return it->get<std::string>();
}

void require_isbn(const EBook& book, std::size_t line) {
  if (trim(book.isbn).empty()) throw DataError(line_error(line, "empty isbn"));
}

// Reads one CSV record (RFC 4180 quoting, quoted fields may span lines).
// Returns nullopt at end of input. `line` is advanced past the record and
// `start_line` receives the record's first line.
std::optional<std::vector<std::string>> read_csv_record(std::istream& in,
                                                        std::size_t& line,
                                                        std::size_t& start_line) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  start_line = line + 1;
  char c;
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      ++line;
      fields.push_back(std::move(field));
      return fields;
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (in_quotes) {
    throw DataError(line_error(start_line, "unterminated quoted field"));
  }
  if (!any) return std::nullopt;
  ++line;
  fields.push_back(std::move(field));
  return fields;
}

std::vector<std::string> split_multi(const std::string& cell) {
  std::vector<std::string> out;
  if (trim(cell).empty()) return out;
  for (std::string& part : split(cell, ';')) out.push_back(trim(part));
  return out;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string_view source_name(Source source) {
  return source == Source::kEditor ? "editor" : "amazon";
}

Corpus Corpus::from_books(std::vector<EBook> books,
                          std::vector<std::string>* warnings) {
  Corpus corpus;
  for (EBook& raw : books) {
    EBook book = normalize(std::move(raw));
    if (book.isbn.empty()) throw DataError("book with empty isbn");
    auto it = corpus.books_.find(book.isbn);
    if (it == corpus.books_.end()) {
      corpus.books_.emplace(book.isbn, std::move(book));
      continue;
    }
    EBook& kept = it->second;
    if (kept.title != book.title && warnings != nullptr) {
      warnings->push_back("isbn " + book.isbn + ": conflicting titles '" +
                          kept.title + "' and '" + book.title +
                          "', keeping the first");
    }
    if (kept.description.empty()) kept.description = book.description;
    append_unique(kept.authors, book.authors);
    append_unique(kept.bisacs, book.bisacs);
    append_unique(kept.editor_tags, book.editor_tags);
    append_unique(kept.search_terms, book.search_terms);
    append_unique(kept.review_keywords, book.review_keywords);
  }
  corpus.build_indices();
  return corpus;
}

void Corpus::build_indices() {
  author_index_.clear();
  bisac_index_.clear();
  editor_counts_.clear();
  amazon_counts_.clear();
  for (const auto& [isbn, book] : books_) {
    for (const std::string& a : book.authors) author_index_[a].insert(isbn);
    for (const std::string& b : book.bisacs) bisac_index_[b].insert(isbn);
    for (const std::string& t : book.editor_tags) ++editor_counts_[t];
    for (const std::string& t : book.search_terms) ++amazon_counts_[t];
  }
}

const EBook* Corpus::find(std::string_view isbn) const {
  const auto it = books_.find(isbn);
  return it == books_.end() ? nullptr : &it->second;
}

const EBook& Corpus::at(std::string_view isbn) const {
  const EBook* book = find(isbn);
  if (book == nullptr) throw LookupError("unknown isbn: " + std::string(isbn));
  return *book;
}

Corpus Corpus::without_review_keywords() const {
  Corpus copy = *this;
  for (auto& [isbn, book] : copy.books_) book.review_keywords.clear();
  return copy;
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "csv") return CorpusFormat::kCsv;
  throw ConfigError("unknown corpus format '" + std::string(name) +
                    "' (expected jsonl or csv)");
}

IngestResult parse_jsonl(std::istream& in) {
  std::vector<EBook> books;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(line_error(line_no, std::string("invalid JSON: ") + e.what()));
    }
    if (!record.is_object()) {
      throw DataError(line_error(line_no, "record is not a JSON object"));
    }
    for (const auto& item : record.items()) {
      if (std::find(std::begin(kFields), std::end(kFields), item.key()) ==
          std::end(kFields)) {
        throw DataError(line_error(line_no, "unknown field '" + item.key() + "'"));
      }
    }
    EBook book;
    book.isbn = json_string(record, "isbn", line_no, true);
    book.title = json_string(record, "title", line_no, true);
    book.description = json_string(record, "description", line_no, false);
    book.authors = json_string_list(record, "authors", line_no);
    book.bisacs = json_string_list(record, "bisacs", line_no);
    book.editor_tags = json_string_list(record, "editor_tags", line_no);
    book.search_terms = json_string_list(record, "search_terms", line_no);
    book.review_keywords = json_string_list(record, "review_keywords", line_no);
    require_isbn(book, line_no);
    books.push_back(std::move(book));
  }
  IngestResult result;
  result.corpus = Corpus::from_books(std::move(books), &result.warnings);
  return result;
}

IngestResult parse_csv(std::istream& in) {
  std::size_t line = 0;
  std::size_t start = 0;
  const auto header = read_csv_record(in, line, start);
  if (!header) throw DataError("line 1: missing CSV header");
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header->size(); ++i) {
    const std::string name = trim((*header)[i]);
    if (std::find(std::begin(kFields), std::end(kFields), name) ==
        std::end(kFields)) {
      throw DataError(line_error(start, "unknown column '" + name + "'"));
    }
    column[name] = i;
  }
  for (const char* required : {"isbn", "title"}) {
    if (column.count(required) == 0) {
      throw DataError(line_error(start, std::string("missing column '") +
                                            required + "'"));
    }
  }

  std::vector<EBook> books;
  while (const auto record = read_csv_record(in, line, start)) {
    if (record->size() == 1 && trim((*record)[0]).empty()) continue;
    if (record->size() != header->size()) {
      throw DataError(line_error(
          start, "expected " + std::to_string(header->size()) + " fields, got " +
                     std::to_string(record->size())));
    }
    const auto cell = [&](const char* name) -> std::string {
      const auto it = column.find(name);
      return it == column.end() ? std::string() : (*record)[it->second];
    };
    EBook book;
    book.isbn = cell("isbn");
    book.title = cell("title");
    book.description = cell("description");
    book.authors = split_multi(cell("authors"));
    book.bisacs = split_multi(cell("bisacs"));
    book.editor_tags = split_multi(cell("editor_tags"));
    book.search_terms = split_multi(cell("search_terms"));
    book.review_keywords = split_multi(cell("review_keywords"));
    require_isbn(book, start);
    books.push_back(std::move(book));
  }
  IngestResult result;
  result.corpus = Corpus::from_books(std::move(books), &result.warnings);
  return result;
}

IngestResult ingest(const std::string& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file: " + path);
  return format == CorpusFormat::kJsonl ? parse_jsonl(in) : parse_csv(in);
}

void write_jsonl(const Corpus& corpus, std::ostream& out) {
  for (const auto& [isbn, book] : corpus.books()) {
    ordered_json record;
    record["isbn"] = book.isbn;
    record["title"] = book.title;
    record["description"] = book.description;
    record["authors"] = book.authors;
    record["bisacs"] = book.bisacs;
    record["editor_tags"] = book.editor_tags;
    record["search_terms"] = book.search_terms;
    record["review_keywords"] = book.review_keywords;
    out << record.dump() << '\n';
  }
}

std::string to_jsonl(const Corpus& corpus) {
  std::ostringstream out;
  write_jsonl(corpus, out);
  return out.str();
}

void write_csv(const Corpus& corpus, std::ostream& out) {
  out << join(std::vector<std::string>(std::begin(kFields), std::end(kFields)), ",")
      << '\n';
  for (const auto& [isbn, book] : corpus.books()) {
    out << csv_quote(book.isbn) << ',' << csv_quote(book.title) << ','
        << csv_quote(book.description) << ',' << csv_quote(join(book.authors, ";"))
        << ',' << csv_quote(join(book.bisacs, ";")) << ','
        << csv_quote(join(book.editor_tags, ";")) << ','
        << csv_quote(join(book.search_terms, ";")) << ','
        << csv_quote(join(book.review_keywords, ";")) << '\n';
  }
}

bool contains_token_run(const std::vector<std::string>& haystack,
                        const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(),
                     needle.end()) != haystack.end();
}

CorpusStats compute_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.n_books = corpus.size();
  stats.n_authors = corpus.author_index().size();
  stats.n_bisacs = corpus.bisac_index().size();
  stats.n_distinct_editor_tags = corpus.tag_counts(Source::kEditor).size();
  stats.n_distinct_search_terms = corpus.tag_counts(Source::kAmazon).size();

  const text::PreprocessConfig config = text::default_config();
  std::set<std::string> review_vocab;
  std::size_t review_assignments = 0;
  std::size_t term_assignments = 0;
  std::size_t title_hits = 0;
  for (const auto& [isbn, book] : corpus.books()) {
    const bool editor = !book.editor_tags.empty();
    const bool amazon = !book.search_terms.empty();
    stats.n_with_editor_tags += editor;
    stats.n_with_search_terms += amazon;
    stats.n_with_both += editor && amazon;
    if (!book.review_keywords.empty()) {
      ++stats.n_with_review_keywords;
      review_assignments += book.review_keywords.size();
      review_vocab.insert(book.review_keywords.begin(), book.review_keywords.end());
    }
    if (amazon) {
      const text::TokenStream title = text::preprocess(book.title, config);
      for (const std::string& term : book.search_terms) {
        ++term_assignments;
        title_hits += contains_token_run(title, text::preprocess(term, config));
      }
    }
  }
  stats.n_distinct_review_keywords = review_vocab.size();
  if (stats.n_with_review_keywords > 0) {
    stats.avg_review_keywords_per_book =
        static_cast<double>(review_assignments) /
        static_cast<double>(stats.n_with_review_keywords);
  }
  if (term_assignments > 0) {
    stats.title_overlap_fraction =
        static_cast<double>(title_hits) / static_cast<double>(term_assignments);
  }
  return stats;
}

}  // namespace tagrec
