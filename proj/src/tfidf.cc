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

#include "tagrec/tfidf.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "tagrec/common.h"

namespace tagrec {

using json = nlohmann::json;

std::string_view field_name(TextField field) {
  return field == TextField::kTitle ? "title" : "description";
}

TextField parse_text_field(std::string_view name) {
  if (name == "title") return TextField::kTitle;
  if (name == "description") return TextField::kDescription;
  throw ConfigError("unknown text field '" + std::string(name) + "'");
}

double dot(const SparseVector& a, const SparseVector& b) {
  double sum = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      sum += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

TfidfIndex TfidfIndex::build(const Corpus& corpus, TextField field,
                             const TfidfParams& params,
                             const text::StopwordSet& stopwords) {
  if (params.min_df == 0) throw ConfigError("tfidf min_df must be >= 1");
  if (corpus.empty()) throw DataError("empty index: corpus has no books");

  text::PreprocessConfig config;
  config.stopwords = stopwords;
  config.min_word_length = params.min_word_length;

  TfidfIndex index;
  index.field_ = field;
  index.params_ = params;

  std::vector<text::TokenStream> docs;
  std::map<std::string, std::size_t, std::less<>> df;
  for (const auto& [isbn, book] : corpus.books()) {
    text::TokenStream tokens = text::preprocess(
        field == TextField::kTitle ? book.title : book.description, config);
    if (tokens.empty()) continue;
    text::TokenStream unique = tokens;
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    for (const std::string& t : unique) ++df[t];
    index.isbns_.push_back(isbn);
    docs.push_back(std::move(tokens));
  }
  index.n_documents_ = docs.size();

  const double n = static_cast<double>(index.n_documents_);
  for (const auto& [token, count] : df) {
    if (count < params.min_df) continue;
    index.term_ids_.emplace(token, static_cast<std::uint32_t>(index.terms_.size()));
    index.terms_.push_back({token, count, std::log(n / static_cast<double>(count))});
  }
  if (index.terms_.empty()) {
    throw DataError("empty index: no " + std::string(field_name(field)) +
                    " token passes min_df=" + std::to_string(params.min_df) +
                    " and min_word_length=" +
                    std::to_string(params.min_word_length));
  }

  index.vectors_.reserve(docs.size());
  for (const text::TokenStream& tokens : docs) {
    std::map<std::uint32_t, std::size_t> tf;
    for (const std::string& t : tokens) {
      const auto it = index.term_ids_.find(t);
      if (it != index.term_ids_.end()) ++tf[it->second];
    }
    SparseVector v;
    double norm2 = 0.0;
    for (const auto& [id, count] : tf) {
      const double w = static_cast<double>(count) * index.terms_[id].idf;
      if (w == 0.0) continue;
      v.emplace_back(id, w);
      norm2 += w * w;
    }
    const double norm = std::sqrt(norm2);
    for (auto& entry : v) entry.second /= norm;
    index.vectors_.push_back(std::move(v));
  }
  index.build_postings();
  return index;
}

void TfidfIndex::build_postings() {
  postings_.assign(terms_.size(), {});
  for (std::size_t d = 0; d < vectors_.size(); ++d) {
    for (const auto& [id, w] : vectors_[d]) {
      postings_[id].emplace_back(static_cast<std::uint32_t>(d), w);
    }
  }
}

std::int64_t TfidfIndex::term_id(std::string_view token) const {
  const auto it = term_ids_.find(token);
  return it == term_ids_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::size_t TfidfIndex::doc_position(std::string_view isbn) const {
  const auto it = std::lower_bound(isbns_.begin(), isbns_.end(), isbn);
  if (it == isbns_.end() || *it != isbn) return isbns_.size();
  return static_cast<std::size_t>(it - isbns_.begin());
}

bool TfidfIndex::contains(std::string_view isbn) const {
  return doc_position(isbn) < isbns_.size();
}

bool TfidfIndex::is_queryable(std::string_view isbn) const {
  const std::size_t pos = doc_position(isbn);
  return pos < isbns_.size() && !vectors_[pos].empty();
}

const SparseVector& TfidfIndex::vector(std::string_view isbn) const {
  const std::size_t pos = doc_position(isbn);
  if (pos == isbns_.size()) {
    throw LookupError("isbn " + std::string(isbn) + " is not in the " +
                      std::string(field_name(field_)) + " index");
  }
  return vectors_[pos];
}

std::vector<Neighbor> TfidfIndex::neighbors(std::string_view isbn,
                                            std::size_t n) const {
  const std::size_t query = doc_position(isbn);
  if (query == isbns_.size() || vectors_[query].empty()) {
    throw LookupError("isbn " + std::string(isbn) + " has no " +
                      std::string(field_name(field_)) + " vector");
  }
  // Contributions are added in ascending term order, so every score equals
  // dot(query, candidate) bit for bit.
  std::vector<double> scores(vectors_.size(), 0.0);
  std::vector<std::uint32_t> touched;
  for (const auto& [id, wq] : vectors_[query]) {
    for (const auto& [doc, wd] : postings_[id]) {
      if (scores[doc] == 0.0) touched.push_back(doc);
      scores[doc] += wq * wd;
    }
  }
  std::vector<std::uint32_t> candidates;
  for (std::uint32_t doc : touched) {
    if (doc != query && scores[doc] > 0.0) candidates.push_back(doc);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  const auto better = [&](std::uint32_t a, std::uint32_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;  // positions follow ascending isbn
  };
  const std::size_t keep = std::min(n, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + keep,
                    candidates.end(), better);
  std::vector<Neighbor> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.push_back({isbns_[candidates[i]], scores[candidates[i]]});
  }
  return out;
}

std::string TfidfIndex::to_json() const {
  json doc;
  doc["format"] = "tagrec-tfidf";
  doc["version"] = 1;
  doc["field"] = std::string(field_name(field_));
  doc["min_df"] = params_.min_df;
  doc["min_word_length"] = params_.min_word_length;
  doc["n_documents"] = n_documents_;
  json terms = json::array();
  for (const Term& t : terms_) terms.push_back({t.token, t.df, t.idf});
  doc["terms"] = std::move(terms);
  json documents = json::array();
  for (std::size_t d = 0; d < isbns_.size(); ++d) {
    json entries = json::array();
    for (const auto& [id, w] : vectors_[d]) entries.push_back({id, w});
    documents.push_back({{"isbn", isbns_[d]}, {"vector", std::move(entries)}});
  }
  doc["documents"] = std::move(documents);
  return doc.dump();
}

TfidfIndex TfidfIndex::from_json(std::string_view text) {
  TfidfIndex index;
  try {
    const json doc = json::parse(text);
    if (doc.at("format") != "tagrec-tfidf" || doc.at("version") != 1) {
      throw DataError("unsupported tfidf artifact");
    }
    index.field_ = parse_text_field(doc.at("field").get<std::string>());
    index.params_.min_df = doc.at("min_df").get<std::size_t>();
    index.params_.min_word_length = doc.at("min_word_length").get<std::size_t>();
    index.n_documents_ = doc.at("n_documents").get<std::size_t>();
    for (const json& t : doc.at("terms")) {
      index.term_ids_.emplace(t.at(0).get<std::string>(),
                              static_cast<std::uint32_t>(index.terms_.size()));
      index.terms_.push_back({t.at(0).get<std::string>(),
                              t.at(1).get<std::size_t>(), t.at(2).get<double>()});
    }
    for (const json& d : doc.at("documents")) {
      index.isbns_.push_back(d.at("isbn").get<std::string>());
      SparseVector v;
      for (const json& e : d.at("vector")) {
        const auto id = e.at(0).get<std::uint32_t>();
        if (id >= index.terms_.size()) throw DataError("term id out of range");
        v.emplace_back(id, e.at(1).get<double>());
      }
      index.vectors_.push_back(std::move(v));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed tfidf artifact: ") + e.what());
  }
  if (!std::is_sorted(index.isbns_.begin(), index.isbns_.end())) {
    throw DataError("malformed tfidf artifact: documents not sorted by isbn");
  }
  index.build_postings();
  return index;
}

bool TfidfIndex::operator==(const TfidfIndex& other) const {
  return field_ == other.field_ && params_.min_df == other.params_.min_df &&
         params_.min_word_length == other.params_.min_word_length &&
         n_documents_ == other.n_documents_ && terms_ == other.terms_ &&
         isbns_ == other.isbns_ && vectors_ == other.vectors_;
}

}  // namespace tagrec
