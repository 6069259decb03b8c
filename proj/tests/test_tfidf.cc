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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fixtures.h"
#include "tagrec/common.h"
#include "tagrec/tfidf.h"

namespace tagrec {
namespace {

EBook doc(std::string isbn, std::string description, std::string title = "t") {
  EBook b;
  b.isbn = std::move(isbn);
  b.title = std::move(title);
  b.description = std::move(description);
  return b;
}

const TfidfParams kLoose{1, 1};

TEST_CASE("weight is raw tf times ln(N/df) before normalization") {
  const Corpus c = Corpus::from_books({doc("1", "quokka quokka wombat"), doc("2", "wombat dingo"),
                                       doc("3", "wombat dingo"), doc("4", "wombat")});
  const TfidfIndex idx = TfidfIndex::build(c, TextField::kDescription, kLoose);
  const auto rare = idx.term_id("quokka");
  REQUIRE(rare >= 0);
  CHECK(idx.terms()[static_cast<std::size_t>(rare)].idf == doctest::Approx(std::log(4.0)));
  // "wombat" has idf 0, so doc 1's vector holds only "quokka" with weight 2 ln 4
  // before normalization, i.e. 1 after.
  const SparseVector& v = idx.vector("1");
  REQUIRE(v.size() == 1);
  CHECK(v[0].first == static_cast<std::uint32_t>(rare));
  CHECK(v[0].second == doctest::Approx(1.0));
  const SparseVector& v2 = idx.vector("2");
  REQUIRE(v2.size() == 1);
  CHECK(idx.terms()[v2[0].first].token == "dingo");
  CHECK(v2[0].second == 1.0);
}

TEST_CASE("pre-normalization weights of a mixed document") {
  // Doc 1 has quokka (tf 2, df 1) and dingo (tf 1, df 2): weights 2 ln 4 and ln 2.
  const Corpus c = Corpus::from_books({doc("1", "quokka quokka dingo"), doc("2", "dingo"),
                                       doc("3", "filler"), doc("4", "filler")});
  const TfidfIndex idx = TfidfIndex::build(c, TextField::kDescription, kLoose);
  const double w_rare = 2.0 * std::log(4.0);
  const double w_other = std::log(2.0);
  const double norm = std::hypot(w_rare, w_other);
  const SparseVector& v = idx.vector("1");
  REQUIRE(v.size() == 2);
  for (const auto& [id, w] : v) {
    const std::string& token = idx.terms()[id].token;
    CHECK(w == doctest::Approx((token == "quokka" ? w_rare : w_other) / norm));
  }
}

TEST_CASE("token in every document has zero weight") {
  const Corpus c = Corpus::from_books({doc("1", "every alpha"), doc("2", "every beta")});
  const TfidfIndex idx = TfidfIndex::build(c, TextField::kDescription, kLoose);
  const auto id = idx.term_id("every");
  REQUIRE(id >= 0);
  CHECK(idx.terms()[static_cast<std::size_t>(id)].idf == 0.0);
  for (const std::string isbn : {"1", "2"}) {
    for (const auto& [t, w] : idx.vector(isbn)) CHECK(t != static_cast<std::uint32_t>(id));
  }
}

TEST_CASE("empty index errors") {
  const Corpus c = Corpus::from_books({doc("1", "alpha"), doc("2", "beta")});
  CHECK_THROWS_WITH_AS(TfidfIndex::build(c, TextField::kDescription, {10, 1}),
                       doctest::Contains("empty index"), DataError);
  const Corpus blank = Corpus::from_books({doc("1", ""), doc("2", "  ")});
  CHECK_THROWS_AS(TfidfIndex::build(blank, TextField::kDescription, kLoose), DataError);
  CHECK_THROWS_AS(TfidfIndex::build(Corpus{}, TextField::kDescription, kLoose), DataError);
}

TEST_CASE("min_df and min_word_length filters") {
  const Corpus c = Corpus::from_books(
      {doc("1", "short longer words"), doc("2", "longer words"), doc("3", "words")});
  const TfidfIndex idx = TfidfIndex::build(c, TextField::kDescription, {2, 6});
  for (const auto& term : idx.terms()) {
    CHECK(term.df >= 2);
    CHECK(term.token.size() >= 6);
  }
  CHECK(idx.term_id("longer") >= 0);
  CHECK(idx.term_id("words") == -1);
  CHECK(idx.term_id("short") == -1);
}

TEST_CASE("identical text gives similarity one") {
  const Corpus c = Corpus::from_books({doc("1", "night crime harbor"),
                                       doc("2", "night crime harbor"), doc("3", "garden roses")});
  const TfidfIndex idx = TfidfIndex::build(c, TextField::kDescription, kLoose);
  const auto n = idx.neighbors("1", 20);
  REQUIRE(n.size() == 1);
  CHECK(n[0].isbn == "2");
  CHECK(n[0].similarity == doctest::Approx(1.0));
}

TEST_CASE("document without shared vocabulary has no neighbors") {
  const Corpus c = Corpus::from_books({doc("1", "unique words here"),
                                       doc("2", "other stuff"), doc("3", "other things")});
  const TfidfIndex idx = TfidfIndex::build(c, TextField::kDescription, kLoose);
  CHECK(idx.neighbors("1", 20).empty());
}

TEST_CASE("lookup errors") {
  const Corpus c = Corpus::from_books({doc("1", "alpha beta"), doc("2", "beta gamma"),
                                       doc("3", "")});
  const TfidfIndex idx = TfidfIndex::build(c, TextField::kDescription, kLoose);
  CHECK_THROWS_AS(idx.neighbors("9", 5), LookupError);
  CHECK_THROWS_AS(idx.neighbors("3", 5), LookupError);
  CHECK_THROWS_AS(idx.vector("9"), LookupError);
  CHECK_FALSE(idx.is_queryable("3"));
}

TEST_CASE("neighbors match brute force on random corpora") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Corpus c = fixture::random_corpus(seed);
    for (TextField field : {TextField::kTitle, TextField::kDescription}) {
      TfidfIndex idx;
      try {
        idx = TfidfIndex::build(c, field, {1 + seed % 3, 1});
      } catch (const DataError&) {
        continue;
      }
      for (const std::string& q : idx.isbns()) {
        const SparseVector& v = idx.vector(q);
        if (v.empty()) continue;
        double norm = 0.0;
        for (const auto& [t, w] : v) norm += w * w;
        CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-9));

        std::vector<Neighbor> expected;
        for (const std::string& other : idx.isbns()) {
          if (other == q) continue;
          const double s = dot(v, idx.vector(other));
          if (s > 0.0) expected.push_back({other, s});
        }
        std::sort(expected.begin(), expected.end(), [](const Neighbor& a, const Neighbor& b) {
          return a.similarity != b.similarity ? a.similarity > b.similarity : a.isbn < b.isbn;
        });
        const std::size_t n = 1 + seed % 7;
        if (expected.size() > n) expected.resize(n);
        const auto got = idx.neighbors(q, n);
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
          CHECK(got[i].isbn == expected[i].isbn);
          CHECK(got[i].similarity == expected[i].similarity);
          CHECK(got[i].similarity <= 1.0 + 1e-9);
          CHECK(got[i].isbn != q);
        }
      }
    }
  }
}

TEST_CASE("json round trip is exact") {
  const Corpus c = fixture::random_corpus(3);
  const TfidfIndex idx = TfidfIndex::build(c, TextField::kDescription, {2, 1});
  const TfidfIndex back = TfidfIndex::from_json(idx.to_json());
  CHECK(back == idx);
  const std::string q = idx.isbns().front();
  if (idx.is_queryable(q)) CHECK(back.neighbors(q, 5) == idx.neighbors(q, 5));
  CHECK_THROWS_AS(TfidfIndex::from_json("{\"format\":\"nope\"}"), DataError);
}

TEST_CASE("field names") {
  CHECK(parse_text_field("title") == TextField::kTitle);
  CHECK(field_name(TextField::kDescription) == "description");
  CHECK_THROWS_AS(parse_text_field("body"), ConfigError);
}

}  // namespace
}  // namespace tagrec
