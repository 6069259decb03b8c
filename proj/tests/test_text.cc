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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tagrec/common.h"
#include "tagrec/text.h"

namespace tagrec::text {
namespace {

using Tokens = std::vector<std::string>;

PreprocessConfig config_with(StopwordSet stopwords, std::size_t min_length) {
  PreprocessConfig c;
  c.stopwords = std::move(stopwords);
  c.min_word_length = min_length;
  return c;
}

TEST_CASE("preprocess lowercases and strips punctuation") {
  CHECK(preprocess("The Long, long Night!", config_with({"the"}, 1)) ==
        Tokens{"long", "long", "night"});
}

TEST_CASE("preprocess applies the minimum word length") {
  CHECK(preprocess("a bb ccccc", config_with({}, 5)) == Tokens{"ccccc"});
}

TEST_CASE("preprocess of empty input") {
  CHECK(preprocess("", default_config()).empty());
  CHECK(preprocess("   \t\n", default_config()).empty());
  CHECK(preprocess("?! ...", default_config()).empty());
}

TEST_CASE("preprocess keeps inner hyphens and drops outer ones") {
  CHECK(preprocess("-well-known- --x--", config_with({}, 1)) ==
        Tokens{"well-known", "x"});
}

TEST_CASE("preprocess deletes bad characters inside a word") {
  CHECK(preprocess("don't e-mail: (ok)", config_with({}, 1)) ==
        Tokens{"dont", "e-mail", "ok"});
}

TEST_CASE("preprocess handles German text") {
  const Tokens t = preprocess("Der GROSSE Überfall über München", default_config());
  CHECK(t == Tokens{"grosse", "überfall", "münchen"});
}

TEST_CASE("preprocess splits on unicode spaces") {
  CHECK(preprocess("alpha\xC2\xA0" "beta\xE2\x80\x83gamma", config_with({}, 1)) ==
        Tokens{"alpha", "beta", "gamma"});
}

TEST_CASE("minimum length counts code points") {
  CHECK(codepoint_length("über") == 4);
  CHECK(preprocess("über", config_with({}, 4)) == Tokens{"über"});
  CHECK(preprocess("über", config_with({}, 5)).empty());
}

TEST_CASE("default stopwords cover English and German") {
  const StopwordSet& s = default_stopwords();
  for (const char* w : {"the", "and", "of", "der", "die", "und"}) CHECK(s.count(w) == 1);
}

TEST_CASE("preprocess invariants on random text") {
  Rng rng(11);
  const std::string alphabet = "abcXYZ -,.!'\"\t\n\xC3\xA4\xC3\x9C" "0123456789";
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    const std::size_t len = rng.index(60);
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t c = rng.index(alphabet.size());
      // Keep two-byte sequences intact.
      if (static_cast<unsigned char>(alphabet[c]) == 0xC3) {
        s += alphabet.substr(c, 2);
      } else if ((static_cast<unsigned char>(alphabet[c]) & 0xC0) == 0x80) {
        s += alphabet.substr(c - 1, 2);
      } else {
        s += alphabet[c];
      }
    }
    const PreprocessConfig cfg = default_config();
    const Tokens tokens = preprocess(s, cfg);
    std::istringstream ws(s);
    std::size_t whitespace_tokens = 0;
    for (std::string w; ws >> w;) ++whitespace_tokens;
    CHECK(tokens.size() <= whitespace_tokens);
    for (const std::string& t : tokens) {
      CHECK(!t.empty());
      CHECK(cfg.stopwords.count(t) == 0);
      for (unsigned char ch : t) {
        const bool ok = ch >= 0x80 || (ch >= 'a' && ch <= 'z') ||
                        (ch >= '0' && ch <= '9') || ch == '-';
        CHECK(ok);
      }
    }
    // Idempotent on its own output.
    CHECK(preprocess(join(tokens, " "), cfg) == tokens);
  }
}

TEST_CASE("normalize_tag examples") {
  CHECK(normalize_tag("  Crime  Novel ") == "crime novel");
  CHECK(normalize_tag("Victim") == "victim");
  CHECK(normalize_tag("!!").empty());
  CHECK(normalize_tag("The Lord of the Rings") == "the lord of the rings");
  CHECK(normalize_tag(normalize_tag("  Sci-Fi,  Space! ")) == normalize_tag("  Sci-Fi,  Space! "));
}

TEST_CASE("stopword file loading") {
  const auto path = std::filesystem::temp_directory_path() / "tagrec_stopwords.txt";
  {
    std::ofstream out(path);
    out << "# comment\nFoo\n\n  bar  \n";
  }
  const StopwordSet s = load_stopwords(path.string());
  CHECK(s.size() == 2);
  CHECK(s.count("foo") == 1);
  CHECK(s.count("bar") == 1);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_stopwords("/nonexistent/stopwords.txt"), DataError);
}

}  // namespace
}  // namespace tagrec::text
