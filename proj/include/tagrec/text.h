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

#ifndef TAGREC_TEXT_H_
#define TAGREC_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace tagrec::text {

using TokenStream = std::vector<std::string>;
using StopwordSet = std::unordered_set<std::string>;

struct PreprocessConfig {
  StopwordSet stopwords;
  // Minimum token length in code points. 1 keeps every token.
  std::size_t min_word_length = 1;
};

// Built-in English and German stopword list (lowercase).
const StopwordSet& default_stopwords();

// Default config: built-in stopwords, no length filter.
PreprocessConfig default_config();

// One word per line, UTF-8. Blank lines and lines starting with '#' are
// skipped. Throws DataError if the file cannot be read.
StopwordSet load_stopwords(const std::string& path);

// Splits on whitespace, deletes every character that is not a letter, digit
// or hyphen, lowercases, strips leading/trailing hyphens, then drops
// stopwords and tokens shorter than min_word_length. Non-ASCII code points
// count as letters except Unicode punctuation and symbols in the Latin-1 and
// General Punctuation blocks; Latin-1 capitals are lowercased.
TokenStream preprocess(std::string_view text, const PreprocessConfig& config);

// Canonical form of a tag for exact matching: the same character cleanup as
// preprocess() without stopword or length filtering, tokens joined by single
// spaces. An empty result means the tag must be dropped.
std::string normalize_tag(std::string_view tag);

// Number of UTF-8 code points in a valid UTF-8 string.
std::size_t codepoint_length(std::string_view s);

}  // namespace tagrec::text

#endif  // TAGREC_TEXT_H_
