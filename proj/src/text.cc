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

#include "tagrec/text.h"

#include <fstream>

#include "tagrec/common.h"

namespace tagrec::text {
namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes one code point starting at s[i] and advances i. Malformed
// sequences yield kInvalid and consume one byte.
char32_t decode(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t k) {
    return static_cast<unsigned char>(s[k]);
  };
  const unsigned char b0 = byte(i);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return kInvalid;
  }
  if (i + len > s.size()) {
    ++i;
    return kInvalid;
  }
  for (std::size_t k = 1; k < len; ++k) {
    const unsigned char b = byte(i + k);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return kInvalid;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  // Overlong forms and surrogates.
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
      (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)) ||
      (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++i;
    return kInvalid;
  }
  i += len;
  return cp;
}

void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
         cp == '\v' || cp == 0x00A0 || (cp >= 0x2000 && cp <= 0x200B) ||
         cp == 0x3000;
}

enum class CharClass { kWord, kHyphen, kDrop };

CharClass classify(char32_t cp) {
  if (cp == kInvalid) return CharClass::kDrop;
  if (cp == '-') return CharClass::kHyphen;
  if (cp < 0x80) {
    const bool alnum = (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
                       (cp >= '0' && cp <= '9');
    return alnum ? CharClass::kWord : CharClass::kDrop;
  }
  if (cp <= 0xBF || cp == 0xD7 || cp == 0xF7) return CharClass::kDrop;
  if ((cp >= 0x2000 && cp <= 0x2BFF) || (cp >= 0x3000 && cp <= 0x303F) ||
      (cp >= 0xFE00 && cp <= 0xFE0F) || cp == 0xFEFF || cp >= 0x1F000) {
    return CharClass::kDrop;
  }
  return CharClass::kWord;
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  return cp;
}

// Cleans one whitespace-delimited chunk.
std::string clean_chunk(const std::u32string& chunk) {
  std::u32string kept;
  kept.reserve(chunk.size());
  for (char32_t cp : chunk) {
    const CharClass c = classify(cp);
    if (c == CharClass::kDrop) continue;
    kept.push_back(c == CharClass::kWord ? to_lower(cp) : cp);
  }
  std::size_t b = 0;
  std::size_t e = kept.size();
  while (b < e && kept[b] == '-') ++b;
  while (e > b && kept[e - 1] == '-') --e;
  std::string out;
  for (std::size_t i = b; i < e; ++i) encode(kept[i], out);
  return out;
}

// Whitespace split followed by per-chunk cleanup; empty chunks are dropped.
std::vector<std::string> clean_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::u32string chunk;
  const auto flush = [&] {
    if (chunk.empty()) return;
    std::string token = clean_chunk(chunk);
    if (!token.empty()) tokens.push_back(std::move(token));
    chunk.clear();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = decode(text, i);
    if (cp != kInvalid && is_space(cp)) {
      flush();
    } else {
      chunk.push_back(cp);
    }
  }
  flush();
  return tokens;
}

}  // namespace

const StopwordSet& default_stopwords() {
  static const StopwordSet* const kStopwords = new StopwordSet{
      // English
      "a", "about", "above", "after", "again", "against", "all", "am", "an",
      "and", "any", "are", "as", "at", "be", "because", "been", "before",
      "being", "below", "between", "both", "but", "by", "can", "could", "did",
      "do", "does", "doing", "down", "during", "each", "few", "for", "from",
      "further", "had", "has", "have", "having", "he", "her", "here", "hers",
      "herself", "him", "himself", "his", "how", "i", "if", "in", "into",
      "is", "it", "its", "itself", "just", "me", "more", "most", "my",
      "myself", "no", "nor", "not", "now", "of", "off", "on", "once", "only",
      "or", "other", "our", "ours", "ourselves", "out", "over", "own", "same",
      "she", "should", "so", "some", "such", "than", "that", "the", "their",
      "theirs", "them", "themselves", "then", "there", "these", "they",
      "this", "those", "through", "to", "too", "under", "until", "up", "very",
      "was", "we", "were", "what", "when", "where", "which", "while", "who",
      "whom", "why", "will", "with", "would", "you", "your", "yours",
      "yourself", "yourselves",
      // German
      "aber", "alle", "allem", "allen", "aller", "alles", "als", "also", "am",
      "an", "ander", "andere", "anderem", "anderen", "anderer", "anderes",
      "auch", "auf", "aus", "bei", "bin", "bis", "bist", "da", "damit",
      "dann", "das", "dass", "dasselbe", "dazu", "dein", "deine", "dem",
      "den", "denn", "der", "des", "desselben", "dessen", "dich", "die",
      "dies", "diese", "dieselbe", "diesem", "diesen", "dieser", "dieses",
      "dir", "doch", "dort", "du", "durch", "ein", "eine", "einem", "einen",
      "einer", "eines", "einig", "einige", "einmal", "er", "es", "etwas",
      "euch", "euer", "eure", "für", "gegen", "gewesen", "hab", "habe",
      "haben", "hat", "hatte", "hatten", "hier", "hin", "hinter", "ich",
      "ihm", "ihn", "ihnen", "ihr", "ihre", "im", "in", "indem", "ins", "ist",
      "jede", "jedem", "jeden", "jeder", "jedes", "jene", "jetzt", "kann",
      "kein", "keine", "können", "man", "manche", "mein", "meine", "mich",
      "mir", "mit", "muss", "musste", "nach", "nicht", "nichts", "noch",
      "nun", "nur", "ob", "oder", "ohne", "sehr", "sein", "seine", "selbst",
      "sich", "sie", "sind", "so", "solche", "soll", "sollte", "sondern",
      "sonst", "über", "um", "und", "uns", "unser", "unter", "viel", "vom",
      "von", "vor", "während", "war", "waren", "warst", "was", "weil",
      "welche", "wenn", "werde", "werden", "wie", "wieder", "will", "wir",
      "wird", "wo", "wollen", "wollte", "würde", "zu", "zum", "zur", "zwar",
      "zwischen"};
  return *kStopwords;
}

PreprocessConfig default_config() {
  PreprocessConfig config;
  config.stopwords = default_stopwords();
  return config;
}

StopwordSet load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read stopword file: " + path);
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    std::string word = trim(line);
    if (word.empty() || word[0] == '#') continue;
    // Stored in the same form preprocess() produces.
    for (std::string& token : clean_tokens(word)) words.insert(std::move(token));
  }
  return words;
}

std::size_t codepoint_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

TokenStream preprocess(std::string_view text, const PreprocessConfig& config) {
  TokenStream out;
  for (std::string& token : clean_tokens(text)) {
    if (config.stopwords.count(token) != 0) continue;
    if (codepoint_length(token) < config.min_word_length) continue;
    out.push_back(std::move(token));
  }
  return out;
}

std::string normalize_tag(std::string_view tag) {
  return join(clean_tokens(tag), " ");
}

}  // namespace tagrec::text
