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

#ifndef TAGREC_CONFIG_H_
#define TAGREC_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tagrec/corpus.h"
#include "tagrec/embed.h"
#include "tagrec/eval.h"
#include "tagrec/recommend.h"
#include "tagrec/synthetic.h"
#include "tagrec/tfidf.h"

namespace tagrec {

// Flat "section.key" -> value view of a configuration.
using KeyValues = std::map<std::string, std::string>;

// Everything a pipeline run depends on. Every field has a default; an empty
// corpus path selects the synthetic generator.
struct ExperimentConfig {
  std::string corpus_path;
  CorpusFormat corpus_format = CorpusFormat::kJsonl;
  std::uint64_t synthetic_seed = 1;
  std::size_t synthetic_books = 2000;
  SyntheticProfile synthetic_profile;

  std::string stopwords_file;

  TfidfParams tfidf;
  std::size_t top_n = 20;

  embed::EmbeddingParams embedding;
  // Pretrained model to load instead of training one.
  std::string embedding_model;

  std::vector<rec::AlgorithmId> algorithms = rec::AlgorithmId::all();
  std::size_t k_max = 10;
  std::uint64_t split_seed = 0;
  eval::InferenceOptions inference;
  std::optional<rec::HybridMembers> pinned_members;

  std::string out_dir = "out";

  // Applies `values` on top of the defaults. Throws ConfigError naming the
  // offending key for unknown keys and unparsable or out-of-range values.
  static ExperimentConfig from_key_values(const KeyValues& values);

  // Every key with its current value; from_key_values() of the result
  // reproduces this config.
  KeyValues to_key_values() const;
};

// All recognised "section.key" names.
std::vector<std::string> config_keys();

// INI-style text: `[section]` headers, `key = value` lines, '#' or ';'
// comments. Keys outside a section are rejected.
KeyValues parse_config_text(std::string_view text);
KeyValues load_config_file(const std::string& path);

}  // namespace tagrec

#endif  // TAGREC_CONFIG_H_
