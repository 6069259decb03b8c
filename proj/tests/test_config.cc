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
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "tagrec/common.h"
#include "tagrec/config.h"

namespace tagrec {
namespace {

// Runs from_key_values and returns the ConfigError message, or "" on success.
std::string error_of(const KeyValues& values) {
  try {
    ExperimentConfig::from_key_values(values);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool mentions(const std::string& message, const std::string& key) {
  return message.find(key) != std::string::npos;
}

TEST_CASE("defaults") {
  const ExperimentConfig c = ExperimentConfig::from_key_values({});
  CHECK(c.corpus_path.empty());
  CHECK(c.embedding_model.empty());
  CHECK(c.tfidf.min_df == 10);
  CHECK(c.tfidf.min_word_length == 5);
  CHECK(c.top_n == 20);
  CHECK(c.embedding.dim == 50);
  CHECK(c.embedding.negative == 10);
  CHECK(c.embedding.lr0 == 0.025);
  CHECK(c.embedding.epochs == 10);
  CHECK(c.embedding.threads == 1);
  CHECK(c.algorithms.size() == 19);
  CHECK(c.k_max == 10);
  CHECK(c.inference.epochs == 50);
  CHECK(c.inference.seed == 7);
  CHECK(!c.pinned_members);
}

TEST_CASE("INI text is parsed into section keys") {
  const KeyValues kv = parse_config_text(
      "# experiment\n"
      "[corpus]\n"
      "path = data/books.jsonl\n"
      "format = csv\n"
      "\n"
      "[embedding]\n"
      "; tuned for the small corpus\n"
      "dim = 24\n");
  CHECK(kv.at("corpus.path") == "data/books.jsonl");
  CHECK(kv.at("corpus.format") == "csv");
  CHECK(kv.at("embedding.dim") == "24");
  CHECK(kv.size() == 3);
  CHECK_THROWS_AS(parse_config_text("orphan = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[broken\n"), ConfigError);
}

TEST_CASE("values are applied") {
  const ExperimentConfig c = ExperimentConfig::from_key_values({
      {"corpus.path", "books.csv"},
      {"corpus.format", "csv"},
      {"synthetic.books", "500"},
      {"synthetic.review_fraction", "0.5"},
      {"tfidf.min_df", "2"},
      {"tfidf.top_n", "5"},
      {"embedding.dim", "16"},
      {"embedding.lr", "0.05"},
      {"embedding.threads", "2"},
      {"eval.algorithms", "mp-editor, hyb-best"},
      {"eval.k_max", "5"},
      {"eval.infer_seed", "99"},
      {"output.out_dir", "runs/a"},
  });
  CHECK(c.corpus_path == "books.csv");
  CHECK(c.corpus_format == CorpusFormat::kCsv);
  CHECK(c.synthetic_books == 500);
  CHECK(c.synthetic_profile.review_fraction == 0.5);
  CHECK(c.tfidf.min_df == 2);
  CHECK(c.top_n == 5);
  CHECK(c.embedding.dim == 16);
  CHECK(c.embedding.lr0 == 0.05);
  CHECK(c.embedding.threads == 2);
  CHECK(c.algorithms == rec::parse_algorithm_list("mp-editor,hyb-best"));
  CHECK(c.k_max == 5);
  CHECK(c.inference.seed == 99);
  CHECK(c.out_dir == "runs/a");
}

TEST_CASE("pinning one hybrid member pins the set") {
  const ExperimentConfig c =
      ExperimentConfig::from_key_values({{"hybrid.best_sim", "sim-title-amazon"}});
  REQUIRE(c.pinned_members);
  CHECK(c.pinned_members->best_sim == rec::AlgorithmId::parse("sim-title-amazon"));
  CHECK(c.pinned_members->best_mp == rec::HybridMembers{}.best_mp);
  CHECK(!ExperimentConfig::from_key_values({{"hybrid.best_sim", ""}}).pinned_members);
  CHECK(mentions(error_of({{"hybrid.sim_title", "mp-editor"}}), "sim_title"));
}

TEST_CASE("every failure names the offending key") {
  CHECK(mentions(error_of({{"embedding.dimension", "3"}}), "embedding.dimension"));
  CHECK(mentions(error_of({{"nosection", "3"}}), "nosection"));
  const std::vector<std::pair<std::string, std::string>> bad = {
      {"corpus.format", "xml"},
      {"synthetic.seed", "-1"},
      {"synthetic.books", "many"},
      {"synthetic.books", "0"},
      {"synthetic.topics", "0"},
      {"synthetic.editor_fraction", "1.5"},
      {"synthetic.review_fraction", "nan"},
      {"tfidf.min_df", "0"},
      {"tfidf.min_df", "3.5"},
      {"tfidf.min_word_length", ""},
      {"tfidf.top_n", "0"},
      {"embedding.dim", "0"},
      {"embedding.negative", "x"},
      {"embedding.lr", "-0.1"},
      {"embedding.lr", "inf"},
      {"embedding.epochs", "0"},
      {"embedding.seed", "1e3"},
      {"embedding.min_count", "0"},
      {"embedding.sample", "-1"},
      {"embedding.threads", "0"},
      {"eval.algorithms", "mp-editor,unknown-algo"},
      {"eval.algorithms", ""},
      {"eval.k_max", "0"},
      {"eval.split_seed", "abc"},
      {"eval.infer_epochs", "0"},
      {"eval.infer_seed", "12x"},
      {"hybrid.mp_none", "nope"},
      {"output.out_dir", ""},
  };
  for (const auto& [key, value] : bad) {
    const std::string message = error_of({{key, value}});
    INFO(key << " = '" << value << "' -> " << message);
    CHECK(!message.empty());
    CHECK(mentions(message, key.substr(key.find('.') + 1)));
  }
  CHECK(mentions(error_of({{"eval.algorithms", "mp-editor,unknown-algo"}}), "unknown-algo"));
}

TEST_CASE("to_key_values round-trips") {
  const ExperimentConfig c = ExperimentConfig::from_key_values({
      {"synthetic.seed", "9"},
      {"synthetic.editor_fraction", "0.6"},
      {"synthetic.amazon_fraction", "0.3333333333333333"},
      {"embedding.lr", "0.1"},
      {"eval.algorithms", "sim-desc-amazon,mp-bisac-editor"},
      {"hybrid.mp_bisac", "mp-bisac-amazon"},
  });
  const KeyValues kv = c.to_key_values();
  const ExperimentConfig back = ExperimentConfig::from_key_values(kv);
  CHECK(back.to_key_values() == kv);
  CHECK(back.synthetic_profile.amazon_fraction == c.synthetic_profile.amazon_fraction);
  CHECK(back.algorithms == c.algorithms);
  CHECK(back.pinned_members == c.pinned_members);
  for (const auto& [key, value] : kv) {
    const auto keys = config_keys();
    CHECK(std::find(keys.begin(), keys.end(), key) != keys.end());
  }
  CHECK(ExperimentConfig::from_key_values(ExperimentConfig{}.to_key_values())
            .to_key_values() == ExperimentConfig{}.to_key_values());
}

TEST_CASE("config files") {
  const std::string path = "test_config_tmp.ini";
  {
    std::ofstream out(path);
    out << "[eval]\nk_max = 7\n";
  }
  const ExperimentConfig c = ExperimentConfig::from_key_values(load_config_file(path));
  CHECK(c.k_max == 7);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config_file("/nonexistent/config.ini"), ConfigError);
}

}  // namespace
}  // namespace tagrec
