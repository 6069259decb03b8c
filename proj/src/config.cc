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

#include "tagrec/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "tagrec/common.h"
#include "tagrec/report.h"

namespace tagrec {
namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* expected) {
  throw ConfigError("config key '" + key + "': expected " + expected + ", got '" +
                    value + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const std::string v = trim(value);
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    bad_value(key, value, "a non-negative integer");
  }
  return out;
}

std::size_t parse_count(const std::string& key, const std::string& value,
                        std::size_t min = 0) {
  const std::uint64_t v = parse_u64(key, value);
  if (v < min) {
    throw ConfigError("config key '" + key + "': must be >= " + std::to_string(min));
  }
  return static_cast<std::size_t>(v);
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const std::string v = trim(value);
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size() ||
      !std::isfinite(out)) {
    bad_value(key, value, "a finite number");
  }
  return out;
}

double parse_fraction(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (v < 0.0 || v > 1.0) bad_value(key, value, "a fraction in [0, 1]");
  return v;
}

rec::AlgorithmId parse_id(const std::string& key, const std::string& value) {
  try {
    return rec::AlgorithmId::parse(value);
  } catch (const ConfigError& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key,
                                  const std::string& value)>;
using Getter = std::function<std::string(const ExperimentConfig&)>;

struct Field {
  std::string key;
  Setter set;
  Getter get;
};

std::string str(std::uint64_t v) { return std::to_string(v); }

// Accessor for one hybrid slot; touching any slot pins all of them.
Field hybrid_field(const char* name, rec::AlgorithmId rec::HybridMembers::*slot) {
  return {std::string("hybrid.") + name,
          [slot](ExperimentConfig& c, const std::string& key, const std::string& v) {
            if (trim(v).empty()) return;
            if (!c.pinned_members) c.pinned_members.emplace();
            (*c.pinned_members).*slot = parse_id(key, v);
          },
          [slot](const ExperimentConfig& c) {
            return c.pinned_members ? ((*c.pinned_members).*slot).name()
                                    : std::string();
          }};
}

const std::vector<Field>& fields() {
  using C = ExperimentConfig;
  using S = const std::string&;
  static const std::vector<Field>* const kFields = new std::vector<Field>{
      {"corpus.path", [](C& c, S, S v) { c.corpus_path = trim(v); },
       [](const C& c) { return c.corpus_path; }},
      {"corpus.format",
       [](C& c, S k, S v) {
         try {
           c.corpus_format = parse_corpus_format(trim(v));
         } catch (const ConfigError&) {
           bad_value(k, v, "jsonl or csv");
         }
       },
       [](const C& c) {
         return std::string(c.corpus_format == CorpusFormat::kJsonl ? "jsonl" : "csv");
       }},
      {"synthetic.seed", [](C& c, S k, S v) { c.synthetic_seed = parse_u64(k, v); },
       [](const C& c) { return str(c.synthetic_seed); }},
      {"synthetic.books",
       [](C& c, S k, S v) { c.synthetic_books = parse_count(k, v, 1); },
       [](const C& c) { return str(c.synthetic_books); }},
      {"synthetic.topics",
       [](C& c, S k, S v) { c.synthetic_profile.n_topics = parse_count(k, v, 1); },
       [](const C& c) { return str(c.synthetic_profile.n_topics); }},
      {"synthetic.editor_fraction",
       [](C& c, S k, S v) { c.synthetic_profile.editor_fraction = parse_fraction(k, v); },
       [](const C& c) { return eval::format_double(c.synthetic_profile.editor_fraction); }},
      {"synthetic.amazon_fraction",
       [](C& c, S k, S v) { c.synthetic_profile.amazon_fraction = parse_fraction(k, v); },
       [](const C& c) { return eval::format_double(c.synthetic_profile.amazon_fraction); }},
      {"synthetic.both_fraction",
       [](C& c, S k, S v) { c.synthetic_profile.both_fraction = parse_fraction(k, v); },
       [](const C& c) { return eval::format_double(c.synthetic_profile.both_fraction); }},
      {"synthetic.review_fraction",
       [](C& c, S k, S v) { c.synthetic_profile.review_fraction = parse_fraction(k, v); },
       [](const C& c) { return eval::format_double(c.synthetic_profile.review_fraction); }},
      {"text.stopwords_file", [](C& c, S, S v) { c.stopwords_file = trim(v); },
       [](const C& c) { return c.stopwords_file; }},
      {"tfidf.min_df", [](C& c, S k, S v) { c.tfidf.min_df = parse_count(k, v, 1); },
       [](const C& c) { return str(c.tfidf.min_df); }},
      {"tfidf.min_word_length",
       [](C& c, S k, S v) { c.tfidf.min_word_length = parse_count(k, v); },
       [](const C& c) { return str(c.tfidf.min_word_length); }},
      {"tfidf.top_n", [](C& c, S k, S v) { c.top_n = parse_count(k, v, 1); },
       [](const C& c) { return str(c.top_n); }},
      {"embedding.model", [](C& c, S, S v) { c.embedding_model = trim(v); },
       [](const C& c) { return c.embedding_model; }},
      {"embedding.dim", [](C& c, S k, S v) { c.embedding.dim = parse_count(k, v, 1); },
       [](const C& c) { return str(c.embedding.dim); }},
      {"embedding.negative",
       [](C& c, S k, S v) { c.embedding.negative = parse_count(k, v); },
       [](const C& c) { return str(c.embedding.negative); }},
      {"embedding.lr",
       [](C& c, S k, S v) {
         c.embedding.lr0 = parse_double(k, v);
         if (!(c.embedding.lr0 > 0.0)) bad_value(k, v, "a positive number");
       },
       [](const C& c) { return eval::format_double(c.embedding.lr0); }},
      {"embedding.epochs",
       [](C& c, S k, S v) { c.embedding.epochs = parse_count(k, v, 1); },
       [](const C& c) { return str(c.embedding.epochs); }},
      {"embedding.seed", [](C& c, S k, S v) { c.embedding.seed = parse_u64(k, v); },
       [](const C& c) { return str(c.embedding.seed); }},
      {"embedding.min_count",
       [](C& c, S k, S v) { c.embedding.min_count = parse_count(k, v, 1); },
       [](const C& c) { return str(c.embedding.min_count); }},
      {"embedding.sample",
       [](C& c, S k, S v) {
         c.embedding.sample = parse_double(k, v);
         if (c.embedding.sample < 0.0) bad_value(k, v, "a non-negative number");
       },
       [](const C& c) { return eval::format_double(c.embedding.sample); }},
      {"embedding.threads",
       [](C& c, S k, S v) { c.embedding.threads = parse_count(k, v, 1); },
       [](const C& c) { return str(c.embedding.threads); }},
      {"eval.algorithms",
       [](C& c, S k, S v) {
         try {
           c.algorithms = rec::parse_algorithm_list(v);
         } catch (const ConfigError& e) {
           throw ConfigError("config key '" + k + "': " + e.what());
         }
       },
       [](const C& c) {
         std::vector<std::string> names;
         for (const rec::AlgorithmId& id : c.algorithms) names.push_back(id.name());
         return join(names, ",");
       }},
      {"eval.k_max", [](C& c, S k, S v) { c.k_max = parse_count(k, v, 1); },
       [](const C& c) { return str(c.k_max); }},
      {"eval.split_seed", [](C& c, S k, S v) { c.split_seed = parse_u64(k, v); },
       [](const C& c) { return str(c.split_seed); }},
      {"eval.infer_epochs",
       [](C& c, S k, S v) { c.inference.epochs = parse_count(k, v, 1); },
       [](const C& c) { return str(c.inference.epochs); }},
      {"eval.infer_seed", [](C& c, S k, S v) { c.inference.seed = parse_u64(k, v); },
       [](const C& c) { return str(c.inference.seed); }},
      hybrid_field("mp_none", &rec::HybridMembers::mp_none),
      hybrid_field("mp_author", &rec::HybridMembers::mp_author),
      hybrid_field("mp_bisac", &rec::HybridMembers::mp_bisac),
      hybrid_field("sim_title", &rec::HybridMembers::sim_title),
      hybrid_field("sim_description", &rec::HybridMembers::sim_description),
      hybrid_field("best_mp", &rec::HybridMembers::best_mp),
      hybrid_field("best_sim", &rec::HybridMembers::best_sim),
      {"output.out_dir",
       [](C& c, S key, S v) {
         c.out_dir = trim(v);
         if (c.out_dir.empty()) {
           throw ConfigError("config key '" + std::string(key) +
                             "': expected a directory path");
         }
       },
       [](const C& c) { return c.out_dir; }},
  };
  return *kFields;
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const Field& f : fields()) keys.push_back(f.key);
  return keys;
}

ExperimentConfig ExperimentConfig::from_key_values(const KeyValues& values) {
  ExperimentConfig config;
  for (const auto& [key, value] : values) {
    const auto& all = fields();
    const auto it = std::find_if(all.begin(), all.end(),
                                 [&](const Field& f) { return f.key == key; });
    if (it == all.end()) throw ConfigError("unknown config key '" + key + "'");
    it->set(config, key, value);
  }
  try {
    config.synthetic_profile.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config section 'synthetic': ") + e.what());
  }
  if (config.pinned_members) {
    try {
      config.pinned_members->validate();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("config section 'hybrid': ") + e.what());
    }
  }
  return config;
}

KeyValues ExperimentConfig::to_key_values() const {
  KeyValues out;
  for (const Field& f : fields()) out[f.key] = f.get(*this);
  return out;
}

KeyValues parse_config_text(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  KeyValues out;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw ConfigError("config key '" + section + "' is outside any [section]");
    }
    for (const auto& [key, value] : body) {
      out[section + "." + key] = value.get_value<std::string>();
    }
  }
  return out;
}

KeyValues load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace tagrec
