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

// tagrec command-line tool. One subcommand per pipeline stage.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tagrec/common.h"
#include "tagrec/config.h"
#include "tagrec/corpus.h"
#include "tagrec/embed.h"
#include "tagrec/eval.h"
#include "tagrec/pipeline.h"
#include "tagrec/recommend.h"
#include "tagrec/report.h"
#include "tagrec/synthetic.h"

namespace {

using tagrec::ExperimentConfig;
using tagrec::KeyValues;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

// Flags that shadow config keys.
struct Shadow {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr Shadow kShadows[] = {
    {"--corpus", "corpus.path", "corpus file; synthetic corpus when omitted"},
    {"--corpus-format", "corpus.format", "jsonl or csv"},
    {"--synthetic-seed", "synthetic.seed", "synthetic generator seed"},
    {"--synthetic-books", "synthetic.books", "synthetic corpus size"},
    {"--synthetic-topics", "synthetic.topics", "synthetic topic count"},
    {"--stopwords", "text.stopwords_file", "stopword file, one word per line"},
    {"--min-df", "tfidf.min_df", "minimum document frequency"},
    {"--min-word-length", "tfidf.min_word_length", "minimum token length"},
    {"--top-n", "tfidf.top_n", "similar books per query"},
    {"--embedding-model", "embedding.model", "pretrained embedding model"},
    {"--dim", "embedding.dim", "embedding dimension"},
    {"--negative", "embedding.negative", "negative samples per target"},
    {"--lr", "embedding.lr", "initial learning rate"},
    {"--epochs", "embedding.epochs", "training epochs"},
    {"--seed", "embedding.seed", "training seed"},
    {"--threads", "embedding.threads", "training threads (1 = deterministic)"},
    {"--algorithms", "eval.algorithms", "comma-separated ids or 'all'"},
    {"--k-max", "eval.k_max", "largest cutoff"},
    {"--split-seed", "eval.split_seed", "validation/test split seed"},
    {"--infer-epochs", "eval.infer_epochs", "inference passes for metrics"},
    {"--infer-seed", "eval.infer_seed", "inference seed for metrics"},
    {"--out-dir", "output.out_dir", "artifact directory"},
};

// Options shared by every subcommand that resolves an ExperimentConfig.
struct ConfigOptions {
  std::string config_file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> shadowed;

  void attach(CLI::App& app) {
    app.add_option("--config", config_file, "INI config file");
    app.add_option("--set", sets, "override any key: section.key=value");
    for (const Shadow& s : kShadows) {
      app.add_option_function<std::string>(
          s.flag, [this, key = std::string(s.key)](const std::string& v) { shadowed[key] = v; },
          s.help);
    }
  }

  KeyValues overrides() const {
    KeyValues out;
    for (const std::string& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        throw tagrec::ConfigError("--set expects section.key=value, got '" + s + "'");
      }
      out[tagrec::trim(s.substr(0, eq))] = s.substr(eq + 1);
    }
    for (const auto& [k, v] : shadowed) out[k] = v;
    return out;
  }

  ExperimentConfig resolve() const {
    KeyValues values;
    if (!config_file.empty()) values = tagrec::load_config_file(config_file);
    for (const auto& [k, v] : overrides()) values[k] = v;
    return ExperimentConfig::from_key_values(values);
  }
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw tagrec::DataError("cannot write " + path);
}

tagrec::CorpusFormat format_for(const std::string& path, const std::string& format) {
  if (!format.empty()) return tagrec::parse_corpus_format(format);
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  return csv ? tagrec::CorpusFormat::kCsv : tagrec::CorpusFormat::kJsonl;
}

Json stats_json(const tagrec::CorpusStats& s) {
  return Json{{"n_books", s.n_books},
              {"n_with_editor_tags", s.n_with_editor_tags},
              {"n_with_search_terms", s.n_with_search_terms},
              {"n_with_both", s.n_with_both},
              {"n_authors", s.n_authors},
              {"n_bisacs", s.n_bisacs},
              {"n_distinct_editor_tags", s.n_distinct_editor_tags},
              {"n_distinct_search_terms", s.n_distinct_search_terms},
              {"n_with_review_keywords", s.n_with_review_keywords},
              {"n_distinct_review_keywords", s.n_distinct_review_keywords},
              {"avg_review_keywords_per_book", s.avg_review_keywords_per_book},
              {"title_overlap_fraction", s.title_overlap_fraction}};
}

int run(int argc, char** argv) {
  CLI::App app{"Hybrid tag recommendation for e-books: ingest, train, recommend, evaluate."};
  app.require_subcommand(1);
  int status = kExitOk;

  // ingest
  std::string ingest_input, ingest_format, ingest_output, ingest_to = "jsonl";
  CLI::App* ingest = app.add_subcommand("ingest", "Validate, normalize and merge a corpus file");
  ingest->add_option("--input", ingest_input, "corpus file")->required();
  ingest->add_option("--format", ingest_format, "jsonl or csv (default: by extension)");
  ingest->add_option("--output", ingest_output, "normalized corpus (default: stdout)");
  ingest->add_option("--to", ingest_to, "output format: jsonl or csv");
  ingest->callback([&] {
    tagrec::IngestResult r = tagrec::run_stage("ingest", [&] {
      return tagrec::ingest(ingest_input, format_for(ingest_input, ingest_format));
    });
    print_warnings(r.warnings);
    std::ostringstream out;
    if (tagrec::parse_corpus_format(ingest_to) == tagrec::CorpusFormat::kCsv) {
      tagrec::write_csv(r.corpus, out);
    } else {
      tagrec::write_jsonl(r.corpus, out);
    }
    write_output(ingest_output, out.str());
  });

  // stats
  ConfigOptions stats_opts;
  CLI::App* stats = app.add_subcommand("stats", "Print corpus statistics as JSON");
  stats_opts.attach(*stats);
  stats->callback([&] {
    const ExperimentConfig config = stats_opts.resolve();
    tagrec::IngestResult r = tagrec::run_stage("ingest", [&] { return tagrec::load_corpus(config); });
    print_warnings(r.warnings);
    std::cout << stats_json(tagrec::compute_stats(r.corpus)).dump(2) << "\n";
  });

  // synth
  ConfigOptions synth_opts;
  std::string synth_output;
  CLI::App* synth = app.add_subcommand("synth", "Generate a topic-clustered synthetic corpus");
  synth_opts.attach(*synth);
  synth->add_option("--output", synth_output, "corpus JSONL (default: stdout)");
  synth->callback([&] {
    const ExperimentConfig config = synth_opts.resolve();
    const tagrec::Corpus corpus = tagrec::run_stage("synth", [&] {
      return tagrec::generate_synthetic(config.synthetic_seed, config.synthetic_books,
                                        config.synthetic_profile);
    });
    write_output(synth_output, tagrec::to_jsonl(corpus));
  });

  // train-embeddings
  ConfigOptions train_opts;
  std::string train_output;
  CLI::App* train = app.add_subcommand("train-embeddings", "Train a paragraph-vector model");
  train_opts.attach(*train);
  train->add_option("--output", train_output, "model file")->required();
  train->callback([&] {
    ExperimentConfig config = train_opts.resolve();
    config.embedding_model.clear();
    tagrec::IngestResult r = tagrec::run_stage("ingest", [&] { return tagrec::load_corpus(config); });
    print_warnings(r.warnings);
    const tagrec::embed::EmbeddingModel model = tagrec::run_stage(
        "embed", [&] { return tagrec::load_or_train_embeddings(config, r.corpus); });
    tagrec::run_stage("write", [&] { model.save(train_output); });
    Json summary{{"model", train_output},
                 {"digest", model.digest()},
                 {"documents", model.doc_vectors().size()},
                 {"vocabulary", model.vocab_size()},
                 {"epoch_losses", model.epoch_losses()}};
    std::cout << summary.dump(2) << "\n";
  });

  // recommend
  ConfigOptions rec_opts;
  std::string rec_algorithm, rec_isbn;
  std::size_t rec_k = 10;
  CLI::App* recommend = app.add_subcommand("recommend", "Recommend tags for one book as JSON");
  rec_opts.attach(*recommend);
  recommend->add_option("--algorithm", rec_algorithm, "algorithm id")->required();
  recommend->add_option("--isbn", rec_isbn, "query book")->required();
  recommend->add_option("--k", rec_k, "list length")->check(CLI::PositiveNumber);
  recommend->callback([&] {
    const ExperimentConfig config = rec_opts.resolve();
    const tagrec::rec::AlgorithmId id = tagrec::rec::AlgorithmId::parse(rec_algorithm);
    tagrec::IngestResult r = tagrec::run_stage("ingest", [&] { return tagrec::load_corpus(config); });
    print_warnings(r.warnings);
    const tagrec::text::StopwordSet stopwords = tagrec::load_configured_stopwords(config);
    auto visible = std::make_shared<const tagrec::Corpus>(r.corpus.without_review_keywords());
    tagrec::rec::Resources resources = tagrec::run_stage("index", [&] {
      return tagrec::rec::Resources::build(visible, config.tfidf, stopwords, config.top_n);
    });
    if (config.pinned_members) {
      resources.members = *config.pinned_members;
    } else if (id.family() == tagrec::rec::Family::kHYB) {
      resources.members = tagrec::run_stage("select", [&] {
        const auto split = tagrec::eval::split_cases(r.corpus, config.split_seed);
        const auto cases = tagrec::eval::make_test_cases(r.corpus, split.validation);
        return tagrec::eval::select_hybrid_members(resources, cases).members;
      });
    }
    const tagrec::rec::ScoredTagList list = tagrec::run_stage("recommend", [&] {
      return tagrec::rec::make_algorithm(id, resources)(visible->at(rec_isbn), rec_k);
    });
    Json entries = Json::array();
    for (const auto& e : list.entries) entries.push_back({{"tag", e.tag}, {"score", e.score}});
    Json out{{"isbn", rec_isbn}, {"algorithm", id.name()}, {"k", rec_k}, {"tags", entries}};
    if (!list.diagnostic.empty()) out["diagnostic"] = list.diagnostic;
    std::cout << out.dump(2) << "\n";
  });

  // evaluate
  ConfigOptions eval_opts;
  std::string eval_manifest;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Run the full evaluation protocol");
  eval_opts.attach(*evaluate);
  evaluate->add_option("--manifest", eval_manifest,
                       "rerun a recorded manifest and verify its outputs");
  evaluate->callback([&] {
    tagrec::RunResult result;
    if (!eval_manifest.empty()) {
      if (!eval_opts.config_file.empty()) {
        throw tagrec::ConfigError("--config and --manifest are mutually exclusive");
      }
      const tagrec::Manifest manifest =
          tagrec::run_stage("manifest", [&] { return tagrec::load_manifest(eval_manifest); });
      result = tagrec::rerun_manifest(manifest, eval_opts.overrides());
    } else {
      result = tagrec::run_experiment(eval_opts.resolve());
    }
    print_warnings(result.warnings);
    std::cout << tagrec::eval::report_to_markdown(result.report);
  });

  // report
  std::string report_input, report_format = "markdown", report_output;
  CLI::App* report = app.add_subcommand("report", "Render a report.json");
  report->add_option("--input", report_input, "report.json")->required();
  report->add_option("--format", report_format, "csv, json or markdown");
  report->add_option("--output", report_output, "destination (default: stdout)");
  report->callback([&] {
    const tagrec::eval::ReportFormat format = tagrec::eval::parse_report_format(report_format);
    std::ifstream in(report_input, std::ios::binary);
    if (!in) throw tagrec::DataError("cannot read report: " + report_input);
    std::ostringstream buf;
    buf << in.rdbuf();
    const tagrec::eval::EvaluationReport parsed = tagrec::eval::report_from_json(buf.str());
    write_output(report_output, tagrec::eval::render_report(parsed, format));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    status = kExitConfig;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const tagrec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const tagrec::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const tagrec::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
}
