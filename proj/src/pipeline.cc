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

#include "tagrec/pipeline.h"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "tagrec/common.h"
#include "tagrec/report.h"
#include "tagrec/synthetic.h"

namespace tagrec {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr const char* kManifestFormat = "tagrec-manifest";
constexpr int kManifestVersion = 1;

// Files created by one run, removed again unless commit() is called.
class ArtifactGuard {
 public:
  explicit ArtifactGuard(fs::path dir) : dir_(std::move(dir)) {}
  ArtifactGuard(const ArtifactGuard&) = delete;
  ArtifactGuard& operator=(const ArtifactGuard&) = delete;

  ~ArtifactGuard() {
    if (committed_) return;
    std::error_code ec;
    for (const fs::path& p : written_) fs::remove(p, ec);
    if (created_dir_) fs::remove(dir_, ec);  // only succeeds when empty
  }

  void prepare() {
    if (fs::exists(dir_)) {
      if (!fs::is_directory(dir_)) {
        throw DataError("output path is not a directory: " + dir_.string());
      }
      return;
    }
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw DataError("cannot create output directory " + dir_.string());
    created_dir_ = true;
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

  void write(const std::string& name, const std::string& content) {
    const fs::path p = path(name);
    written_.push_back(p);
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("cannot write " + p.string());
  }

  void track(const fs::path& p) { written_.push_back(p); }
  void commit() { committed_ = true; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool created_dir_ = false;
  bool committed_ = false;
};

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(std::string("cannot read ") + what + ": " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string digest_of(std::string_view bytes) { return to_hex(fnv1a64(bytes)); }

}  // namespace

std::string file_digest(const std::string& path) {
  return digest_of(read_file(path, "file"));
}

IngestResult load_corpus(const ExperimentConfig& config) {
  if (!config.corpus_path.empty()) return ingest(config.corpus_path, config.corpus_format);
  return {generate_synthetic(config.synthetic_seed, config.synthetic_books,
                             config.synthetic_profile),
          {}};
}

text::StopwordSet load_configured_stopwords(const ExperimentConfig& config) {
  if (config.stopwords_file.empty()) return text::default_stopwords();
  return text::load_stopwords(config.stopwords_file);
}

embed::EmbeddingModel load_or_train_embeddings(const ExperimentConfig& config,
                                               const Corpus& corpus) {
  if (!config.embedding_model.empty()) {
    return embed::EmbeddingModel::load(config.embedding_model);
  }
  const embed::TrainingCorpus training =
      embed::build_training_corpus(corpus.without_review_keywords());
  return embed::EmbeddingModel::train(training.docs, config.embedding);
}

std::string Manifest::to_json() const {
  Json j;
  j["format"] = kManifestFormat;
  j["version"] = kManifestVersion;
  Json cfg = Json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  j["config"] = cfg;
  Json in = Json::object();
  for (const auto& [role, input] : inputs) {
    in[role] = Json{{"path", input.path}, {"digest", input.digest}};
  }
  j["inputs"] = in;
  Json out = Json::object();
  for (const auto& [name, digest] : outputs) out[name] = digest;
  j["outputs"] = out;
  return j.dump(2) + "\n";
}

Manifest Manifest::from_json(std::string_view json) {
  Json j;
  try {
    j = Json::parse(json);
  } catch (const Json::exception& e) {
    throw DataError(std::string("manifest is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kManifestFormat) {
      throw DataError("not a tagrec manifest");
    }
    if (j.at("version").get<int>() != kManifestVersion) {
      throw DataError("unsupported manifest version " + j.at("version").dump());
    }
    Manifest m;
    for (const auto& [k, v] : j.at("config").items()) m.config[k] = v.get<std::string>();
    for (const auto& [role, v] : j.at("inputs").items()) {
      m.inputs[role] = {v.at("path").get<std::string>(), v.at("digest").get<std::string>()};
    }
    for (const auto& [name, v] : j.at("outputs").items()) {
      m.outputs[name] = v.get<std::string>();
    }
    return m;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed manifest: ") + e.what());
  }
}

Manifest load_manifest(const std::string& path) {
  return Manifest::from_json(read_file(path, "manifest"));
}

RunResult run_experiment(const ExperimentConfig& config) {
  RunResult result;
  result.manifest.config = config.to_key_values();

  // Cheap checks first so that a bad config fails before any compute.
  run_stage("config", [&] {
    if (config.algorithms.empty()) throw ConfigError("no algorithms selected");
    config.embedding.validate();
    if (config.pinned_members) config.pinned_members->validate();
  });

  ArtifactGuard artifacts(config.out_dir);
  run_stage("output", [&] { artifacts.prepare(); });

  const text::StopwordSet stopwords = run_stage("ingest", [&] {
    if (!config.stopwords_file.empty()) {
      result.manifest.inputs["stopwords"] = {config.stopwords_file,
                                             file_digest(config.stopwords_file)};
    }
    return load_configured_stopwords(config);
  });
  const Corpus corpus = run_stage("ingest", [&] {
    if (!config.corpus_path.empty()) {
      result.manifest.inputs["corpus"] = {config.corpus_path,
                                          file_digest(config.corpus_path)};
    }
    IngestResult ingested = load_corpus(config);
    result.warnings = std::move(ingested.warnings);
    return std::move(ingested.corpus);
  });

  const embed::EmbeddingModel model = run_stage("embed", [&] {
    if (!config.embedding_model.empty()) {
      result.manifest.inputs["embedding_model"] = {config.embedding_model,
                                                   file_digest(config.embedding_model)};
    }
    return load_or_train_embeddings(config, corpus);
  });

  result.report = run_stage("evaluate", [&] {
    eval::ProtocolOptions options;
    options.k_max = config.k_max;
    options.split_seed = config.split_seed;
    options.inference = config.inference;
    options.tfidf = config.tfidf;
    options.top_n = config.top_n;
    options.stopwords = stopwords;
    options.pinned_members = config.pinned_members;
    return eval::run_protocol(corpus, config.algorithms, model, options);
  });

  run_stage("write", [&] {
    std::map<std::string, std::string> files;
    files["report.json"] = eval::report_to_json(result.report);
    files["report.csv"] = eval::report_to_csv(result.report);
    files["report.md"] = eval::report_to_markdown(result.report);
    if (config.embedding_model.empty()) {
      std::ostringstream bin;
      model.save(bin);
      files["embedding.bin"] = bin.str();
    }
    for (const auto& [name, content] : files) {
      artifacts.write(name, content);
      result.manifest.outputs[name] = digest_of(content);
    }
    artifacts.write("manifest.json", result.manifest.to_json());
  });
  artifacts.commit();
  return result;
}

RunResult rerun_manifest(const Manifest& manifest, const KeyValues& overrides) {
  KeyValues values = manifest.config;
  for (const auto& [k, v] : overrides) values[k] = v;
  const ExperimentConfig config =
      run_stage("config", [&] { return ExperimentConfig::from_key_values(values); });

  run_stage("manifest", [&] {
    const std::map<std::string, std::string> live = {
        {"corpus", config.corpus_path},
        {"stopwords", config.stopwords_file},
        {"embedding_model", config.embedding_model}};
    for (const auto& [role, input] : manifest.inputs) {
      const auto it = live.find(role);
      if (it == live.end() || it->second != input.path) continue;
      if (file_digest(input.path) != input.digest) {
        throw DataError("input '" + input.path + "' changed since the manifest was written");
      }
    }
  });

  RunResult result = run_experiment(config);
  if (config.embedding.threads > 1 && config.embedding_model.empty()) {
    result.warnings.push_back(
        "multi-threaded training is not reproducible; outputs were not compared");
    return result;
  }
  run_stage("manifest", [&] {
    for (const auto& [name, digest] : manifest.outputs) {
      const auto it = result.manifest.outputs.find(name);
      if (it != result.manifest.outputs.end() && it->second != digest) {
        throw DataError(name + " differs from the manifest (" + it->second + " vs " +
                        digest + ")");
      }
    }
  });
  return result;
}

}  // namespace tagrec
