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

#ifndef TAGREC_PIPELINE_H_
#define TAGREC_PIPELINE_H_

#include <map>
#include <string>
#include <vector>

#include "tagrec/config.h"
#include "tagrec/corpus.h"
#include "tagrec/embed.h"
#include "tagrec/eval.h"
#include "tagrec/text.h"

namespace tagrec {

// Runs `body` and re-throws any tagrec error with "<stage>: " prepended,
// keeping its category.
template <typename F>
auto run_stage(const std::string& stage, F&& body) -> decltype(body());

// Corpus named by the config: the ingested file, or the synthetic
// generator's output when no path is set.
IngestResult load_corpus(const ExperimentConfig& config);

text::StopwordSet load_configured_stopwords(const ExperimentConfig& config);

// Loads config.embedding_model when set, trains on `corpus` otherwise.
embed::EmbeddingModel load_or_train_embeddings(const ExperimentConfig& config,
                                               const Corpus& corpus);

struct ManifestInput {
  std::string path;
  std::string digest;
  bool operator==(const ManifestInput&) const = default;
};

// What a run consumed and produced. Reloading it and running again
// reproduces every output byte for byte when training is single-threaded.
struct Manifest {
  KeyValues config;
  // Keyed by role: "corpus", "stopwords", "embedding_model".
  std::map<std::string, ManifestInput> inputs;
  // File name under the output directory -> digest.
  std::map<std::string, std::string> outputs;

  std::string to_json() const;
  static Manifest from_json(std::string_view json);
  bool operator==(const Manifest&) const = default;
};

Manifest load_manifest(const std::string& path);

// Hex FNV-1a digest of a file's bytes. Throws DataError when unreadable.
std::string file_digest(const std::string& path);

struct RunResult {
  eval::EvaluationReport report;
  Manifest manifest;
  std::vector<std::string> warnings;
};

// ingest -> index -> embed -> evaluate -> write. Writes report.json,
// report.csv, report.md, manifest.json and, when trained here,
// embedding.bin under config.out_dir. On failure every file written by this
// call is removed and the error message is prefixed with the failing stage.
RunResult run_experiment(const ExperimentConfig& config);

// Re-runs a manifest. Inputs must still match their recorded digests; the
// new outputs are compared against the recorded ones and a mismatch throws
// DataError. `overrides` are applied on top of the recorded config (use
// output.out_dir to write elsewhere).
RunResult rerun_manifest(const Manifest& manifest, const KeyValues& overrides = {});

// Implementation.

template <typename F>
auto run_stage(const std::string& stage, F&& body) -> decltype(body()) {
  const std::string prefix = stage + ": ";
  try {
    return body();
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const LookupError& e) {
    throw LookupError(prefix + e.what());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const NumericError& e) {
    throw NumericError(prefix + e.what());
  } catch (const Error& e) {
    throw Error(prefix + e.what());
  }
}

}  // namespace tagrec

#endif  // TAGREC_PIPELINE_H_
