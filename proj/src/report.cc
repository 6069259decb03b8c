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

#include "tagrec/report.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "tagrec/common.h"

namespace tagrec::eval {
namespace {

using json = nlohmann::ordered_json;

json summary_json(const Summary& s) {
  return {{"mean", s.mean},     {"min", s.min}, {"q1", s.q1},
          {"median", s.median}, {"q3", s.q3},   {"max", s.max}};
}

Summary summary_from(const json& j) {
  Summary s;
  s.mean = j.at("mean").get<double>();
  s.min = j.at("min").get<double>();
  s.q1 = j.at("q1").get<double>();
  s.median = j.at("median").get<double>();
  s.q3 = j.at("q3").get<double>();
  s.max = j.at("max").get<double>();
  return s;
}

json members_json(const rec::HybridMembers& m) {
  return {{"mp_none", m.mp_none.name()},
          {"mp_author", m.mp_author.name()},
          {"mp_bisac", m.mp_bisac.name()},
          {"sim_title", m.sim_title.name()},
          {"sim_description", m.sim_description.name()},
          {"best_mp", m.best_mp.name()},
          {"best_sim", m.best_sim.name()}};
}

rec::HybridMembers members_from(const json& j) {
  const auto id = [&](const char* key) {
    return rec::AlgorithmId::parse(j.at(key).get<std::string>());
  };
  rec::HybridMembers m;
  m.mp_none = id("mp_none");
  m.mp_author = id("mp_author");
  m.mp_bisac = id("mp_bisac");
  m.sim_title = id("sim_title");
  m.sim_description = id("sim_description");
  m.best_mp = id("best_mp");
  m.best_sim = id("best_sim");
  return m;
}

std::string family_of(const std::string& algorithm) {
  if (algorithm.rfind("mp-", 0) == 0) return "mp";
  if (algorithm.rfind("sim-", 0) == 0) return "sim";
  if (algorithm.rfind("hyb-", 0) == 0) return "hyb";
  return "other";
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  if (name == "markdown" || name == "md") return ReportFormat::kMarkdown;
  throw ConfigError("unknown report format '" + std::string(name) +
                    "' (expected csv, json or markdown)");
}

std::string report_to_json(const EvaluationReport& report) {
  json root;
  root["format"] = "tagrec-report";
  root["version"] = 1;
  const ProtocolMetadata& m = report.metadata;
  root["metadata"] = {{"split_seed", m.split_seed},
                      {"n_validation", m.n_validation},
                      {"n_test", m.n_test},
                      {"k_max", m.k_max},
                      {"model_digest", m.model_digest},
                      {"inference_seed", m.inference_seed},
                      {"inference_epochs", m.inference_epochs}};
  json selection;
  selection["method"] = report.selection.method;
  selection["members"] = members_json(report.selection.members);
  selection["validation_ndcg"] = json::object();
  for (const auto& [name, value] : report.selection.validation_ndcg) {
    selection["validation_ndcg"][name] = value;
  }
  root["selection"] = std::move(selection);
  json rows = json::array();
  for (const AlgorithmRow& row : report.rows) {
    rows.push_back({{"algorithm", row.algorithm},
                    {"n_cases", row.n_cases},
                    {"n_empty", row.n_empty},
                    {"n_semantic_flagged", row.n_semantic_flagged},
                    {"n_diversity_flagged", row.n_diversity_flagged},
                    {"ndcg", row.ndcg},
                    {"semantic_similarity", summary_json(row.semantic_similarity)},
                    {"diversity", summary_json(row.diversity)}});
  }
  root["rows"] = std::move(rows);
  return root.dump(2) + "\n";
}

EvaluationReport report_from_json(std::string_view text) {
  EvaluationReport report;
  try {
    const json root = json::parse(text);
    if (root.at("format") != "tagrec-report" || root.at("version") != 1) {
      throw DataError("not a tagrec report (format/version mismatch)");
    }
    const json& m = root.at("metadata");
    report.metadata.split_seed = m.at("split_seed").get<std::uint64_t>();
    report.metadata.n_validation = m.at("n_validation").get<std::size_t>();
    report.metadata.n_test = m.at("n_test").get<std::size_t>();
    report.metadata.k_max = m.at("k_max").get<std::size_t>();
    report.metadata.model_digest = m.at("model_digest").get<std::string>();
    report.metadata.inference_seed = m.at("inference_seed").get<std::uint64_t>();
    report.metadata.inference_epochs = m.at("inference_epochs").get<std::size_t>();
    const json& s = root.at("selection");
    report.selection.method = s.at("method").get<std::string>();
    report.selection.members = members_from(s.at("members"));
    for (const auto& item : s.at("validation_ndcg").items()) {
      report.selection.validation_ndcg[item.key()] = item.value().get<double>();
    }
    for (const json& r : root.at("rows")) {
      AlgorithmRow row;
      row.algorithm = r.at("algorithm").get<std::string>();
      row.n_cases = r.at("n_cases").get<std::size_t>();
      row.n_empty = r.at("n_empty").get<std::size_t>();
      row.n_semantic_flagged = r.at("n_semantic_flagged").get<std::size_t>();
      row.n_diversity_flagged = r.at("n_diversity_flagged").get<std::size_t>();
      row.ndcg = r.at("ndcg").get<std::vector<double>>();
      row.semantic_similarity = summary_from(r.at("semantic_similarity"));
      row.diversity = summary_from(r.at("diversity"));
      report.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
  return report;
}

std::string report_to_csv(const EvaluationReport& report) {
  std::ostringstream out;
  out << "algorithm,k,ndcg,semantic_similarity,diversity\n";
  for (const AlgorithmRow& row : report.rows) {
    for (std::size_t k = 1; k <= row.ndcg.size(); ++k) {
      out << row.algorithm << ',' << k << ',' << format_double(row.ndcg[k - 1])
          << ',';
      if (k == row.ndcg.size()) {
        out << format_double(row.semantic_similarity.mean) << ','
            << format_double(row.diversity.mean);
      } else {
        out << ',';
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string report_to_markdown(const EvaluationReport& report) {
  const ProtocolMetadata& m = report.metadata;
  std::ostringstream out;
  out << "# Evaluation report\n\n"
      << "- test cases: " << m.n_test << " (validation: " << m.n_validation
      << ")\n"
      << "- k_max: " << m.k_max << "\n"
      << "- split seed: " << m.split_seed << "\n"
      << "- embedding model: " << m.model_digest << "\n"
      << "- hybrid members (" << report.selection.method
      << "): HYB^Best = " << report.selection.members.best_mp.name() << " + "
      << report.selection.members.best_sim.name() << "\n";

  std::vector<std::size_t> cutoffs;
  for (std::size_t k : {std::size_t{1}, std::size_t{3}, std::size_t{5}, m.k_max}) {
    if (k >= 1 && k <= m.k_max &&
        std::find(cutoffs.begin(), cutoffs.end(), k) == cutoffs.end()) {
      cutoffs.push_back(k);
    }
  }
  const std::pair<const char*, const char*> sections[] = {
      {"mp", "Popularity-based (MP)"},
      {"sim", "Similarity-based (SIM)"},
      {"hyb", "Hybrid (HYB)"},
      {"other", "Other"}};
  for (const auto& [family, title] : sections) {
    std::vector<const AlgorithmRow*> rows;
    for (const AlgorithmRow& row : report.rows) {
      if (family_of(row.algorithm) == family) rows.push_back(&row);
    }
    if (rows.empty()) continue;
    out << "\n## " << title << "\n\n| algorithm |";
    for (std::size_t k : cutoffs) out << " nDCG@" << k << " |";
    out << " semantic similarity | diversity |\n|---|";
    for (std::size_t i = 0; i < cutoffs.size(); ++i) out << "---:|";
    out << "---:|---:|\n";
    for (const AlgorithmRow* row : rows) {
      out << "| " << row->algorithm << " |";
      for (std::size_t k : cutoffs) {
        out << ' ' << (k <= row->ndcg.size() ? fixed(row->ndcg[k - 1]) : "") << " |";
      }
      out << ' ' << fixed(row->semantic_similarity.mean) << " | "
          << fixed(row->diversity.mean) << " |\n";
    }
  }
  return out.str();
}

std::string render_report(const EvaluationReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kCsv:
      return report_to_csv(report);
    case ReportFormat::kJson:
      return report_to_json(report);
    case ReportFormat::kMarkdown:
      return report_to_markdown(report);
  }
  return {};
}

}  // namespace tagrec::eval
