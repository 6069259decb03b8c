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

#ifndef TAGREC_REPORT_H_
#define TAGREC_REPORT_H_

#include <string>
#include <string_view>

#include "tagrec/eval.h"

namespace tagrec::eval {

enum class ReportFormat { kCsv, kJson, kMarkdown };

ReportFormat parse_report_format(std::string_view name);

// Nested JSON; report_from_json(report_to_json(r)) == r.
std::string report_to_json(const EvaluationReport& report);
// Throws DataError on malformed input.
EvaluationReport report_from_json(std::string_view json);

// One row per algorithm and k, header
// `algorithm,k,ndcg,semantic_similarity,diversity`. The beyond-accuracy
// columns are filled on the k = k_max rows and left empty otherwise.
std::string report_to_csv(const EvaluationReport& report);

// Tables grouped into popularity, similarity and hybrid sections.
std::string report_to_markdown(const EvaluationReport& report);

std::string render_report(const EvaluationReport& report, ReportFormat format);

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace tagrec::eval

#endif  // TAGREC_REPORT_H_
