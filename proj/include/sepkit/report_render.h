// sepkit/report_render.h

// Copyright 2026  The sepkit project authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SEPKIT_REPORT_RENDER_H_
#define SEPKIT_REPORT_RENDER_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sepkit/evaluate.h"

namespace sepkit {

std::string ReportToJson(const EvalReport& report);
EvalReport ReportFromJson(const std::string& text);

// CSV: '#'-prefixed metadata lines, then one row per utterance record.
// Numbers round-trip exactly.
std::string ReportToCsv(const EvalReport& report);
EvalReport ReportFromCsv(const std::string& text);

// Plain-text score table, one row per strategy, task columns grouped as
// SD | CSS | NSS. Cells are SI-SNRi means to two decimals; missing tasks
// render as "-".
std::string RenderTableText(
    const std::vector<std::pair<std::string, EvalReport>>& rows);

// Per-channel degradation histograms. Valid (empty-axes) image when the
// report has no degradation stats.
void RenderDegradationPng(const EvalReport& report,
                          const std::filesystem::path& path);

// Writes the requested formats into out_dir: "json" -> report.json,
// "csv" -> report.csv, "table" -> table.txt, "plot" -> degradation.png.
// Unknown format names are contract violations. The table row label comes
// from metadata["strategy"] when present.
void RenderReport(const EvalReport& report,
                  const std::filesystem::path& out_dir,
                  const std::vector<std::string>& formats);

}  // namespace sepkit

#endif  // SEPKIT_REPORT_RENDER_H_
