// sepkit/report_render.cc

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

#include "sepkit/report_render.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "png_writer.h"
#include "sepkit/common.h"

namespace sepkit {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr TaskTag kTableOrder[] = {TaskTag::k1spN, TaskTag::k2sp,
                                   TaskTag::k3sp, TaskTag::k2spN,
                                   TaskTag::k3spN};

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ordered_json DegradationToJson(const DegradationStats& d) {
  ordered_json j;
  j["count"] = d.count;
  j["ch1_mean"] = d.ch1_mean;
  j["ch1_stddev"] = d.ch1_stddev;
  j["ch2_mean"] = d.ch2_mean;
  j["ch2_stddev"] = d.ch2_stddev;
  ordered_json recs = ordered_json::array();
  for (const DegradationRecord& r : d.records) {
    ordered_json jr;
    jr["id"] = r.id;
    jr["tag"] = TaskTagName(r.tag);
    jr["ch1_delta_db"] = r.ch1_delta_db;
    jr["ch2_delta_db"] = r.ch2_delta_db;
    recs.push_back(std::move(jr));
  }
  j["records"] = std::move(recs);
  return j;
}

DegradationStats DegradationFromJson(const ordered_json& j) {
  DegradationStats d;
  d.count = j.at("count").get<int>();
  d.ch1_mean = j.at("ch1_mean").get<double>();
  d.ch1_stddev = j.at("ch1_stddev").get<double>();
  d.ch2_mean = j.at("ch2_mean").get<double>();
  d.ch2_stddev = j.at("ch2_stddev").get<double>();
  for (const auto& jr : j.at("records")) {
    DegradationRecord r;
    r.id = jr.at("id").get<std::string>();
    r.tag = ParseTaskTag(jr.at("tag").get<std::string>());
    r.ch1_delta_db = jr.at("ch1_delta_db").get<double>();
    r.ch2_delta_db = jr.at("ch2_delta_db").get<double>();
    d.records.push_back(std::move(r));
  }
  return d;
}

template <typename T>
std::string JoinSemicolon(const std::vector<T>& xs,
                          const std::function<std::string(const T&)>& fmt) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    out += fmt(xs[i]);
  }
  return out;
}

std::vector<std::string> SplitOn(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

}  // namespace

std::string ReportToJson(const EvalReport& report) {
  ordered_json j;
  j["metadata"] = report.metadata;
  ordered_json per_task;
  for (TaskTag tag : kTableOrder) {
    auto it = report.per_task.find(tag);
    if (it == report.per_task.end()) continue;
    ordered_json t;
    t["count"] = it->second.count;
    t["mean_si_snri"] = it->second.mean;
    t["stddev_si_snri"] = it->second.stddev;
    per_task[TaskTagName(tag)] = std::move(t);
  }
  j["per_task"] = std::move(per_task);
  ordered_json recs = ordered_json::array();
  for (const UtteranceRecord& r : report.records) {
    ordered_json jr;
    jr["id"] = r.id;
    jr["tag"] = TaskTagName(r.tag);
    jr["stop_reason"] = r.stop_reason;
    jr["num_extracted"] = r.num_extracted;
    jr["matching"] = r.matching;
    jr["per_source_si_snr"] = r.per_source_si_snr;
    jr["per_source_si_snri"] = r.per_source_si_snri;
    jr["mean_si_snri"] = r.mean_si_snri;
    recs.push_back(std::move(jr));
  }
  j["records"] = std::move(recs);
  j["degradation"] = report.degradation
                         ? DegradationToJson(*report.degradation)
                         : ordered_json(nullptr);
  return j.dump(2);
}

EvalReport ReportFromJson(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  EvalReport report;
  report.metadata = j.at("metadata");
  for (const auto& jr : j.at("records")) {
    UtteranceRecord r;
    r.id = jr.at("id").get<std::string>();
    r.tag = ParseTaskTag(jr.at("tag").get<std::string>());
    r.stop_reason = jr.at("stop_reason").get<std::string>();
    r.num_extracted = jr.at("num_extracted").get<int>();
    r.matching = jr.at("matching").get<std::vector<int>>();
    r.per_source_si_snr = jr.at("per_source_si_snr").get<std::vector<double>>();
    r.per_source_si_snri =
        jr.at("per_source_si_snri").get<std::vector<double>>();
    r.mean_si_snri = jr.at("mean_si_snri").get<double>();
    report.records.push_back(std::move(r));
  }
  if (!j.at("degradation").is_null())
    report.degradation = DegradationFromJson(j.at("degradation"));
  AggregateReport(&report);
  return report;
}

std::string ReportToCsv(const EvalReport& report) {
  std::string out;
  out += "# sepkit-eval-report v1\n";
  out += "# metadata: " + report.metadata.dump() + "\n";
  if (report.degradation)
    out += "# degradation: " + DegradationToJson(*report.degradation).dump() +
           "\n";
  out +=
      "id,tag,stop_reason,num_extracted,matching,per_source_si_snr,"
      "per_source_si_snri,mean_si_snri\n";
  const std::function<std::string(const int&)> fmt_int =
      [](const int& v) { return std::to_string(v); };
  const std::function<std::string(const double&)> fmt_num =
      [](const double& v) { return Num(v); };
  for (const UtteranceRecord& r : report.records) {
    out += r.id;
    out += ',';
    out += TaskTagName(r.tag);
    out += ',';
    out += r.stop_reason;
    out += ',';
    out += std::to_string(r.num_extracted);
    out += ',';
    out += JoinSemicolon(r.matching, fmt_int);
    out += ',';
    out += JoinSemicolon(r.per_source_si_snr, fmt_num);
    out += ',';
    out += JoinSemicolon(r.per_source_si_snri, fmt_num);
    out += ',';
    out += Num(r.mean_si_snri);
    out += '\n';
  }
  return out;
}

EvalReport ReportFromCsv(const std::string& text) {
  EvalReport report;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# metadata: ", 0) == 0) {
      report.metadata = ordered_json::parse(line.substr(12));
      continue;
    }
    if (line.rfind("# degradation: ", 0) == 0) {
      report.degradation =
          DegradationFromJson(ordered_json::parse(line.substr(15)));
      continue;
    }
    if (line[0] == '#') continue;
    if (!header_seen) {  // column header
      header_seen = true;
      continue;
    }
    const std::vector<std::string> cols = SplitOn(line, ',');
    if (cols.size() != 8) throw ContractViolation("csv: malformed row");
    UtteranceRecord r;
    r.id = cols[0];
    r.tag = ParseTaskTag(cols[1]);
    r.stop_reason = cols[2];
    r.num_extracted = std::stoi(cols[3]);
    for (const std::string& v : SplitOn(cols[4], ';'))
      r.matching.push_back(std::stoi(v));
    for (const std::string& v : SplitOn(cols[5], ';'))
      r.per_source_si_snr.push_back(std::stod(v));
    for (const std::string& v : SplitOn(cols[6], ';'))
      r.per_source_si_snri.push_back(std::stod(v));
    r.mean_si_snri = std::stod(cols[7]);
    report.records.push_back(std::move(r));
  }
  AggregateReport(&report);
  return report;
}

std::string RenderTableText(
    const std::vector<std::pair<std::string, EvalReport>>& rows) {
  std::ostringstream out;
  size_t label_w = 10;
  for (const auto& [label, report] : rows)
    label_w = std::max(label_w, label.size() + 2);

  auto pad = [](const std::string& s, size_t w) {
    return s + std::string(s.size() < w ? w - s.size() : 1, ' ');
  };

  out << pad("", label_w) << "SI-SNRi\n";
  out << pad("", label_w) << pad("SD", 9) << pad("CSS", 18) << "NSS\n";
  out << pad("strategy", label_w);
  for (TaskTag tag : kTableOrder) out << pad(TaskTagName(tag), 9);
  out << "\n";
  for (const auto& [label, report] : rows) {
    out << pad(label, label_w);
    for (TaskTag tag : kTableOrder) {
      auto it = report.per_task.find(tag);
      if (it == report.per_task.end()) {
        out << pad("-", 9);
      } else {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", it->second.mean);
        out << pad(buf, 9);
      }
    }
    out << "\n";
  }
  return out.str();
}

void RenderDegradationPng(const EvalReport& report,
                          const std::filesystem::path& path) {
  const int width = 800, height = 400, panel = height / 2;
  std::vector<unsigned char> rgb(static_cast<size_t>(width) * height * 3, 255);

  auto put = [&](int x, int y, unsigned char r, unsigned char g,
                 unsigned char b) {
    if (x < 0 || x >= width || y < 0 || y >= height) return;
    const size_t off = (static_cast<size_t>(y) * width + x) * 3;
    rgb[off] = r;
    rgb[off + 1] = g;
    rgb[off + 2] = b;
  };

  // Panel baselines.
  for (int x = 0; x < width; ++x) {
    put(x, panel - 1, 0, 0, 0);
    put(x, height - 1, 0, 0, 0);
  }

  if (report.degradation && !report.degradation->records.empty()) {
    const DegradationStats& d = *report.degradation;
    double lo = 0.0, hi = 0.0;
    for (const DegradationRecord& r : d.records) {
      lo = std::min({lo, r.ch1_delta_db, r.ch2_delta_db});
      hi = std::max({hi, r.ch1_delta_db, r.ch2_delta_db});
    }
    if (hi <= lo) hi = lo + 1.0;
    const int bins = 41;
    std::vector<int> h1(bins, 0), h2(bins, 0);
    for (const DegradationRecord& r : d.records) {
      const auto b1 = static_cast<int>((r.ch1_delta_db - lo) / (hi - lo) *
                                       (bins - 1));
      const auto b2 = static_cast<int>((r.ch2_delta_db - lo) / (hi - lo) *
                                       (bins - 1));
      ++h1[std::clamp(b1, 0, bins - 1)];
      ++h2[std::clamp(b2, 0, bins - 1)];
    }
    const int max_count =
        std::max(*std::max_element(h1.begin(), h1.end()),
                 *std::max_element(h2.begin(), h2.end()));
    const int bar_w = width / bins;
    for (int b = 0; b < bins; ++b) {
      const int x0 = b * bar_w;
      const int bh1 = h1[b] * (panel - 20) / max_count;
      const int bh2 = h2[b] * (panel - 20) / max_count;
      for (int x = x0 + 1; x < x0 + bar_w - 1; ++x) {
        for (int y = 0; y < bh1; ++y) put(x, panel - 2 - y, 40, 90, 170);
        for (int y = 0; y < bh2; ++y) put(x, height - 2 - y, 190, 90, 40);
      }
    }
    // Zero-dB marker.
    const auto zx = static_cast<int>((0.0 - lo) / (hi - lo) * (width - 1));
    for (int y = 0; y < height; ++y)
      if (y % 3 == 0) put(zx, y, 120, 120, 120);
  }
  WritePngRgb(path, width, height, rgb);
}

void RenderReport(const EvalReport& report,
                  const std::filesystem::path& out_dir,
                  const std::vector<std::string>& formats) {
  std::filesystem::create_directories(out_dir);
  for (const std::string& fmt : formats) {
    if (fmt == "json") {
      std::ofstream f(out_dir / "report.json", std::ios::trunc);
      f << ReportToJson(report) << "\n";
      if (!f) throw IoError("cannot write report.json");
    } else if (fmt == "csv") {
      std::ofstream f(out_dir / "report.csv", std::ios::trunc);
      f << ReportToCsv(report);
      if (!f) throw IoError("cannot write report.csv");
    } else if (fmt == "table") {
      const std::string label =
          report.metadata.contains("strategy")
              ? report.metadata["strategy"].get<std::string>()
              : "model";
      std::ofstream f(out_dir / "table.txt", std::ios::trunc);
      f << RenderTableText({{label, report}});
      if (!f) throw IoError("cannot write table.txt");
    } else if (fmt == "plot") {
      RenderDegradationPng(report, out_dir / "degradation.png");
    } else {
      throw ContractViolation("unknown report format: " + fmt);
    }
  }
}

}  // namespace sepkit
