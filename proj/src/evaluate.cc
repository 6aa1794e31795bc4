// sepkit/evaluate.cc

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

#include "sepkit/evaluate.h"

#include <cmath>

#include "sepkit/common.h"
#include "sepkit/losses.h"
#include "sepkit/metrics.h"
#include "sepkit/wav_io.h"

namespace sepkit {

namespace {

void MeanStd(const std::vector<double>& xs, double* mean, double* stddev) {
  if (xs.empty()) {
    *mean = 0.0;
    *stddev = 0.0;
    return;
  }
  double acc = 0.0;
  for (double x : xs) acc += x;
  *mean = acc / static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - *mean) * (x - *mean);
  *stddev = std::sqrt(var / static_cast<double>(xs.size()));
}

}  // namespace

MixtureSample LoadPremixedSample(const std::filesystem::path& corpus_dir,
                                 const ManifestEntry& entry) {
  MixtureSample s;
  s.config = TaskConfig::FromTag(entry.tag);
  s.seed = entry.seed;
  s.mixture = ReadWav(corpus_dir / entry.MixPath());
  for (size_t k = 0; k < entry.sources.size(); ++k)
    s.sources.push_back(ReadWav(corpus_dir / entry.SourcePath(k)));
  if (entry.has_noise) s.noise = ReadWav(corpus_dir / entry.NoisePath());
  return s;
}

void AggregateReport(EvalReport* report) {
  std::map<TaskTag, std::vector<double>> by_task;
  for (const UtteranceRecord& r : report->records)
    by_task[r.tag].push_back(r.mean_si_snri);
  report->per_task.clear();
  for (const auto& [tag, values] : by_task) {
    TaskStats stats;
    stats.count = static_cast<int>(values.size());
    MeanStd(values, &stats.mean, &stats.stddev);
    report->per_task[tag] = stats;
  }
}

EvalReport Evaluate(const SeparatorFn& separator,
                    const std::filesystem::path& manifest_path,
                    const EvalOptions& options) {
  const std::filesystem::path dir = manifest_path.parent_path();
  EvalReport report;
  for (const ManifestEntry& entry : ReadManifest(manifest_path)) {
    const MixtureSample sample = LoadPremixedSample(dir, entry);

    StopRule stop;
    if (options.use_known_count) {
      stop.known_count = static_cast<int>(sample.sources.size());
      stop.max_iterations = std::max(options.max_iterations,
                                     static_cast<int>(sample.sources.size()));
    } else {
      stop.residual_threshold_db = options.residual_threshold_db;
      stop.max_iterations = options.max_iterations;
    }

    UtteranceScore score;
    if (options.preprocess) {
      const Waveform denoised = options.preprocess(sample.mixture);
      const RecursionResult rec = SeparateRecursive(separator, denoised, stop);
      if (stop.known_count &&
          rec.extracted_sources.size() != sample.sources.size())
        throw Error("evaluate: extraction count mismatch under known_count");
      score = ScoreEstimates(rec.extracted_sources, sample);
      score.stop_reason = rec.stop_reason;
    } else {
      score = ScoreUtterance(separator, sample, stop);
    }

    UtteranceRecord rec;
    rec.id = entry.output_id;
    rec.tag = entry.tag;
    rec.per_source_si_snr = score.per_source_si_snr;
    rec.per_source_si_snri = score.per_source_si_snri;
    rec.mean_si_snri = score.mean_si_snri;
    rec.matching = score.matching;
    rec.stop_reason = StopReasonName(score.stop_reason);
    rec.num_extracted = score.num_extracted;
    report.records.push_back(std::move(rec));
  }
  AggregateReport(&report);
  return report;
}

DegradationStats DegradationAnalysis(
    const SeparatorFn& separator, const std::filesystem::path& clean_manifest,
    const std::filesystem::path& noisy_manifest) {
  const std::vector<ManifestEntry> clean_entries = ReadManifest(clean_manifest);
  const std::vector<ManifestEntry> noisy_entries = ReadManifest(noisy_manifest);
  if (clean_entries.size() != noisy_entries.size())
    throw ContractViolation("degradation: manifests differ in length");

  const std::filesystem::path clean_dir = clean_manifest.parent_path();
  const std::filesystem::path noisy_dir = noisy_manifest.parent_path();

  DegradationStats stats;
  std::vector<double> ch1, ch2;
  for (size_t i = 0; i < clean_entries.size(); ++i) {
    const ManifestEntry& ce = clean_entries[i];
    const ManifestEntry& ne = noisy_entries[i];
    if (ce.sources.size() != ne.sources.size())
      throw ContractViolation("degradation: unpaired items (source count)");
    for (size_t k = 0; k < ce.sources.size(); ++k)
      if (ce.sources[k].path != ne.sources[k].path ||
          ce.sources[k].gain != ne.sources[k].gain)
        throw ContractViolation("degradation: unpaired items (sources differ)");

    const MixtureSample clean = LoadPremixedSample(clean_dir, ce);
    const MixtureSample noisy = LoadPremixedSample(noisy_dir, ne);
    if (clean.sources.size() < 2)
      throw ContractViolation("degradation: needs multi-speaker items");

    const SeparationOutput clean_out = separator(clean.mixture);
    const SeparationOutput noisy_out = separator(noisy.mixture);

    // One-and-rest targets fixed by the clean run's best assignment.
    const Assignment a = OrPitLoss(clean_out, clean.sources, std::nullopt);
    const auto chosen = static_cast<size_t>(a.chosen_index);
    const Waveform& one_target = clean.sources[chosen];
    Waveform rest_target;
    rest_target.sample_rate = clean.mixture.sample_rate;
    rest_target.samples.assign(clean.mixture.samples.size(), 0.0);
    for (size_t k = 0; k < clean.sources.size(); ++k) {
      if (k == chosen) continue;
      for (size_t t = 0; t < rest_target.samples.size(); ++t)
        rest_target.samples[t] += clean.sources[k].samples[t];
    }

    DegradationRecord rec;
    rec.id = ne.output_id;
    rec.tag = ne.tag;
    rec.ch1_delta_db =
        SiSnr(noisy_out.extracted, one_target) - SiSnr(clean_out.extracted, one_target);
    rec.ch2_delta_db =
        SiSnr(noisy_out.residual, rest_target) - SiSnr(clean_out.residual, rest_target);
    ch1.push_back(rec.ch1_delta_db);
    ch2.push_back(rec.ch2_delta_db);
    stats.records.push_back(std::move(rec));
  }
  stats.count = static_cast<int>(stats.records.size());
  MeanStd(ch1, &stats.ch1_mean, &stats.ch1_stddev);
  MeanStd(ch2, &stats.ch2_mean, &stats.ch2_stddev);
  return stats;
}

}  // namespace sepkit
