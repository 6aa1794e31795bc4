// sepkit/evaluate.h

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

#ifndef SEPKIT_EVALUATE_H_
#define SEPKIT_EVALUATE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sepkit/inference.h"
#include "sepkit/mixture.h"
#include "sepkit/scoring.h"

namespace sepkit {

struct UtteranceRecord {
  std::string id;
  TaskTag tag = TaskTag::k2sp;
  std::vector<double> per_source_si_snr;
  std::vector<double> per_source_si_snri;
  double mean_si_snri = 0.0;
  std::vector<int> matching;  // estimate index per reference, -1 = unmatched
  std::string stop_reason;
  int num_extracted = 0;
};

struct TaskStats {
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

struct DegradationRecord {
  std::string id;
  TaskTag tag = TaskTag::k2spN;
  double ch1_delta_db = 0.0;  // noisy-run si_snr minus clean-run si_snr
  double ch2_delta_db = 0.0;
};

struct DegradationStats {
  int count = 0;
  double ch1_mean = 0.0, ch1_stddev = 0.0;
  double ch2_mean = 0.0, ch2_stddev = 0.0;
  std::vector<DegradationRecord> records;
};

struct EvalReport {
  std::vector<UtteranceRecord> records;
  std::map<TaskTag, TaskStats> per_task;  // of mean_si_snri over utterances
  nlohmann::ordered_json metadata;
  std::optional<DegradationStats> degradation;
};

struct EvalOptions {
  // Stop rule per utterance: known reference count (default) or the residual
  // energy rule.
  bool use_known_count = true;
  double residual_threshold_db = kDefaultResidualStopDb;
  int max_iterations = 5;
  // Applied to the mixture once before the recursion (a denoising front).
  std::function<Waveform(const Waveform&)> preprocess;
};

// Runs the separator over every manifest entry and scores with
// best-permutation matching (the SD task scores the first extraction only).
// Deterministic in manifest order.
EvalReport Evaluate(const SeparatorFn& separator,
                    const std::filesystem::path& manifest_path,
                    const EvalOptions& options = {});

// Recomputes per_task from the per-utterance records.
void AggregateReport(EvalReport* report);

// Per-channel noise impact: each paired item is run once on the clean mixture
// and once on the noisy one, both outputs are scored against the clean-run
// one-and-rest targets, and the channel-wise difference (noisy minus clean)
// is averaged. Items pair by position and must share sources.
DegradationStats DegradationAnalysis(
    const SeparatorFn& separator, const std::filesystem::path& clean_manifest,
    const std::filesystem::path& noisy_manifest);

// Reads the WAVs a manifest entry points at (next to the manifest file).
MixtureSample LoadPremixedSample(const std::filesystem::path& corpus_dir,
                                 const ManifestEntry& entry);

}  // namespace sepkit

#endif  // SEPKIT_EVALUATE_H_
