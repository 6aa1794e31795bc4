// sepkit/inference.h

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

#ifndef SEPKIT_INFERENCE_H_
#define SEPKIT_INFERENCE_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sepkit/separator.h"

namespace sepkit {

// Any one-and-rest separation function: a trained model, a cascade pipeline,
// or a ground-truth oracle in tests.
using SeparatorFn = std::function<SeparationOutput(const Waveform&)>;

// Stopping policy for the recursion. known_count and residual_threshold_db
// are optional and may be combined; max_iterations is a hard cap that is
// always in force. The residual rule stops once
//   10*log10(|r_j|^2 / |mixture|^2) < residual_threshold_db.
struct StopRule {
  std::optional<int> known_count;
  std::optional<double> residual_threshold_db;
  int max_iterations = 5;

  static StopRule KnownCount(int k);
  static StopRule ResidualEnergy(double threshold_db);

  void Validate() const;
};

inline constexpr double kDefaultResidualStopDb = -25.0;

enum class StopReason { kCountReached, kResidualBelowThreshold, kMaxIterations };
const char* StopReasonName(StopReason reason);

struct RecursionStep {
  int iteration = 0;               // 1-based
  double residual_energy_db = 0.0; // vs. the original mixture; -inf on silence
};

struct RecursionResult {
  std::vector<Waveform> extracted_sources;  // extraction order
  Waveform final_residual;
  StopReason stop_reason = StopReason::kMaxIterations;
  std::vector<RecursionStep> steps;
};

// Applies the one-and-rest model iteratively: the first extraction comes from
// the mixture itself, every later one from the previous residual. Aborts with
// Error if the separator emits non-finite samples.
RecursionResult SeparateRecursive(const SeparatorFn& separator,
                                  const Waveform& mixture,
                                  const StopRule& stop);

// Writes source_1.wav ... source_J.wav, residual.wav and report.json
// (stop_reason plus per-step residual energies) into out_dir.
void WriteRecursionResult(const RecursionResult& result,
                          const std::filesystem::path& out_dir);

}  // namespace sepkit

#endif  // SEPKIT_INFERENCE_H_
