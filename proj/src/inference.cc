// sepkit/inference.cc

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

#include "sepkit/inference.h"

#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "sepkit/common.h"
#include "sepkit/wav_io.h"

namespace sepkit {

StopRule StopRule::KnownCount(int k) {
  StopRule r;
  r.known_count = k;
  return r;
}

StopRule StopRule::ResidualEnergy(double threshold_db) {
  StopRule r;
  r.residual_threshold_db = threshold_db;
  return r;
}

void StopRule::Validate() const {
  if (known_count && *known_count < 1)
    throw ContractViolation("stop rule: known_count must be >= 1");
  if (max_iterations < 1)
    throw ContractViolation("stop rule: max_iterations must be >= 1");
  if (!known_count && !residual_threshold_db && max_iterations < 1)
    throw ContractViolation("stop rule: empty");
}

const char* StopReasonName(StopReason reason) {
  switch (reason) {
    case StopReason::kCountReached: return "count_reached";
    case StopReason::kResidualBelowThreshold: return "residual_below_threshold";
    case StopReason::kMaxIterations: return "max_iterations";
  }
  return "unknown";
}

RecursionResult SeparateRecursive(const SeparatorFn& separator,
                                  const Waveform& mixture,
                                  const StopRule& stop) {
  stop.Validate();
  const double mix_energy = MeanSquarePower(mixture.samples);

  RecursionResult result;
  Waveform residual = mixture;
  for (int j = 1; j <= stop.max_iterations; ++j) {
    SeparationOutput out = separator(residual);
    for (double v : out.extracted.samples)
      if (!std::isfinite(v)) throw Error("separator emitted non-finite output");
    for (double v : out.residual.samples)
      if (!std::isfinite(v)) throw Error("separator emitted non-finite output");

    result.extracted_sources.push_back(std::move(out.extracted));
    residual = std::move(out.residual);

    const double res_energy = MeanSquarePower(residual.samples);
    const double ratio_db =
        (res_energy <= 0.0 || mix_energy <= 0.0)
            ? -std::numeric_limits<double>::infinity()
            : 10.0 * std::log10(res_energy / mix_energy);
    result.steps.push_back({j, ratio_db});

    if (stop.known_count && j >= *stop.known_count) {
      result.stop_reason = StopReason::kCountReached;
      break;
    }
    if (stop.residual_threshold_db && ratio_db < *stop.residual_threshold_db) {
      result.stop_reason = StopReason::kResidualBelowThreshold;
      break;
    }
    result.stop_reason = StopReason::kMaxIterations;
  }
  result.final_residual = std::move(residual);
  return result;
}

void WriteRecursionResult(const RecursionResult& result,
                          const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (size_t k = 0; k < result.extracted_sources.size(); ++k)
    WriteWav(out_dir / ("source_" + std::to_string(k + 1) + ".wav"),
             result.extracted_sources[k]);
  WriteWav(out_dir / "residual.wav", result.final_residual);

  nlohmann::ordered_json j;
  j["stop_reason"] = StopReasonName(result.stop_reason);
  j["num_sources"] = result.extracted_sources.size();
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const RecursionStep& s : result.steps) {
    nlohmann::ordered_json js;
    js["iteration"] = s.iteration;
    js["residual_energy_db"] = std::isfinite(s.residual_energy_db)
                                   ? nlohmann::ordered_json(s.residual_energy_db)
                                   : nlohmann::ordered_json("-inf");
    steps.push_back(std::move(js));
  }
  j["steps"] = std::move(steps);
  std::ofstream f(out_dir / "report.json", std::ios::trunc);
  if (!f) throw IoError("cannot write recursion report");
  f << j.dump(2) << "\n";
}

}  // namespace sepkit
