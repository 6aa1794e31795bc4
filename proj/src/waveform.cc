// sepkit/waveform.cc

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

#include "sepkit/waveform.h"

#include <cmath>
#include <string>

#include "sepkit/common.h"

namespace sepkit {

void ValidateWaveform(const Waveform& w, const char* what) {
  if (w.samples.empty())
    throw ContractViolation(std::string(what) + ": empty waveform");
  if (w.sample_rate <= 0)
    throw ContractViolation(std::string(what) + ": sample_rate must be > 0");
  for (double v : w.samples) {
    if (!std::isfinite(v))
      throw ContractViolation(std::string(what) + ": non-finite sample");
  }
}

double MeanSquarePower(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

double PeakAbs(std::span<const double> x) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  return peak;
}

}  // namespace sepkit
