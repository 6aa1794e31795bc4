// sepkit/waveform.h

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

#ifndef SEPKIT_WAVEFORM_H_
#define SEPKIT_WAVEFORM_H_

#include <cstddef>
#include <span>
#include <vector>

namespace sepkit {

// Mono sampled signal. Amplitudes are dimensionless, nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 0;

  Waveform() = default;
  Waveform(std::vector<double> s, int rate)
      : samples(std::move(s)), sample_rate(rate) {}

  size_t size() const { return samples.size(); }
  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

// Signed decibel quantity.
struct SnrDb {
  double value = 0.0;
};

// Throws ContractViolation unless: length >= 1, sample_rate > 0, all samples
// finite.
void ValidateWaveform(const Waveform& w, const char* what);

// Mean-square power over the full span (silence included).
double MeanSquarePower(std::span<const double> x);

double PeakAbs(std::span<const double> x);

}  // namespace sepkit

#endif  // SEPKIT_WAVEFORM_H_
