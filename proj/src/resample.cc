// sepkit/resample.cc

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

#include "sepkit/resample.h"

#include <cmath>
#include <numeric>

#include "sepkit/common.h"

namespace sepkit {

namespace {

constexpr int kZeroCrossings = 32;  // sinc half-width in output-period units

double Sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

// Blackman window on [-1, 1].
double Window(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  const double x = M_PI * (t + 1.0);  // [0, 2pi]
  return 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x);
}

}  // namespace

Waveform Resample(const Waveform& w, int target_rate) {
  ValidateWaveform(w, "resample");
  if (target_rate <= 0)
    throw ContractViolation("resample: target_rate must be > 0");
  if (target_rate == w.sample_rate) return w;

  const int g = std::gcd(w.sample_rate, target_rate);
  const int64_t up = target_rate / g;
  const int64_t down = w.sample_rate / g;

  const size_t in_len = w.samples.size();
  const size_t out_len = static_cast<size_t>(
      (static_cast<int64_t>(in_len) * up + down - 1) / down);

  // Cutoff at min(old, new) Nyquist, expressed relative to the input rate.
  const double ratio = static_cast<double>(up) / static_cast<double>(down);
  const double fc = std::min(1.0, ratio);          // in input-Nyquist units
  const double half_width = kZeroCrossings / fc;   // taps per side, input units

  Waveform out;
  out.sample_rate = target_rate;
  out.samples.resize(out_len);

  for (size_t n = 0; n < out_len; ++n) {
    // Output sample time in input-sample units.
    const double t = static_cast<double>(n) * down / up;
    const auto k_lo =
        static_cast<int64_t>(std::ceil(t - half_width));
    const auto k_hi = static_cast<int64_t>(std::floor(t + half_width));
    double acc = 0.0;
    for (int64_t k = std::max<int64_t>(0, k_lo);
         k <= std::min<int64_t>(static_cast<int64_t>(in_len) - 1, k_hi); ++k) {
      const double u = t - static_cast<double>(k);
      acc += w.samples[static_cast<size_t>(k)] * fc * Sinc(fc * u) *
             Window(u / half_width);
    }
    out.samples[n] = acc;
  }
  return out;
}

}  // namespace sepkit
