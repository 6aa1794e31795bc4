// sepkit/mixing.cc

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

#include "sepkit/mixing.h"

#include <cmath>

#include "sepkit/common.h"

namespace sepkit {

double GainForSnr(const Waveform& foreground, const Waveform& background,
                  SnrDb target) {
  ValidateWaveform(foreground, "mix foreground");
  ValidateWaveform(background, "mix background");
  if (!std::isfinite(target.value))
    throw ContractViolation("mix_at_snr: non-finite target SNR");
  if (foreground.sample_rate != background.sample_rate)
    throw ContractViolation("mix_at_snr: sample rate mismatch");
  if (foreground.samples.size() != background.samples.size())
    throw ContractViolation(
        "mix_at_snr: length mismatch (adapt the background first)");

  const double p_fg = MeanSquarePower(foreground.samples);
  const double p_bg = MeanSquarePower(background.samples);
  if (p_fg <= 0.0) throw DegenerateSignal("mix_at_snr: zero-energy foreground");
  if (p_bg <= 0.0) throw DegenerateSignal("mix_at_snr: zero-energy background");

  return std::sqrt(p_fg / (p_bg * std::pow(10.0, target.value / 10.0)));
}

MixResult MixAtSnr(const Waveform& foreground, const Waveform& background,
                   SnrDb target) {
  const double gain = GainForSnr(foreground, background, target);
  MixResult out;
  out.background_gain = gain;
  out.scaled_background.sample_rate = background.sample_rate;
  out.mixture.sample_rate = foreground.sample_rate;
  const size_t n = foreground.samples.size();
  out.scaled_background.samples.resize(n);
  out.mixture.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const double b = gain * background.samples[i];
    out.scaled_background.samples[i] = b;
    out.mixture.samples[i] = foreground.samples[i] + b;
  }
  return out;
}

Waveform AdaptBackgroundLength(const Waveform& background, size_t target_len,
                               size_t offset) {
  ValidateWaveform(background, "adapt background");
  if (target_len == 0)
    throw ContractViolation("adapt background: target_len == 0");

  const size_t n = background.samples.size();
  Waveform out;
  out.sample_rate = background.sample_rate;
  out.samples.resize(target_len);

  if (n >= target_len) {
    if (offset + target_len > n)
      throw ContractViolation("adapt background: offset past end");
    for (size_t i = 0; i < target_len; ++i)
      out.samples[i] = background.samples[offset + i];
    return out;
  }

  // Loop with a raised-cosine crossfade so the seam does not click. Pass j
  // occupies positions [j*hop, j*hop + n); consecutive passes overlap by
  // `fade` samples with complementary weights.
  const size_t fade = std::min<size_t>(
      n / 2, static_cast<size_t>(background.sample_rate / 100));  // 10 ms
  const size_t hop = n - fade;
  const auto fade_in = [fade](size_t u) {
    return 0.5 * (1.0 - std::cos(M_PI * (static_cast<double>(u) + 0.5) /
                                 static_cast<double>(fade)));
  };
  for (size_t i = 0; i < target_len; ++i) {
    const size_t p = i + offset;
    const size_t j = p / hop;
    const size_t u = p - j * hop;  // position within pass j, in [0, hop)
    double v;
    if (fade == 0 || j == 0 || u >= fade) {
      v = background.samples[u];
    } else {
      const double w = fade_in(u);
      v = w * background.samples[u] +
          (1.0 - w) * background.samples[u + hop];  // tail of pass j-1
    }
    out.samples[i] = v;
  }
  return out;
}

}  // namespace sepkit
