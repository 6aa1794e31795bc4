// sepkit/mixing.h

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

#ifndef SEPKIT_MIXING_H_
#define SEPKIT_MIXING_H_

#include <cstddef>

#include "sepkit/waveform.h"

namespace sepkit {

struct MixResult {
  Waveform mixture;            // foreground + scaled_background, elementwise
  Waveform scaled_background;
  double background_gain = 1.0;
};

// Rescales background so 10*log10(P_fg / P_bg_scaled) == target.value, with P
// the mean-square power over the full (equal) length. The foreground is left
// untouched. Lengths and rates must already match; adapt the background with
// AdaptBackgroundLength first if needed.
MixResult MixAtSnr(const Waveform& foreground, const Waveform& background,
                   SnrDb target);

// Gain that MixAtSnr would apply, without forming the mixture.
double GainForSnr(const Waveform& foreground, const Waveform& background,
                  SnrDb target);

// Fits a background to target_len samples. Longer backgrounds are cropped
// starting at `offset`; shorter ones are looped with a 10 ms crossfade
// (offset selects the starting point within the loop). Deterministic given
// (background, target_len, offset), so a recorded offset replays exactly.
Waveform AdaptBackgroundLength(const Waveform& background, size_t target_len,
                               size_t offset);

}  // namespace sepkit

#endif  // SEPKIT_MIXING_H_
