// sepkit/resample.h

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

#ifndef SEPKIT_RESAMPLE_H_
#define SEPKIT_RESAMPLE_H_

#include "sepkit/waveform.h"

namespace sepkit {

// Windowed-sinc rate conversion. Downsampling low-passes at the new Nyquist
// so content above it is suppressed. target_rate == w.sample_rate returns the
// input unchanged. Duration is preserved within one sample period.
Waveform Resample(const Waveform& w, int target_rate);

}  // namespace sepkit

#endif  // SEPKIT_RESAMPLE_H_
