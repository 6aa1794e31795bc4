// sepkit/wav_io.h

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

#ifndef SEPKIT_WAV_IO_H_
#define SEPKIT_WAV_IO_H_

#include <filesystem>

#include "sepkit/waveform.h"

namespace sepkit {

// 16-bit PCM mono little-endian RIFF only. Samples map to [-1, 1] floats.
Waveform ReadWav(const std::filesystem::path& path);

// Samples outside [-1, 1] are clipped; rounding is half-away-from-zero so the
// bytes are a pure function of the float content.
void WriteWav(const std::filesystem::path& path, const Waveform& w);

}  // namespace sepkit

#endif  // SEPKIT_WAV_IO_H_
