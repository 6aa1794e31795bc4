// sepkit/toy_corpus.h

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

#ifndef SEPKIT_TOY_CORPUS_H_
#define SEPKIT_TOY_CORPUS_H_

#include <filesystem>
#include <vector>

#include "sepkit/mixture.h"

namespace sepkit {

struct ToyPools {
  std::vector<PoolFile> speech;
  std::vector<PoolFile> noise;
};

// Synthetic stand-in for real speech/noise pools: per-speaker harmonic stacks
// with syllable-rate amplitude modulation (each speaker owns a distinct
// fundamental, spaced >= 20 Hz apart) and broadband/tonal interference noise.
// 4-second utterances at 8 kHz under out_dir/speech and out_dir/noise.
// Deterministic: same arguments, byte-identical files.
ToyPools MakeToyCorpus(const std::filesystem::path& out_dir, int n_speakers,
                       int utterances_per_speaker, uint64_t seed);

}  // namespace sepkit

#endif  // SEPKIT_TOY_CORPUS_H_
