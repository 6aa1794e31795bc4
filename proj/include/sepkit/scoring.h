// sepkit/scoring.h

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

#ifndef SEPKIT_SCORING_H_
#define SEPKIT_SCORING_H_

#include <vector>

#include "sepkit/inference.h"
#include "sepkit/mixture.h"

namespace sepkit {

// Best-permutation matching of system outputs against references, then
// SI-SNR / SI-SNRi per reference. Scoring convention: extractions are paired
// to references by the assignment minimizing mean negative si_snr (oracle
// matching, re-solved per utterance); a reference left without an estimate
// scores the unprocessed mixture (SI-SNRi exactly 0).
struct UtteranceScore {
  std::vector<double> per_source_si_snr;    // per reference
  std::vector<double> per_source_si_snri;
  double mean_si_snri = 0.0;
  std::vector<int> matching;                // estimate index per reference; -1 = unmatched
  StopReason stop_reason = StopReason::kMaxIterations;
  int num_extracted = 0;
};

// Minimum-mean-cost injective matching of references onto estimates
// (exhaustive; both sides small). cost[r][e] = pair cost. Returns the
// estimate index per reference, -1 where unmatched (only when there are
// fewer estimates than references).
std::vector<int> BestInjectiveMatching(
    const std::vector<std::vector<double>>& cost);

// Scores already-extracted estimates against a sample's references.
UtteranceScore ScoreEstimates(const std::vector<Waveform>& estimates,
                              const MixtureSample& sample);

// Runs the recursion, then scores. The single-speaker (denoising) task scores
// the first extraction only; the residual channel is never scored. Throws
// Error when a known-count stop yields a count that differs from the
// reference count.
UtteranceScore ScoreUtterance(const SeparatorFn& separator,
                              const MixtureSample& sample,
                              const StopRule& stop);

}  // namespace sepkit

#endif  // SEPKIT_SCORING_H_
