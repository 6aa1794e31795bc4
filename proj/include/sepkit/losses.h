// sepkit/losses.h

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

#ifndef SEPKIT_LOSSES_H_
#define SEPKIT_LOSSES_H_

#include <optional>
#include <span>
#include <vector>

#include "sepkit/separator.h"
#include "sepkit/waveform.h"

namespace sepkit {

// Winning one-and-rest assignment: which source the extracted channel was
// paired with (0-based) and the total loss of that pairing.
struct Assignment {
  int chosen_index = 0;
  double loss_value = 0.0;
};

struct PitResult {
  std::vector<int> permutation;  // permutation[k] = target index for estimate k
  double loss = 0.0;
};

// Base loss: negative SI-SNR.
double NegSiSnr(std::span<const double> estimate,
                std::span<const double> reference);

// One-and-rest assignment search over the N candidates
//   L_i = l(s_hat, s_i) + l(r_hat, sum_{n != i} s_n [+ noise]),
// l = negative si_snr. Noise, when present, always lives in the rest target;
// with a single source the only candidate pairs the rest against the noise
// itself. Ties break to the lowest index. A zero-energy rest target swaps
// that branch for the residual-energy penalty 10*log10(|r|^2 + eps).
// N == 1 without noise is a contract violation (nothing to separate).
//
// grad_s / grad_r, when non-empty, receive d(loss)/d(s_hat), d(loss)/d(r_hat)
// for the winning assignment.
Assignment OrPitLossSpan(std::span<const double> s_hat,
                         std::span<const double> r_hat,
                         const std::vector<std::span<const double>>& sources,
                         std::optional<std::span<const double>> noise,
                         std::span<double> grad_s = {},
                         std::span<double> grad_r = {});

Assignment OrPitLoss(const SeparationOutput& output,
                     const std::vector<Waveform>& sources,
                     const std::optional<Waveform>& noise);

// Conventional utterance-level PIT: exhaustive search over all N! pairings
// (N <= 4), loss is the mean negative si_snr over paired channels.
PitResult FullPitLoss(const std::vector<Waveform>& estimates,
                      const std::vector<Waveform>& sources);
PitResult FullPitLossSpan(const std::vector<std::span<const double>>& estimates,
                          const std::vector<std::span<const double>>& sources);

// Auxiliary-autoencoding PIT: the N true sources are padded with (M - N)
// copies of the mixture so redundant channels are trained to pass the input
// through; then a full-PIT search over the padded target set. With N == M
// this is exactly FullPitLoss. grads, when non-null, receives per-estimate
// gradients of the mean loss.
PitResult A2PitLossSpan(const std::vector<std::span<const double>>& estimates,
                        const std::vector<std::span<const double>>& sources,
                        std::span<const double> mixture,
                        std::vector<std::vector<double>>* grads = nullptr);
PitResult A2PitLoss(const std::vector<Waveform>& estimates,
                    const std::vector<Waveform>& sources,
                    const Waveform& mixture);

// Counts channels that did not merely autoencode the mixture: a channel whose
// si_snr against the mixture exceeds threshold_db is classified as invalid.
// Floored at 1.
int ValidSourceCount(const std::vector<Waveform>& estimates,
                     const Waveform& mixture, double threshold_db);

}  // namespace sepkit

#endif  // SEPKIT_LOSSES_H_
