// sepkit/metrics.h

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

#ifndef SEPKIT_METRICS_H_
#define SEPKIT_METRICS_H_

#include <span>

#include "sepkit/waveform.h"

namespace sepkit {

// Scale-invariant SNR in dB, saturated to [-kSiSnrCapDb, +kSiSnrCapDb].
//
// Both signals are mean-removed, the estimate is projected onto the
// reference, and the ratio of projection energy to residual energy is taken:
//   s_t = (<e, s> / <s, s>) s,   err = e - s_t,
//   si_snr = 10 log10(|s_t|^2 / (|err|^2 + eps)).
//
// Invariant under positive scaling and DC offset of the estimate.
// Throws ContractViolation on length/rate mismatch and DegenerateSignal when
// the reference has zero energy after mean removal.
double SiSnr(const Waveform& estimate, const Waveform& reference);

// Same computation on raw sample spans (no rate bookkeeping).
double SiSnrSpan(std::span<const double> estimate,
                 std::span<const double> reference);

// si_snr(estimate, reference) - si_snr(mixture, reference). Exactly zero when
// estimate == mixture.
double SiSnrImprovement(const Waveform& estimate, const Waveform& reference,
                        const Waveform& mixture);

// Value plus d(si_snr)/d(estimate). The gradient is exactly zero wherever the
// value sits on the saturation cap. grad must have estimate.size() elements.
double SiSnrWithGrad(std::span<const double> estimate,
                     std::span<const double> reference,
                     std::span<double> grad);

// Energy penalty used in place of si_snr when a loss target has zero energy:
// 10 log10(|x|^2 + eps), with gradient support.
double EnergyDb(std::span<const double> x);
double EnergyDbWithGrad(std::span<const double> x, std::span<double> grad);

}  // namespace sepkit

#endif  // SEPKIT_METRICS_H_
