// sepkit/metrics.cc

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

#include "sepkit/metrics.h"

#include <cmath>
#include <vector>

#include "sepkit/common.h"

namespace sepkit {

namespace {

constexpr double kLog10Factor = 10.0 / M_LN10;  // 10 / ln(10)

double Mean(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc / static_cast<double>(x.size());
}

struct Projection {
  double target_energy;    // |alpha * s|^2
  double residual_energy;  // |e - alpha * s|^2
  double alpha;
  double ref_energy;       // |s|^2 after mean removal
};

// Core of the metric on already mean-removed buffers.
Projection Project(std::span<const double> est_zm,
                   std::span<const double> ref_zm) {
  double dot = 0.0, ref_e = 0.0;
  for (size_t i = 0; i < ref_zm.size(); ++i) {
    dot += est_zm[i] * ref_zm[i];
    ref_e += ref_zm[i] * ref_zm[i];
  }
  if (ref_e <= 0.0)
    throw DegenerateSignal("si_snr: reference has zero energy after mean removal");
  const double alpha = dot / ref_e;
  double resid = 0.0;
  for (size_t i = 0; i < ref_zm.size(); ++i) {
    const double e = est_zm[i] - alpha * ref_zm[i];
    resid += e * e;
  }
  return {alpha * alpha * ref_e, resid, alpha, ref_e};
}

double Saturate(double db) {
  if (db > kSiSnrCapDb) return kSiSnrCapDb;
  if (db < -kSiSnrCapDb) return -kSiSnrCapDb;
  return db;
}

}  // namespace

double SiSnrSpan(std::span<const double> estimate,
                 std::span<const double> reference) {
  if (estimate.size() != reference.size())
    throw ContractViolation("si_snr: length mismatch");
  if (estimate.empty()) throw ContractViolation("si_snr: empty input");

  const double est_mean = Mean(estimate);
  const double ref_mean = Mean(reference);
  std::vector<double> est_zm(estimate.size()), ref_zm(reference.size());
  for (size_t i = 0; i < estimate.size(); ++i) {
    est_zm[i] = estimate[i] - est_mean;
    ref_zm[i] = reference[i] - ref_mean;
  }
  const Projection p = Project(est_zm, ref_zm);
  if (p.target_energy <= 0.0) return -kSiSnrCapDb;
  // The floor scales with the projection energy so the metric stays exactly
  // scale invariant.
  return Saturate(kLog10Factor *
                  std::log(p.target_energy /
                           (p.residual_energy + kSiSnrEps * p.target_energy)));
}

double SiSnr(const Waveform& estimate, const Waveform& reference) {
  ValidateWaveform(estimate, "si_snr estimate");
  ValidateWaveform(reference, "si_snr reference");
  if (estimate.sample_rate != reference.sample_rate)
    throw ContractViolation("si_snr: sample rate mismatch");
  return SiSnrSpan(estimate.samples, reference.samples);
}

double SiSnrImprovement(const Waveform& estimate, const Waveform& reference,
                        const Waveform& mixture) {
  ValidateWaveform(mixture, "si_snri mixture");
  if (mixture.sample_rate != reference.sample_rate ||
      mixture.samples.size() != reference.samples.size())
    throw ContractViolation("si_snri: mixture/reference mismatch");
  return SiSnr(estimate, reference) - SiSnr(mixture, reference);
}

double SiSnrWithGrad(std::span<const double> estimate,
                     std::span<const double> reference,
                     std::span<double> grad) {
  if (estimate.size() != reference.size() || grad.size() != estimate.size())
    throw ContractViolation("si_snr grad: length mismatch");
  const size_t n = estimate.size();

  const double est_mean = Mean(estimate);
  const double ref_mean = Mean(reference);
  std::vector<double> est_zm(n), ref_zm(n);
  for (size_t i = 0; i < n; ++i) {
    est_zm[i] = estimate[i] - est_mean;
    ref_zm[i] = reference[i] - ref_mean;
  }
  const Projection p = Project(est_zm, ref_zm);
  if (p.target_energy <= 0.0) {
    for (size_t i = 0; i < n; ++i) grad[i] = 0.0;
    return -kSiSnrCapDb;
  }
  const double denom = p.residual_energy + kSiSnrEps * p.target_energy;
  const double raw = kLog10Factor * std::log(p.target_energy / denom);

  if (raw > kSiSnrCapDb || raw < -kSiSnrCapDb) {
    for (size_t i = 0; i < n; ++i) grad[i] = 0.0;
    return Saturate(raw);
  }

  // With N = |t|^2, D = |e|^2 and the scale-tracking floor,
  //   v = c ln(N / (D + eps N)),
  //   dv/dz_i = c (dN_i / N - (dD_i + eps dN_i) / (D + eps N)),
  // where z is the mean-removed estimate, dN_i = 2 <z,s> s_i / |s|^2 and
  // dD_i = 2 e_i (using <e, s> = 0). Chain through the mean removal by
  // subtracting the gradient's own mean.
  const double dots = p.alpha * p.ref_energy;  // <est_zm, ref_zm>
  double gsum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double e = est_zm[i] - p.alpha * ref_zm[i];
    const double dn = 2.0 * dots * ref_zm[i] / p.ref_energy;
    const double dd = 2.0 * e;
    grad[i] = kLog10Factor *
              (dn / p.target_energy - (dd + kSiSnrEps * dn) / denom);
    gsum += grad[i];
  }
  const double gmean = gsum / static_cast<double>(n);
  for (size_t i = 0; i < n; ++i) grad[i] -= gmean;
  return raw;
}

double EnergyDb(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return kLog10Factor * std::log(e + kSiSnrEps);
}

double EnergyDbWithGrad(std::span<const double> x, std::span<double> grad) {
  if (grad.size() != x.size())
    throw ContractViolation("energy grad: length mismatch");
  double e = 0.0;
  for (double v : x) e += v * v;
  const double scale = 2.0 * kLog10Factor / (e + kSiSnrEps);
  for (size_t i = 0; i < x.size(); ++i) grad[i] = scale * x[i];
  return kLog10Factor * std::log(e + kSiSnrEps);
}

}  // namespace sepkit
