// sepkit/losses.cc

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

#include "sepkit/losses.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sepkit/common.h"
#include "sepkit/metrics.h"

namespace sepkit {

namespace {

using Span = std::span<const double>;

void CheckEqualLengths(const std::vector<Span>& xs, size_t len,
                       const char* what) {
  for (const Span& x : xs)
    if (x.size() != len) throw ContractViolation(std::string(what) +
                                                 ": length mismatch");
}

bool ZeroEnergyAfterMeanRemoval(Span x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double e = 0.0;
  for (double v : x) e += (v - mean) * (v - mean);
  return e <= 0.0;
}

std::vector<Span> AsSpans(const std::vector<Waveform>& ws) {
  std::vector<Span> spans;
  spans.reserve(ws.size());
  for (const Waveform& w : ws) spans.emplace_back(w.samples);
  return spans;
}

}  // namespace

double NegSiSnr(Span estimate, Span reference) {
  return -SiSnrSpan(estimate, reference);
}

Assignment OrPitLossSpan(Span s_hat, Span r_hat,
                         const std::vector<Span>& sources,
                         std::optional<Span> noise, std::span<double> grad_s,
                         std::span<double> grad_r) {
  const size_t n_src = sources.size();
  if (n_src == 0) throw ContractViolation("orpit: no sources");
  const size_t len = s_hat.size();
  if (r_hat.size() != len) throw ContractViolation("orpit: head length mismatch");
  CheckEqualLengths(sources, len, "orpit sources");
  if (noise && noise->size() != len)
    throw ContractViolation("orpit: noise length mismatch");
  if (n_src == 1 && !noise)
    throw ContractViolation("orpit: single source with no noise, nothing to separate");

  std::vector<double> rest(len);
  auto build_rest = [&](size_t skip) {
    std::fill(rest.begin(), rest.end(), 0.0);
    for (size_t k = 0; k < n_src; ++k) {
      if (k == skip) continue;
      for (size_t i = 0; i < len; ++i) rest[i] += sources[k][i];
    }
    if (noise)
      for (size_t i = 0; i < len; ++i) rest[i] += (*noise)[i];
  };

  Assignment best;
  best.loss_value = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n_src; ++i) {
    build_rest(i);
    const double l_one = NegSiSnr(s_hat, sources[i]);
    const double l_rest = ZeroEnergyAfterMeanRemoval(rest)
                              ? EnergyDb(r_hat)
                              : NegSiSnr(r_hat, rest);
    const double total = l_one + l_rest;
    if (total < best.loss_value) {
      best.loss_value = total;
      best.chosen_index = static_cast<int>(i);
    }
  }

  if (!grad_s.empty() || !grad_r.empty()) {
    if (grad_s.size() != len || grad_r.size() != len)
      throw ContractViolation("orpit: gradient buffer length mismatch");
    const auto i = static_cast<size_t>(best.chosen_index);
    SiSnrWithGrad(s_hat, sources[i], grad_s);
    for (double& g : grad_s) g = -g;
    build_rest(i);
    if (ZeroEnergyAfterMeanRemoval(rest)) {
      EnergyDbWithGrad(r_hat, grad_r);
    } else {
      SiSnrWithGrad(r_hat, rest, grad_r);
      for (double& g : grad_r) g = -g;
    }
  }
  return best;
}

Assignment OrPitLoss(const SeparationOutput& output,
                     const std::vector<Waveform>& sources,
                     const std::optional<Waveform>& noise) {
  std::optional<Span> noise_span;
  if (noise) noise_span = Span(noise->samples);
  return OrPitLossSpan(output.extracted.samples, output.residual.samples,
                       AsSpans(sources), noise_span);
}

PitResult FullPitLossSpan(const std::vector<Span>& estimates,
                          const std::vector<Span>& sources) {
  const size_t n = estimates.size();
  if (n == 0 || sources.size() != n)
    throw ContractViolation("full_pit: estimate/source count mismatch");
  if (n > 4)
    throw ContractViolation("full_pit: exhaustive search limited to N <= 4");
  const size_t len = estimates[0].size();
  CheckEqualLengths(estimates, len, "full_pit estimates");
  CheckEqualLengths(sources, len, "full_pit sources");

  // Pairwise losses once, then scan permutations.
  std::vector<std::vector<double>> pl(n, std::vector<double>(n));
  for (size_t e = 0; e < n; ++e)
    for (size_t s = 0; s < n; ++s) pl[e][s] = NegSiSnr(estimates[e], sources[s]);

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  PitResult best;
  best.loss = std::numeric_limits<double>::infinity();
  std::vector<int> p = perm;
  do {
    double acc = 0.0;
    for (size_t e = 0; e < n; ++e) acc += pl[e][static_cast<size_t>(p[e])];
    acc /= static_cast<double>(n);
    if (acc < best.loss) {
      best.loss = acc;
      best.permutation = p;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

PitResult FullPitLoss(const std::vector<Waveform>& estimates,
                      const std::vector<Waveform>& sources) {
  return FullPitLossSpan(AsSpans(estimates), AsSpans(sources));
}

PitResult A2PitLossSpan(const std::vector<Span>& estimates,
                        const std::vector<Span>& sources, Span mixture,
                        std::vector<std::vector<double>>* grads) {
  const size_t m = estimates.size();
  const size_t n = sources.size();
  if (n == 0) throw ContractViolation("a2pit: no sources");
  if (n > m) throw ContractViolation("a2pit: more sources than output channels");

  std::vector<Span> targets = sources;
  for (size_t k = n; k < m; ++k) targets.push_back(mixture);
  PitResult best = FullPitLossSpan(estimates, targets);

  if (grads != nullptr) {
    grads->assign(m, std::vector<double>(estimates[0].size(), 0.0));
    for (size_t e = 0; e < m; ++e) {
      std::vector<double>& g = (*grads)[e];
      SiSnrWithGrad(estimates[e],
                    targets[static_cast<size_t>(best.permutation[e])], g);
      const double scale = -1.0 / static_cast<double>(m);
      for (double& v : g) v *= scale;
    }
  }
  return best;
}

PitResult A2PitLoss(const std::vector<Waveform>& estimates,
                    const std::vector<Waveform>& sources,
                    const Waveform& mixture) {
  return A2PitLossSpan(AsSpans(estimates), AsSpans(sources), mixture.samples);
}

int ValidSourceCount(const std::vector<Waveform>& estimates,
                     const Waveform& mixture, double threshold_db) {
  if (estimates.empty()) throw ContractViolation("valid_source_count: no estimates");
  int invalid = 0;
  for (const Waveform& e : estimates)
    if (SiSnr(e, mixture) > threshold_db) ++invalid;
  return std::max(1, static_cast<int>(estimates.size()) - invalid);
}

}  // namespace sepkit
