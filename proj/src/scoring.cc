// sepkit/scoring.cc

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

#include "sepkit/scoring.h"

#include <limits>

#include "sepkit/common.h"
#include "sepkit/losses.h"
#include "sepkit/metrics.h"

namespace sepkit {

namespace {

// Depth-first search over injective assignments; fine for <= 5 x 5.
void SearchMatching(const std::vector<std::vector<double>>& cost, size_t r,
                    std::vector<int>* current, std::vector<bool>* used,
                    double acc, int assigned, double* best_cost,
                    std::vector<int>* best) {
  const size_t n_refs = cost.size();
  const size_t n_est = cost[0].size();
  if (r == n_refs) {
    const double mean = acc / std::max(1, assigned);
    if (mean < *best_cost) {
      *best_cost = mean;
      *best = *current;
    }
    return;
  }
  // Skipping a reference is only allowed when estimates run short.
  const size_t remaining_refs = n_refs - r;
  size_t free_est = 0;
  for (bool u : *used)
    if (!u) ++free_est;
  if (free_est < remaining_refs) {
    (*current)[r] = -1;
    SearchMatching(cost, r + 1, current, used, acc, assigned, best_cost, best);
  }
  for (size_t e = 0; e < n_est; ++e) {
    if ((*used)[e]) continue;
    (*used)[e] = true;
    (*current)[r] = static_cast<int>(e);
    SearchMatching(cost, r + 1, current, used, acc + cost[r][e], assigned + 1,
                   best_cost, best);
    (*used)[e] = false;
  }
  (*current)[r] = -1;
}

}  // namespace

std::vector<int> BestInjectiveMatching(
    const std::vector<std::vector<double>>& cost) {
  if (cost.empty()) return {};
  std::vector<int> current(cost.size(), -1), best(cost.size(), -1);
  std::vector<bool> used(cost[0].size(), false);
  double best_cost = std::numeric_limits<double>::infinity();
  SearchMatching(cost, 0, &current, &used, 0.0, 0, &best_cost, &best);
  return best;
}

UtteranceScore ScoreEstimates(const std::vector<Waveform>& estimates,
                              const MixtureSample& sample) {
  const size_t n_refs = sample.sources.size();
  if (n_refs == 0) throw ContractViolation("score: sample has no sources");
  if (estimates.empty()) throw ContractViolation("score: no estimates");

  UtteranceScore score;
  score.num_extracted = static_cast<int>(estimates.size());

  if (sample.config.num_speakers == 1) {
    // Denoising: first extraction against the clean source.
    score.matching = {0};
    const double s = SiSnr(estimates[0], sample.sources[0]);
    score.per_source_si_snr = {s};
    score.per_source_si_snri = {s - SiSnr(sample.mixture, sample.sources[0])};
    score.mean_si_snri = score.per_source_si_snri[0];
    return score;
  }

  std::vector<std::vector<double>> cost(n_refs,
                                        std::vector<double>(estimates.size()));
  for (size_t r = 0; r < n_refs; ++r)
    for (size_t e = 0; e < estimates.size(); ++e)
      cost[r][e] = NegSiSnr(estimates[e].samples, sample.sources[r].samples);

  score.matching = BestInjectiveMatching(cost);
  double acc = 0.0;
  for (size_t r = 0; r < n_refs; ++r) {
    const double base = SiSnr(sample.mixture, sample.sources[r]);
    const int e = score.matching[r];
    const double s =
        e >= 0 ? SiSnr(estimates[static_cast<size_t>(e)], sample.sources[r])
               : base;  // unmatched: score the unprocessed mixture
    score.per_source_si_snr.push_back(s);
    score.per_source_si_snri.push_back(s - base);
    acc += s - base;
  }
  score.mean_si_snri = acc / static_cast<double>(n_refs);
  return score;
}

UtteranceScore ScoreUtterance(const SeparatorFn& separator,
                              const MixtureSample& sample,
                              const StopRule& stop) {
  const RecursionResult result = SeparateRecursive(separator, sample.mixture, stop);
  if (stop.known_count &&
      static_cast<size_t>(*stop.known_count) != sample.sources.size())
    throw Error("score: known-count stop does not match reference count");
  UtteranceScore score = ScoreEstimates(result.extracted_sources, sample);
  score.stop_reason = result.stop_reason;
  return score;
}

}  // namespace sepkit
