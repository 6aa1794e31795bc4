// sepkit/adam.h

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

#ifndef SEPKIT_ADAM_H_
#define SEPKIT_ADAM_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sepkit/nn.h"

namespace sepkit {

// Adam over a stable-ordered parameter list, with optional L2 gradient term
// and global-norm gradient clipping applied first.
class AdamOptimizer {
 public:
  struct Options {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;    // L2 coefficient added to gradients
    double grad_clip_norm = 5.0;  // <= 0 disables clipping
  };

  explicit AdamOptimizer(Options options) : options_(options) {}

  // One update over all views. Returns the pre-clip global gradient norm.
  double Step(std::vector<ParamView>* params);

  int64_t step_count() const { return step_count_; }
  double learning_rate() const { return options_.learning_rate; }
  void set_learning_rate(double lr) { options_.learning_rate = lr; }

  // Flat state arrays ("opt/adam_m", "opt/adam_v") plus scalar metadata, for
  // exact checkpoint-resume.
  void ExportState(
      std::vector<std::pair<std::string, std::vector<double>>>* arrays,
      nlohmann::ordered_json* meta) const;
  void ImportState(
      const std::vector<std::pair<std::string, std::vector<double>>>& arrays,
      const nlohmann::ordered_json& meta);

 private:
  Options options_;
  int64_t step_count_ = 0;
  std::vector<double> m_, v_;  // flat, concatenated in view order
};

}  // namespace sepkit

#endif  // SEPKIT_ADAM_H_
