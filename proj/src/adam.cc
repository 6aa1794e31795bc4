// sepkit/adam.cc

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

#include "sepkit/adam.h"

#include <cmath>

#include "sepkit/common.h"

namespace sepkit {

double AdamOptimizer::Step(std::vector<ParamView>* params) {
  size_t total = 0;
  for (const ParamView& p : *params) total += p.size;
  if (m_.empty()) {
    m_.assign(total, 0.0);
    v_.assign(total, 0.0);
  } else if (m_.size() != total) {
    throw ContractViolation("adam: parameter count changed between steps");
  }

  if (options_.weight_decay > 0.0) {
    for (ParamView& p : *params)
      for (size_t i = 0; i < p.size; ++i)
        p.grad[i] += options_.weight_decay * p.value[i];
  }

  double norm_sq = 0.0;
  for (const ParamView& p : *params)
    for (size_t i = 0; i < p.size; ++i) norm_sq += p.grad[i] * p.grad[i];
  const double norm = std::sqrt(norm_sq);
  double scale = 1.0;
  if (options_.grad_clip_norm > 0.0 && norm > options_.grad_clip_norm)
    scale = options_.grad_clip_norm / norm;

  ++step_count_;
  const double bc1 = 1.0 - std::pow(options_.beta1, double(step_count_));
  const double bc2 = 1.0 - std::pow(options_.beta2, double(step_count_));
  size_t off = 0;
  for (ParamView& p : *params) {
    for (size_t i = 0; i < p.size; ++i) {
      const double g = scale * p.grad[i];
      m_[off + i] = options_.beta1 * m_[off + i] + (1.0 - options_.beta1) * g;
      v_[off + i] =
          options_.beta2 * v_[off + i] + (1.0 - options_.beta2) * g * g;
      const double mhat = m_[off + i] / bc1;
      const double vhat = v_[off + i] / bc2;
      p.value[i] -=
          options_.learning_rate * mhat / (std::sqrt(vhat) + options_.eps);
    }
    off += p.size;
  }
  return norm;
}

void AdamOptimizer::ExportState(
    std::vector<std::pair<std::string, std::vector<double>>>* arrays,
    nlohmann::ordered_json* meta) const {
  arrays->emplace_back("opt/adam_m", m_);
  arrays->emplace_back("opt/adam_v", v_);
  (*meta)["optimizer"] = "adam";
  (*meta)["step_count"] = step_count_;
  (*meta)["learning_rate"] = options_.learning_rate;
}

void AdamOptimizer::ImportState(
    const std::vector<std::pair<std::string, std::vector<double>>>& arrays,
    const nlohmann::ordered_json& meta) {
  m_.clear();
  v_.clear();
  for (const auto& [name, data] : arrays) {
    if (name == "opt/adam_m") m_ = data;
    if (name == "opt/adam_v") v_ = data;
  }
  if (m_.empty() || v_.size() != m_.size())
    throw CheckpointError("optimizer state missing or inconsistent");
  step_count_ = meta.at("step_count").get<int64_t>();
  options_.learning_rate = meta.at("learning_rate").get<double>();
}

}  // namespace sepkit
