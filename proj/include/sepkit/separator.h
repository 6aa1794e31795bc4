// sepkit/separator.h

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

#ifndef SEPKIT_SEPARATOR_H_
#define SEPKIT_SEPARATOR_H_

#include <optional>
#include <string>
#include <vector>

#include "sepkit/nn.h"
#include "sepkit/waveform.h"

namespace sepkit {

// Time-domain masking separator: learned basis encoder, stacked dilated
// depthwise temporal-convolution blocks with residual and skip paths, one
// sigmoid mask per output head, shared decoder. Two heads make it a
// one-and-rest model; more heads serve fixed-output-count training.
struct SeparatorConfig {
  int encoder_basis_count = 128;
  int encoder_window = 16;   // samples
  int encoder_stride = 8;    // samples
  int block_channels = 64;
  int conv_kernel = 3;
  int blocks_per_repeat = 4;  // dilations 1, 2, 4, ...
  int repeats = 2;
  int num_output_heads = 2;
  std::string mask_nonlinearity = "sigmoid";

  void Validate() const;
  bool operator==(const SeparatorConfig&) const = default;

  std::string ToJson() const;
  static SeparatorConfig FromJson(const std::string& j);
};

// The pair a one-and-rest model emits: one extracted source and the rest.
struct SeparationOutput {
  Waveform extracted;
  Waveform residual;
};

class Separator {
 public:
  Separator(const SeparatorConfig& config, uint64_t init_seed);

  const SeparatorConfig& config() const { return config_; }
  size_t NumParameters() const;

  // Named value/grad views in a stable order (checkpoint + optimizer order).
  std::vector<ParamView> Params();
  void ZeroGrad();

  // Inference. Outputs are trimmed back to the input length. Deterministic;
  // safe to call concurrently on a shared const instance.
  SeparationOutput Forward(const Waveform& mixture) const;
  std::vector<Waveform> ForwardAll(const Waveform& mixture) const;

  // Training path on raw sample buffers.
  struct Trace;
  std::vector<Eigen::VectorXd> ForwardTrain(const Eigen::VectorXd& input,
                                            Trace* trace) const;
  // head_grads[h] is d(loss)/d(head h output), input length. Accumulates
  // parameter gradients and returns d(loss)/d(input), which lets a front
  // model be trained jointly through this one.
  Eigen::VectorXd Backward(const Trace& trace,
                           const std::vector<Eigen::VectorXd>& head_grads);

 private:
  struct Block {
    nn::Conv1x1 in_conv;
    nn::PRelu prelu1;
    nn::GlobalLayerNorm norm1;
    nn::DepthwiseConv dconv;
    nn::PRelu prelu2;
    nn::GlobalLayerNorm norm2;
    nn::Conv1x1 res_conv;
    nn::Conv1x1 skip_conv;
  };

  SeparatorConfig config_;
  Eigen::MatrixXd enc_w_;  // basis x window
  Eigen::VectorXd enc_b_;
  Eigen::MatrixXd enc_gw_;
  Eigen::VectorXd enc_gb_;
  nn::GlobalLayerNorm input_norm_;
  nn::Conv1x1 bottleneck_;
  std::vector<Block> blocks_;
  nn::PRelu mask_prelu_;
  nn::Conv1x1 mask_conv_;  // block_channels -> heads * basis
  Eigen::MatrixXd dec_w_;  // basis x window
  Eigen::MatrixXd dec_gw_;
  size_t num_params_ = 0;
};

// Forward-trace storage; lives outside the model so inference stays const and
// shareable.
struct Separator::Trace {
  size_t input_len = 0;
  size_t padded_len = 0;
  Eigen::VectorXd padded;
  Eigen::MatrixXd frames;      // window x T
  Eigen::MatrixXd enc_z;       // pre-ReLU
  Eigen::MatrixXd enc_u;       // post-ReLU
  nn::GlobalLayerNorm::Cache input_norm_cache;
  Eigen::MatrixXd normed;
  Eigen::MatrixXd bottleneck_out;
  struct BlockTrace {
    Eigen::MatrixXd in;
    Eigen::MatrixXd a;    // post in_conv
    Eigen::MatrixXd p1;   // post prelu1
    nn::GlobalLayerNorm::Cache n1_cache;
    Eigen::MatrixXd n1;
    Eigen::MatrixXd dc;   // post depthwise conv
    Eigen::MatrixXd p2;
    nn::GlobalLayerNorm::Cache n2_cache;
    Eigen::MatrixXd n2;
  };
  std::vector<BlockTrace> blocks;
  Eigen::MatrixXd skip_sum;
  Eigen::MatrixXd mask_in;     // post mask_prelu
  Eigen::MatrixXd logits;      // heads*basis x T
  std::vector<Eigen::MatrixXd> masks;   // per head, basis x T
  std::vector<Eigen::MatrixXd> masked;  // per head, basis x T
};

}  // namespace sepkit

#endif  // SEPKIT_SEPARATOR_H_
