// sepkit/separator.cc

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

#include "sepkit/separator.h"

#include <cmath>

#include <nlohmann/json.hpp>

#include "sepkit/common.h"

namespace sepkit {

void SeparatorConfig::Validate() const {
  if (encoder_basis_count < 1 || encoder_window < 1 || encoder_stride < 1 ||
      block_channels < 1 || conv_kernel < 1 || blocks_per_repeat < 1 ||
      repeats < 1)
    throw ContractViolation("separator config: all sizes must be >= 1");
  if (encoder_stride > encoder_window)
    throw ContractViolation("separator config: stride must be <= window");
  if (num_output_heads < 2)
    throw ContractViolation("separator config: need at least 2 output heads");
  if (conv_kernel % 2 == 0)
    throw ContractViolation("separator config: conv kernel must be odd");
  if (mask_nonlinearity != "sigmoid")
    throw ContractViolation("separator config: unsupported mask nonlinearity");
}

std::string SeparatorConfig::ToJson() const {
  nlohmann::ordered_json j;
  j["encoder_basis_count"] = encoder_basis_count;
  j["encoder_window"] = encoder_window;
  j["encoder_stride"] = encoder_stride;
  j["block_channels"] = block_channels;
  j["conv_kernel"] = conv_kernel;
  j["blocks_per_repeat"] = blocks_per_repeat;
  j["repeats"] = repeats;
  j["num_output_heads"] = num_output_heads;
  j["mask_nonlinearity"] = mask_nonlinearity;
  return j.dump();
}

SeparatorConfig SeparatorConfig::FromJson(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SeparatorConfig c;
  c.encoder_basis_count = j.at("encoder_basis_count").get<int>();
  c.encoder_window = j.at("encoder_window").get<int>();
  c.encoder_stride = j.at("encoder_stride").get<int>();
  c.block_channels = j.at("block_channels").get<int>();
  c.conv_kernel = j.at("conv_kernel").get<int>();
  c.blocks_per_repeat = j.at("blocks_per_repeat").get<int>();
  c.repeats = j.at("repeats").get<int>();
  c.num_output_heads = j.at("num_output_heads").get<int>();
  c.mask_nonlinearity = j.at("mask_nonlinearity").get<std::string>();
  c.Validate();
  return c;
}

Separator::Separator(const SeparatorConfig& config, uint64_t init_seed)
    : config_(config) {
  config_.Validate();
  Rng rng = Rng::ForKey(init_seed, "separator-init");
  const int basis = config_.encoder_basis_count;
  const int window = config_.encoder_window;
  const int width = config_.block_channels;

  enc_w_ = nn::GaussianMatrix(basis, window, std::sqrt(2.0 / window), &rng);
  enc_b_ = Eigen::VectorXd::Zero(basis);
  enc_gw_ = Eigen::MatrixXd::Zero(basis, window);
  enc_gb_ = Eigen::VectorXd::Zero(basis);

  input_norm_.Init(basis);
  bottleneck_.Init(width, basis, &rng);

  for (int r = 0; r < config_.repeats; ++r) {
    for (int i = 0; i < config_.blocks_per_repeat; ++i) {
      const bool last = r == config_.repeats - 1 &&
                        i == config_.blocks_per_repeat - 1;
      Block blk;
      blk.in_conv.Init(width, width, &rng);
      blk.prelu1.Init(width);
      blk.norm1.Init(width);
      blk.dconv.Init(width, config_.conv_kernel, 1 << i, &rng);
      blk.prelu2.Init(width);
      blk.norm2.Init(width);
      // The final block feeds only the mask head, so its residual path
      // would be dead weight.
      if (!last) blk.res_conv.Init(width, width, &rng);
      blk.skip_conv.Init(width, width, &rng);
      blocks_.push_back(std::move(blk));
    }
  }

  mask_prelu_.Init(width);
  mask_conv_.Init(config_.num_output_heads * basis, width, &rng);
  dec_w_ = nn::GaussianMatrix(basis, window, std::sqrt(1.0 / basis), &rng);
  dec_gw_ = Eigen::MatrixXd::Zero(basis, window);

  num_params_ = 0;
  for (const ParamView& v : Params()) num_params_ += v.size;
}

std::vector<ParamView> Separator::Params() {
  std::vector<ParamView> views;
  auto add = [&views](const std::string& name, Eigen::MatrixXd& v,
                      Eigen::MatrixXd& g) {
    views.push_back({name, v.data(), g.data(), static_cast<size_t>(v.size())});
  };
  auto addv = [&views](const std::string& name, Eigen::VectorXd& v,
                       Eigen::VectorXd& g) {
    views.push_back({name, v.data(), g.data(), static_cast<size_t>(v.size())});
  };
  add("encoder/w", enc_w_, enc_gw_);
  addv("encoder/b", enc_b_, enc_gb_);
  addv("input_norm/gamma", input_norm_.gamma, input_norm_.ggamma);
  addv("input_norm/beta", input_norm_.beta, input_norm_.gbeta);
  add("bottleneck/w", bottleneck_.w, bottleneck_.gw);
  addv("bottleneck/b", bottleneck_.b, bottleneck_.gb);
  for (size_t k = 0; k < blocks_.size(); ++k) {
    Block& blk = blocks_[k];
    const std::string p = "block" + std::to_string(k) + "/";
    add(p + "in_conv/w", blk.in_conv.w, blk.in_conv.gw);
    addv(p + "in_conv/b", blk.in_conv.b, blk.in_conv.gb);
    addv(p + "prelu1/a", blk.prelu1.a, blk.prelu1.ga);
    addv(p + "norm1/gamma", blk.norm1.gamma, blk.norm1.ggamma);
    addv(p + "norm1/beta", blk.norm1.beta, blk.norm1.gbeta);
    add(p + "dconv/w", blk.dconv.w, blk.dconv.gw);
    addv(p + "dconv/b", blk.dconv.b, blk.dconv.gb);
    addv(p + "prelu2/a", blk.prelu2.a, blk.prelu2.ga);
    addv(p + "norm2/gamma", blk.norm2.gamma, blk.norm2.ggamma);
    addv(p + "norm2/beta", blk.norm2.beta, blk.norm2.gbeta);
    if (blk.res_conv.w.size() > 0) {
      add(p + "res_conv/w", blk.res_conv.w, blk.res_conv.gw);
      addv(p + "res_conv/b", blk.res_conv.b, blk.res_conv.gb);
    }
    add(p + "skip_conv/w", blk.skip_conv.w, blk.skip_conv.gw);
    addv(p + "skip_conv/b", blk.skip_conv.b, blk.skip_conv.gb);
  }
  addv("mask/prelu/a", mask_prelu_.a, mask_prelu_.ga);
  add("mask/conv/w", mask_conv_.w, mask_conv_.gw);
  addv("mask/conv/b", mask_conv_.b, mask_conv_.gb);
  add("decoder/w", dec_w_, dec_gw_);
  return views;
}

size_t Separator::NumParameters() const { return num_params_; }

void Separator::ZeroGrad() {
  for (ParamView& v : Params())
    std::fill(v.grad, v.grad + v.size, 0.0);
}

std::vector<Eigen::VectorXd> Separator::ForwardTrain(
    const Eigen::VectorXd& input, Trace* trace) const {
  const int window = config_.encoder_window;
  const int stride = config_.encoder_stride;
  const auto len = static_cast<size_t>(input.size());
  if (len < static_cast<size_t>(window))
    throw ContractViolation("separator: input shorter than encoder window");

  // Reflect-pad on the right to land on a whole number of frames.
  const size_t rem = (len - window) % stride;
  const size_t pad = rem == 0 ? 0 : stride - rem;
  trace->input_len = len;
  trace->padded_len = len + pad;
  trace->padded.resize(static_cast<Eigen::Index>(len + pad));
  trace->padded.head(static_cast<Eigen::Index>(len)) = input;
  for (size_t j = 0; j < pad; ++j)
    trace->padded(static_cast<Eigen::Index>(len + j)) =
        input(static_cast<Eigen::Index>(len - 2 - j));

  const auto t_frames =
      static_cast<int>((trace->padded_len - window) / stride + 1);

  trace->frames.resize(window, t_frames);
  for (int t = 0; t < t_frames; ++t)
    trace->frames.col(t) =
        trace->padded.segment(static_cast<Eigen::Index>(t) * stride, window);

  trace->enc_z = (enc_w_ * trace->frames).colwise() + enc_b_;
  trace->enc_u = trace->enc_z.cwiseMax(0.0);

  trace->normed = input_norm_.Forward(trace->enc_u, &trace->input_norm_cache);
  trace->bottleneck_out = bottleneck_.Forward(trace->normed);

  trace->blocks.resize(blocks_.size());
  trace->skip_sum =
      Eigen::MatrixXd::Zero(config_.block_channels, t_frames);
  Eigen::MatrixXd x = trace->bottleneck_out;
  for (size_t k = 0; k < blocks_.size(); ++k) {
    const Block& blk = blocks_[k];
    Trace::BlockTrace& bt = trace->blocks[k];
    bt.in = x;
    bt.a = blk.in_conv.Forward(bt.in);
    bt.p1 = blk.prelu1.Forward(bt.a);
    bt.n1 = blk.norm1.Forward(bt.p1, &bt.n1_cache);
    bt.dc = blk.dconv.Forward(bt.n1);
    bt.p2 = blk.prelu2.Forward(bt.dc);
    bt.n2 = blk.norm2.Forward(bt.p2, &bt.n2_cache);
    trace->skip_sum += blk.skip_conv.Forward(bt.n2);
    if (blk.res_conv.w.size() > 0) x = bt.in + blk.res_conv.Forward(bt.n2);
  }

  trace->mask_in = mask_prelu_.Forward(trace->skip_sum);
  trace->logits = mask_conv_.Forward(trace->mask_in);

  const int basis = config_.encoder_basis_count;
  const int heads = config_.num_output_heads;
  trace->masks.resize(heads);
  trace->masked.resize(heads);
  std::vector<Eigen::VectorXd> outputs(heads);
  for (int h = 0; h < heads; ++h) {
    trace->masks[h] =
        (1.0 / (1.0 + (-trace->logits.middleRows(h * basis, basis).array())
                          .exp()))
            .matrix();
    trace->masked[h] =
        trace->enc_u.cwiseProduct(trace->masks[h]);

    // Transposed conv decode with overlap-add, then trim the padding.
    const Eigen::MatrixXd seg = dec_w_.transpose() * trace->masked[h];
    Eigen::VectorXd y =
        Eigen::VectorXd::Zero(static_cast<Eigen::Index>(trace->padded_len));
    for (int t = 0; t < t_frames; ++t)
      y.segment(static_cast<Eigen::Index>(t) * stride, window) += seg.col(t);
    outputs[h] = y.head(static_cast<Eigen::Index>(len));
  }
  return outputs;
}

Eigen::VectorXd Separator::Backward(
    const Trace& trace, const std::vector<Eigen::VectorXd>& head_grads) {
  const int window = config_.encoder_window;
  const int stride = config_.encoder_stride;
  const int basis = config_.encoder_basis_count;
  const int heads = config_.num_output_heads;
  if (static_cast<int>(head_grads.size()) != heads)
    throw ContractViolation("separator backward: wrong head grad count");
  const auto t_frames = static_cast<int>(trace.frames.cols());

  Eigen::MatrixXd g_enc_u = Eigen::MatrixXd::Zero(basis, t_frames);
  Eigen::MatrixXd g_logits = Eigen::MatrixXd::Zero(heads * basis, t_frames);

  for (int h = 0; h < heads; ++h) {
    if (static_cast<size_t>(head_grads[h].size()) != trace.input_len)
      throw ContractViolation("separator backward: head grad length mismatch");
    Eigen::VectorXd gy =
        Eigen::VectorXd::Zero(static_cast<Eigen::Index>(trace.padded_len));
    gy.head(static_cast<Eigen::Index>(trace.input_len)) = head_grads[h];

    // Decoder backward.
    Eigen::MatrixXd gseg(window, t_frames);
    for (int t = 0; t < t_frames; ++t)
      gseg.col(t) = gy.segment(static_cast<Eigen::Index>(t) * stride, window);
    dec_gw_.noalias() += trace.masked[h] * gseg.transpose();
    const Eigen::MatrixXd g_masked = dec_w_ * gseg;

    // Product rule through the mask multiply.
    g_enc_u += g_masked.cwiseProduct(trace.masks[h]);
    const Eigen::MatrixXd g_mask = g_masked.cwiseProduct(trace.enc_u);
    g_logits.middleRows(h * basis, basis) =
        g_mask.array() * trace.masks[h].array() *
        (1.0 - trace.masks[h].array());
  }

  Eigen::MatrixXd g_mask_in = mask_conv_.Backward(trace.mask_in, g_logits);
  Eigen::MatrixXd g_skip_sum =
      mask_prelu_.Backward(trace.skip_sum, g_mask_in);

  // Blocks in reverse; every block's skip head sees the same skip-sum grad.
  Eigen::MatrixXd g_out =
      Eigen::MatrixXd::Zero(config_.block_channels, t_frames);
  for (size_t k = blocks_.size(); k-- > 0;) {
    Block& blk = blocks_[k];
    const Trace::BlockTrace& bt = trace.blocks[k];
    Eigen::MatrixXd g_n2 = blk.skip_conv.Backward(bt.n2, g_skip_sum);
    if (blk.res_conv.w.size() > 0)
      g_n2 += blk.res_conv.Backward(bt.n2, g_out);
    const Eigen::MatrixXd g_p2 = blk.norm2.Backward(bt.n2_cache, g_n2);
    const Eigen::MatrixXd g_dc = blk.prelu2.Backward(bt.dc, g_p2);
    const Eigen::MatrixXd g_n1 = blk.dconv.Backward(bt.n1, g_dc);
    const Eigen::MatrixXd g_p1 = blk.norm1.Backward(bt.n1_cache, g_n1);
    const Eigen::MatrixXd g_a = blk.prelu1.Backward(bt.a, g_p1);
    const Eigen::MatrixXd g_local = blk.in_conv.Backward(bt.in, g_a);
    g_out += g_local;  // residual connection
  }

  Eigen::MatrixXd g_normed = bottleneck_.Backward(trace.normed, g_out);
  g_enc_u += input_norm_.Backward(trace.input_norm_cache, g_normed);

  // ReLU, encoder conv, frame scatter, reflect-pad fold.
  const Eigen::MatrixXd g_enc_z =
      (trace.enc_z.array() > 0.0).select(g_enc_u, 0.0);
  enc_gw_.noalias() += g_enc_z * trace.frames.transpose();
  enc_gb_ += g_enc_z.rowwise().sum();
  const Eigen::MatrixXd g_frames = enc_w_.transpose() * g_enc_z;

  Eigen::VectorXd g_padded =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(trace.padded_len));
  for (int t = 0; t < t_frames; ++t)
    g_padded.segment(static_cast<Eigen::Index>(t) * stride, window) +=
        g_frames.col(t);

  Eigen::VectorXd g_input =
      g_padded.head(static_cast<Eigen::Index>(trace.input_len));
  const size_t pad = trace.padded_len - trace.input_len;
  for (size_t j = 0; j < pad; ++j)
    g_input(static_cast<Eigen::Index>(trace.input_len - 2 - j)) +=
        g_padded(static_cast<Eigen::Index>(trace.input_len + j));
  return g_input;
}

namespace {

Eigen::VectorXd ToVector(const Waveform& w) {
  return Eigen::Map<const Eigen::VectorXd>(
      w.samples.data(), static_cast<Eigen::Index>(w.samples.size()));
}

Waveform ToWaveform(const Eigen::VectorXd& v, int rate) {
  Waveform w;
  w.sample_rate = rate;
  w.samples.assign(v.data(), v.data() + v.size());
  return w;
}

}  // namespace

std::vector<Waveform> Separator::ForwardAll(const Waveform& mixture) const {
  ValidateWaveform(mixture, "separator input");
  Trace trace;
  const std::vector<Eigen::VectorXd> outs = ForwardTrain(ToVector(mixture), &trace);
  std::vector<Waveform> result;
  result.reserve(outs.size());
  for (const auto& o : outs) result.push_back(ToWaveform(o, mixture.sample_rate));
  return result;
}

SeparationOutput Separator::Forward(const Waveform& mixture) const {
  if (config_.num_output_heads != 2)
    throw ContractViolation(
        "one-and-rest forward requires exactly 2 output heads");
  std::vector<Waveform> outs = ForwardAll(mixture);
  return {std::move(outs[0]), std::move(outs[1])};
}

}  // namespace sepkit
