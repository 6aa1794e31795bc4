// sepkit/nn.h

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

#ifndef SEPKIT_NN_H_
#define SEPKIT_NN_H_

#include <Eigen/Core>
#include <string>
#include <vector>

#include "sepkit/rng.h"

namespace sepkit {

// Named view over one parameter tensor and its gradient accumulator.
struct ParamView {
  std::string name;
  double* value;
  double* grad;
  size_t size;
};

namespace nn {

// Activations are (channels x time) matrices. Each layer's Backward
// accumulates parameter gradients and returns the input gradient; callers
// hold the forward activations needed for the backward pass.

inline Eigen::MatrixXd GaussianMatrix(int rows, int cols, double stddev,
                                      Rng* rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = stddev * rng->Gaussian();
  return m;
}

struct Conv1x1 {
  Eigen::MatrixXd w;  // out x in
  Eigen::VectorXd b;
  Eigen::MatrixXd gw;
  Eigen::VectorXd gb;

  void Init(int out, int in, Rng* rng) {
    w = GaussianMatrix(out, in, std::sqrt(2.0 / in), rng);
    b = Eigen::VectorXd::Zero(out);
    gw = Eigen::MatrixXd::Zero(out, in);
    gb = Eigen::VectorXd::Zero(out);
  }

  Eigen::MatrixXd Forward(const Eigen::MatrixXd& x) const {
    return (w * x).colwise() + b;
  }

  Eigen::MatrixXd Backward(const Eigen::MatrixXd& x,
                           const Eigen::MatrixXd& gy) {
    gw.noalias() += gy * x.transpose();
    gb += gy.rowwise().sum();
    return w.transpose() * gy;
  }
};

struct DepthwiseConv {
  Eigen::MatrixXd w;  // channels x kernel
  Eigen::VectorXd b;
  Eigen::MatrixXd gw;
  Eigen::VectorXd gb;
  int dilation = 1;

  void Init(int channels, int kernel, int dil, Rng* rng) {
    dilation = dil;
    w = GaussianMatrix(channels, kernel, std::sqrt(2.0 / kernel), rng);
    b = Eigen::VectorXd::Zero(channels);
    gw = Eigen::MatrixXd::Zero(channels, kernel);
    gb = Eigen::VectorXd::Zero(channels);
  }

  // 'same' zero padding, kernel centered.
  Eigen::MatrixXd Forward(const Eigen::MatrixXd& x) const {
    const int t_len = static_cast<int>(x.cols());
    const int kernel = static_cast<int>(w.cols());
    const int center = (kernel - 1) / 2;
    Eigen::MatrixXd y = b.replicate(1, t_len);
    for (int p = 0; p < kernel; ++p) {
      const int shift = (p - center) * dilation;
      const int t0 = std::max(0, -shift);
      const int t1 = std::min(t_len, t_len - shift);
      for (int t = t0; t < t1; ++t)
        y.col(t).array() += w.col(p).array() * x.col(t + shift).array();
    }
    return y;
  }

  Eigen::MatrixXd Backward(const Eigen::MatrixXd& x,
                           const Eigen::MatrixXd& gy) {
    const int t_len = static_cast<int>(x.cols());
    const int kernel = static_cast<int>(w.cols());
    const int center = (kernel - 1) / 2;
    Eigen::MatrixXd gx = Eigen::MatrixXd::Zero(x.rows(), t_len);
    for (int p = 0; p < kernel; ++p) {
      const int shift = (p - center) * dilation;
      const int t0 = std::max(0, -shift);
      const int t1 = std::min(t_len, t_len - shift);
      for (int t = t0; t < t1; ++t) {
        gw.col(p).array() += gy.col(t).array() * x.col(t + shift).array();
        gx.col(t + shift).array() += gy.col(t).array() * w.col(p).array();
      }
    }
    gb += gy.rowwise().sum();
    return gx;
  }
};

struct PRelu {
  Eigen::VectorXd a;  // per-channel slope
  Eigen::VectorXd ga;

  void Init(int channels) {
    a = Eigen::VectorXd::Constant(channels, 0.25);
    ga = Eigen::VectorXd::Zero(channels);
  }

  Eigen::MatrixXd Forward(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd y = x;
    for (int t = 0; t < x.cols(); ++t)
      y.col(t) = (x.col(t).array() > 0.0)
                     .select(x.col(t).array(), a.array() * x.col(t).array());
    return y;
  }

  Eigen::MatrixXd Backward(const Eigen::MatrixXd& x,
                           const Eigen::MatrixXd& gy) {
    Eigen::MatrixXd gx(x.rows(), x.cols());
    for (int t = 0; t < x.cols(); ++t) {
      const auto xa = x.col(t).array();
      gx.col(t) = (xa > 0.0).select(gy.col(t).array(),
                                    a.array() * gy.col(t).array());
      ga.array() += (xa > 0.0).select(Eigen::ArrayXd::Zero(x.rows()),
                                      gy.col(t).array() * xa);
    }
    return gx;
  }
};

// Layer normalization over the whole (channels x time) item, with per-channel
// affine parameters.
struct GlobalLayerNorm {
  static constexpr double kEps = 1e-8;
  Eigen::VectorXd gamma, beta;
  Eigen::VectorXd ggamma, gbeta;

  void Init(int channels) {
    gamma = Eigen::VectorXd::Ones(channels);
    beta = Eigen::VectorXd::Zero(channels);
    ggamma = Eigen::VectorXd::Zero(channels);
    gbeta = Eigen::VectorXd::Zero(channels);
  }

  struct Cache {
    Eigen::MatrixXd xhat;
    double inv_std = 0.0;
  };

  Eigen::MatrixXd Forward(const Eigen::MatrixXd& x, Cache* cache) const {
    const double mu = x.mean();
    const double var = (x.array() - mu).square().mean();
    const double inv_std = 1.0 / std::sqrt(var + kEps);
    cache->xhat = (x.array() - mu) * inv_std;
    cache->inv_std = inv_std;
    Eigen::MatrixXd y(x.rows(), x.cols());
    for (int t = 0; t < x.cols(); ++t)
      y.col(t) = cache->xhat.col(t).array() * gamma.array() + beta.array();
    return y;
  }

  Eigen::MatrixXd Backward(const Cache& cache, const Eigen::MatrixXd& gy) {
    const auto& xhat = cache.xhat;
    Eigen::MatrixXd g(xhat.rows(), xhat.cols());
    for (int t = 0; t < xhat.cols(); ++t) {
      gbeta += gy.col(t);
      ggamma.array() += gy.col(t).array() * xhat.col(t).array();
      g.col(t) = gy.col(t).array() * gamma.array();
    }
    const double g_mean = g.mean();
    const double gx_mean = (g.array() * xhat.array()).mean();
    return ((g.array() - g_mean - xhat.array() * gx_mean) * cache.inv_std)
        .matrix();
  }
};

}  // namespace nn
}  // namespace sepkit

#endif  // SEPKIT_NN_H_
