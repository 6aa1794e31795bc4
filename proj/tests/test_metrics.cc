// tests/test_metrics.cc

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

#include <doctest.h>

#include "sepkit/common.h"
#include "sepkit/metrics.h"
#include "testing_util.h"

using namespace sepkit;
using testing::OracleSiSnr;
using testing::RandomSignal;
using testing::Tone;

namespace {

Waveform Wave(std::vector<double> v) { return Waveform(std::move(v), 8000); }

}  // namespace

TEST_CASE("si_snr identity saturates at the cap") {
  const Waveform s = Wave({1.0, -1.0, 1.0, -1.0});
  CHECK(SiSnr(s, s) == kSiSnrCapDb);
  Waveform scaled = s;
  for (double& v : scaled.samples) v *= 2.5;
  CHECK(SiSnr(scaled, s) == kSiSnrCapDb);
}

TEST_CASE("si_snr golden values from independent evaluation") {
  const Waveform s = Wave({1.0, -1.0, 1.0, -1.0});
  // Constant offset disappears with mean removal: estimate collapses onto s.
  const Waveform dc = Wave({1.1, -0.9, 1.1, -0.9});
  CHECK(SiSnr(dc, s) == doctest::Approx(30.0).epsilon(1e-12));
  // Frozen from a scalar evaluation of the projection formula.
  const Waveform noisy = Wave({1.1, -1.2, 1.05, -1.0});
  CHECK(SiSnr(noisy, s) ==
        doctest::Approx(23.475586213799012).epsilon(1e-12));
  CHECK(SiSnr(noisy, s) ==
        doctest::Approx(OracleSiSnr(noisy.samples, s.samples)).epsilon(1e-12));
}

TEST_CASE("si_snr matches the oracle on random pairs") {
  Rng rng(11);
  for (int it = 0; it < 300; ++it) {
    const size_t len = 16 + static_cast<size_t>(rng.UniformInt(0, 500));
    const Waveform ref = RandomSignal(len, 8000, &rng);
    Waveform est = ref;
    for (double& v : est.samples) v += 0.3 * rng.Gaussian();
    CHECK(std::abs(SiSnr(est, ref) - OracleSiSnr(est.samples, ref.samples)) <
          1e-6);
  }
}

TEST_CASE("si_snr scale and dc invariance") {
  Rng rng(12);
  const Waveform ref = RandomSignal(512, 8000, &rng);
  Waveform est = ref;
  for (double& v : est.samples) v += 0.2 * rng.Gaussian();
  const double base = SiSnr(est, ref);
  for (double a : {0.001, 0.5, 3.0, 1e4}) {
    Waveform scaled = est;
    for (double& v : scaled.samples) v *= a;
    CHECK(std::abs(SiSnr(scaled, ref) - base) < 1e-6);
  }
  for (double offset : {-2.0, 0.3, 10.0}) {
    Waveform shifted = est;
    for (double& v : shifted.samples) v += offset;
    CHECK(std::abs(SiSnr(shifted, ref) - base) < 1e-6);
  }
}

TEST_CASE("si_snr is always within the cap") {
  Rng rng(13);
  for (int it = 0; it < 100; ++it) {
    const Waveform ref = RandomSignal(64, 8000, &rng);
    const Waveform est = RandomSignal(64, 8000, &rng);
    const double v = SiSnr(est, ref);
    CHECK(v <= kSiSnrCapDb);
    CHECK(v >= -kSiSnrCapDb);
  }
}

TEST_CASE("si_snr error contracts") {
  const Waveform s = Wave({1.0, -1.0, 1.0, -1.0});
  CHECK_THROWS_AS(SiSnr(Wave({1.0, 2.0}), s), ContractViolation);
  CHECK_THROWS_AS(SiSnr(s, Wave({0.5, 0.5, 0.5, 0.5})), DegenerateSignal);
  Waveform wrong_rate = s;
  wrong_rate.sample_rate = 16000;
  CHECK_THROWS_AS(SiSnr(wrong_rate, s), ContractViolation);
}

TEST_CASE("si_snr improvement definitional zero and oracle ceiling") {
  Rng rng(14);
  const Waveform ref = RandomSignal(1024, 8000, &rng);
  Waveform mix = ref;
  for (size_t i = 0; i < mix.samples.size(); ++i)
    mix.samples[i] += 0.4 * rng.Gaussian();
  CHECK(SiSnrImprovement(mix, ref, mix) == 0.0);
  CHECK(SiSnrImprovement(ref, ref, mix) ==
        doctest::Approx(kSiSnrCapDb - SiSnr(mix, ref)).epsilon(1e-12));
}

TEST_CASE("si_snr improvement two-tone golden") {
  const Waveform tone1 = Tone(440.0, 0.5, 1.0, 8000);
  const Waveform tone2 = Tone(1150.0, 0.4, 1.0, 8000, 0.3);
  Waveform mix = tone1;
  for (size_t i = 0; i < mix.samples.size(); ++i)
    mix.samples[i] += tone2.samples[i];
  // Frozen from an independent evaluation of the formula.
  CHECK(SiSnr(mix, tone1) == doctest::Approx(1.9382001923026129).epsilon(1e-9));
  CHECK(SiSnrImprovement(tone1, tone1, mix) ==
        doctest::Approx(kSiSnrCapDb - 1.9382001923026129).epsilon(1e-9));
  CHECK(SiSnrImprovement(tone1, tone1, mix) ==
        doctest::Approx(kSiSnrCapDb - OracleSiSnr(mix.samples, tone1.samples))
            .epsilon(1e-12));
}

TEST_CASE("si_snr analytic gradient matches central differences") {
  Rng rng(15);
  const size_t len = 96;
  const Waveform ref = RandomSignal(len, 8000, &rng);
  Waveform est = ref;
  for (double& v : est.samples) v += 0.3 * rng.Gaussian();

  std::vector<double> grad(len);
  SiSnrWithGrad(est.samples, ref.samples, grad);
  const double h = 1e-6;
  for (int k = 0; k < 20; ++k) {
    const auto i = static_cast<size_t>(rng.UniformInt(0, len - 1));
    std::vector<double> plus = est.samples, minus = est.samples;
    plus[i] += h;
    minus[i] -= h;
    const double fd =
        (SiSnrSpan(plus, ref.samples) - SiSnrSpan(minus, ref.samples)) /
        (2.0 * h);
    CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("saturated si_snr has zero gradient") {
  const Waveform s = Wave({1.0, -1.0, 1.0, -1.0});
  std::vector<double> grad(4);
  CHECK(SiSnrWithGrad(s.samples, s.samples, grad) == kSiSnrCapDb);
  for (double g : grad) CHECK(g == 0.0);
}

TEST_CASE("energy penalty gradient") {
  Rng rng(16);
  std::vector<double> x(64);
  for (double& v : x) v = 0.3 * rng.Gaussian();
  std::vector<double> grad(64);
  EnergyDbWithGrad(x, grad);
  const double h = 1e-7;
  for (int k = 0; k < 8; ++k) {
    const auto i = static_cast<size_t>(rng.UniformInt(0, 63));
    std::vector<double> plus = x, minus = x;
    plus[i] += h;
    minus[i] -= h;
    const double fd = (EnergyDb(plus) - EnergyDb(minus)) / (2.0 * h);
    CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-4));
  }
}
