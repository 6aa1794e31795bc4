// tests/testing_util.h

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

#ifndef SEPKIT_TESTS_TESTING_UTIL_H_
#define SEPKIT_TESTS_TESTING_UTIL_H_

#include <atomic>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <memory>
#include <vector>

#include "sepkit/inference.h"
#include "sepkit/mixture.h"
#include "sepkit/rng.h"
#include "sepkit/waveform.h"

namespace sepkit::testing {

inline Waveform Tone(double freq_hz, double amp, double seconds, int rate,
                     double phase = 0.0) {
  Waveform w;
  w.sample_rate = rate;
  const int n = static_cast<int>(seconds * rate);
  w.samples.resize(n);
  for (int i = 0; i < n; ++i)
    w.samples[i] = amp * std::sin(2.0 * M_PI * freq_hz * i / rate + phase);
  return w;
}

inline Waveform RandomSignal(size_t len, int rate, Rng* rng,
                             double amp = 0.5) {
  Waveform w;
  w.sample_rate = rate;
  w.samples.resize(len);
  for (size_t i = 0; i < len; ++i) w.samples[i] = amp * rng->Gaussian();
  return w;
}

// Independent oracle transcription of the metric definition. Kept separate
// from the library code path on purpose.
inline double OracleSiSnr(const std::vector<double>& est,
                          const std::vector<double>& ref) {
  const size_t n = est.size();
  double em = 0.0, rm = 0.0;
  for (size_t i = 0; i < n; ++i) {
    em += est[i];
    rm += ref[i];
  }
  em /= static_cast<double>(n);
  rm /= static_cast<double>(n);
  double dot = 0.0, ss = 0.0;
  for (size_t i = 0; i < n; ++i)
    dot += (est[i] - em) * (ref[i] - rm), ss += (ref[i] - rm) * (ref[i] - rm);
  const double alpha = dot / ss;
  double tnum = 0.0, terr = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double t = alpha * (ref[i] - rm);
    const double e = (est[i] - em) - t;
    tnum += t * t;
    terr += e * e;
  }
  if (tnum <= 0.0) return -30.0;
  const double v = 10.0 * std::log10(tnum / (terr + 1e-8 * tnum));
  return std::min(30.0, std::max(-30.0, v));
}

// Radix-2 FFT magnitude spectrum (input cropped to a power of two).
inline std::vector<double> MagnitudeSpectrum(const std::vector<double>& x) {
  size_t n = 1;
  while (n * 2 <= x.size()) n *= 2;
  std::vector<std::complex<double>> a(n);
  for (size_t i = 0; i < n; ++i) a[i] = x[i];
  // bit reversal
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  std::vector<double> mag(n / 2);
  for (size_t i = 0; i < n / 2; ++i) mag[i] = std::abs(a[i]);
  return mag;
}

inline double DominantFrequencyHz(const Waveform& w) {
  const std::vector<double> mag = MagnitudeSpectrum(w.samples);
  size_t best = 1;
  for (size_t i = 1; i < mag.size(); ++i)
    if (mag[i] > mag[best]) best = i;
  size_t n = 1;
  while (n * 2 <= w.samples.size()) n *= 2;
  return static_cast<double>(best) * w.sample_rate / static_cast<double>(n);
}

inline std::filesystem::path MakeTempDir(const std::string& hint) {
  static std::atomic<int> counter{0};
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      ("sepkit_test_" + hint + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string SlurpFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

// Ground-truth one-and-rest separator: extracts the sample's sources in
// order, each call returning (next source, input - next source). Calls past
// the last source return (input, zeros).
inline SeparatorFn OracleSeparator(std::shared_ptr<MixtureSample> sample) {
  auto counter = std::make_shared<size_t>(0);
  return [sample, counter](const Waveform& input) {
    SeparationOutput out;
    const size_t j = (*counter)++;
    if (j < sample->sources.size()) {
      out.extracted = sample->sources[j];
      out.residual = input;
      for (size_t i = 0; i < input.samples.size(); ++i)
        out.residual.samples[i] -= out.extracted.samples[i];
    } else {
      out.extracted = input;
      out.residual = input;
      for (double& v : out.residual.samples) v = 0.0;
    }
    return out;
  };
}

// Oracle for evaluation flows where the driver loads samples itself: matches
// the input against each candidate's expected input chain (mixture, then
// successive residuals) and returns the next true source.
class ChainOracle {
 public:
  explicit ChainOracle(std::vector<MixtureSample> samples)
      : samples_(std::move(samples)) {}

  SeparatorFn Fn() {
    return [this](const Waveform& input) { return Step(input); };
  }

 private:
  SeparationOutput Step(const Waveform& input) {
    for (const MixtureSample& s : samples_) {
      // Walk the expected chain for this sample.
      std::vector<double> expected = s.mixture.samples;
      for (size_t j = 0; j <= s.sources.size(); ++j) {
        if (expected == input.samples) {
          SeparationOutput out;
          if (j < s.sources.size()) {
            out.extracted = s.sources[j];
          } else {  // past the last source; autoencode
            out.extracted = input;
          }
          out.residual = input;
          for (size_t i = 0; i < input.samples.size(); ++i)
            out.residual.samples[i] -= out.extracted.samples[i];
          return out;
        }
        if (j < s.sources.size())
          for (size_t i = 0; i < expected.size(); ++i)
            expected[i] -= s.sources[j].samples[i];
      }
    }
    // Unknown input: pass through.
    SeparationOutput out;
    out.extracted = input;
    out.residual = input;
    for (double& v : out.residual.samples) v = 0.0;
    return out;
  }

  std::vector<MixtureSample> samples_;
};

}  // namespace sepkit::testing

#endif  // SEPKIT_TESTS_TESTING_UTIL_H_
