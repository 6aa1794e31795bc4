// sepkit/toy_corpus.cc

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

#include "sepkit/toy_corpus.h"

#include <cmath>
#include <cstdio>

#include "sepkit/common.h"
#include "sepkit/rng.h"
#include "sepkit/wav_io.h"

namespace sepkit {

namespace {

constexpr double kUtteranceSeconds = 4.0;
constexpr double kSpeakerF0Base = 105.0;   // Hz
constexpr double kSpeakerF0Step = 34.0;    // Hz between adjacent speakers
constexpr double kF0JitterHz = 4.0;        // per-utterance, keeps >= 20 Hz gaps

// One "utterance": harmonic stack on the speaker's fundamental with random
// harmonic phases, mild vibrato, and a syllable-rate raised-cosine envelope.
Waveform ToySpeech(int speaker, Rng* rng) {
  const int n = static_cast<int>(kUtteranceSeconds * kCorpusSampleRate);
  const double f0 = kSpeakerF0Base + kSpeakerF0Step * speaker +
                    rng->Uniform(-kF0JitterHz, kF0JitterHz);

  const int n_harmonics =
      std::min(9, static_cast<int>(0.45 * kCorpusSampleRate / f0));
  std::vector<double> phase(n_harmonics), amp(n_harmonics);
  for (int h = 0; h < n_harmonics; ++h) {
    phase[h] = rng->Uniform(0.0, 2.0 * M_PI);
    amp[h] = std::pow(h + 1.0, -1.1) * rng->Uniform(0.8, 1.0);
  }
  const double vib_rate = rng->Uniform(4.0, 6.5);
  const double vib_depth = rng->Uniform(0.3, 1.0);  // Hz
  const double syll_rate = rng->Uniform(2.2, 4.0);
  const double syll_phase = rng->Uniform(0.0, 2.0 * M_PI);

  Waveform w;
  w.sample_rate = kCorpusSampleRate;
  w.samples.resize(n);
  double carrier_phase = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kCorpusSampleRate;
    const double f_inst = f0 + vib_depth * std::sin(2.0 * M_PI * vib_rate * t);
    carrier_phase += 2.0 * M_PI * f_inst / kCorpusSampleRate;
    double v = 0.0;
    for (int h = 0; h < n_harmonics; ++h)
      v += amp[h] * std::sin((h + 1) * carrier_phase + phase[h]);
    const double envelope =
        0.15 + 0.85 * 0.5 *
                   (1.0 - std::cos(2.0 * M_PI * syll_rate * t + syll_phase));
    w.samples[i] = v * envelope;
  }
  const double peak = PeakAbs(w.samples);
  for (double& v : w.samples) v *= 0.5 / peak;
  return w;
}

// Noise alternates between filtered broadband, tonal interference, and a mix
// of both, so the pool has no harmonic-stack structure to confuse with toy
// speech.
Waveform ToyNoise(int index, Rng* rng) {
  const int n = static_cast<int>(kUtteranceSeconds * kCorpusSampleRate);
  Waveform w;
  w.sample_rate = kCorpusSampleRate;
  w.samples.assign(n, 0.0);

  const int kind = index % 3;  // 0 broadband, 1 tonal, 2 both

  if (kind == 0 || kind == 2) {
    // One-pole low-passed white noise; cutoff drawn per file.
    const double cutoff = rng->Uniform(400.0, 2800.0);
    const double a =
        std::exp(-2.0 * M_PI * cutoff / kCorpusSampleRate);
    double state = 0.0;
    for (int i = 0; i < n; ++i) {
      state = a * state + (1.0 - a) * rng->Gaussian();
      w.samples[i] += 2.5 * state;
    }
  }
  if (kind == 1 || kind == 2) {
    // Two or three steady interfering tones with slow beating.
    const int tones = 2 + static_cast<int>(rng->UniformInt(0, 1));
    for (int k = 0; k < tones; ++k) {
      const double f = rng->Uniform(500.0, 3400.0);
      const double ph = rng->Uniform(0.0, 2.0 * M_PI);
      const double am_rate = rng->Uniform(0.2, 1.5);
      const double am_phase = rng->Uniform(0.0, 2.0 * M_PI);
      for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / kCorpusSampleRate;
        const double am =
            0.6 + 0.4 * std::sin(2.0 * M_PI * am_rate * t + am_phase);
        w.samples[i] += 0.35 * am * std::sin(2.0 * M_PI * f * t + ph);
      }
    }
  }
  const double peak = PeakAbs(w.samples);
  for (double& v : w.samples) v *= 0.5 / peak;
  return w;
}

}  // namespace

ToyPools MakeToyCorpus(const std::filesystem::path& out_dir, int n_speakers,
                       int utterances_per_speaker, uint64_t seed) {
  if (n_speakers < 1 || utterances_per_speaker < 1)
    throw ContractViolation("toy corpus: counts must be >= 1");
  const std::filesystem::path speech_dir = out_dir / "speech";
  const std::filesystem::path noise_dir = out_dir / "noise";
  std::filesystem::create_directories(speech_dir);
  std::filesystem::create_directories(noise_dir);

  for (int spk = 0; spk < n_speakers; ++spk) {
    for (int utt = 0; utt < utterances_per_speaker; ++utt) {
      char name[32];
      std::snprintf(name, sizeof(name), "spk%02d_utt%03d.wav", spk, utt);
      Rng rng = Rng::ForKey(seed, name);
      WriteWav(speech_dir / name, ToySpeech(spk, &rng));
    }
  }

  const int n_noise = std::max(6, n_speakers);
  for (int k = 0; k < n_noise; ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "noise%03d.wav", k);
    Rng rng = Rng::ForKey(seed, name);
    WriteWav(noise_dir / name, ToyNoise(k, &rng));
  }

  return {ScanPool(speech_dir), ScanPool(noise_dir)};
}

}  // namespace sepkit
