// tests/test_synth.cc

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

#include <cmath>
#include <set>

#include "sepkit/common.h"
#include "sepkit/mixture.h"
#include "sepkit/toy_corpus.h"
#include "sepkit/trainer.h"
#include "sepkit/wav_io.h"
#include "testing_util.h"

using namespace sepkit;
using testing::MakeTempDir;
using testing::SlurpFile;

namespace {

// One shared toy corpus for this file.
struct SynthFixture {
  std::filesystem::path dir;
  ToyPools pools;
  SynthFixture() : dir(MakeTempDir("synth")) {
    pools = MakeToyCorpus(dir / "toy", 3, 4, 99);
  }
};

SynthFixture& Fixture() {
  static SynthFixture f;
  return f;
}

double PowerDb(const std::vector<double>& x) {
  return 10.0 * std::log10(MeanSquarePower(x));
}

}  // namespace

TEST_CASE("toy corpus shape and determinism") {
  auto& f = Fixture();
  CHECK(f.pools.speech.size() == 12);
  CHECK(f.pools.noise.size() >= 6);
  for (const PoolFile& p : f.pools.speech) {
    const Waveform w = ReadWav(p.path);
    CHECK(w.sample_rate == kCorpusSampleRate);
    CHECK(w.samples.size() == 4 * kCorpusSampleRate);
  }
  // Same seed, different directory: byte-identical files.
  const auto dir2 = MakeTempDir("synth_twin");
  const ToyPools twin = MakeToyCorpus(dir2 / "toy", 3, 4, 99);
  REQUIRE(twin.speech.size() == f.pools.speech.size());
  for (size_t i = 0; i < twin.speech.size(); ++i)
    CHECK(SlurpFile(twin.speech[i].path) == SlurpFile(f.pools.speech[i].path));
  // Different seed differs.
  const ToyPools other = MakeToyCorpus(dir2 / "toy_other", 3, 4, 100);
  CHECK(SlurpFile(other.speech[0].path) != SlurpFile(f.pools.speech[0].path));
}

TEST_CASE("toy speakers have distinct fundamentals") {
  auto& f = Fixture();
  std::map<std::string, double> f0;
  for (const PoolFile& p : f.pools.speech) {
    const double hz = testing::DominantFrequencyHz(ReadWav(p.path));
    if (f0.count(p.speaker_id))
      // Within a speaker the fundamental stays close.
      CHECK(std::abs(f0[p.speaker_id] - hz) < 12.0);
    else
      f0[p.speaker_id] = hz;
  }
  REQUIRE(f0.size() == 3);
  std::vector<double> values;
  for (const auto& [id, hz] : f0) values.push_back(hz);
  std::sort(values.begin(), values.end());
  for (size_t i = 1; i < values.size(); ++i)
    CHECK(values[i] - values[i - 1] >= 20.0);
}

TEST_CASE("synthesize_sample is deterministic and additive") {
  auto& f = Fixture();
  const TaskConfig cfg = TaskConfig::FromTag(TaskTag::k2sp);
  const auto [s1, e1] = SynthesizeSample(f.pools.speech, f.pools.noise, cfg, 7);
  const auto [s2, e2] = SynthesizeSample(f.pools.speech, f.pools.noise, cfg, 7);
  CHECK(s1.mixture.samples == s2.mixture.samples);
  CHECK(e1.ToJson() == e2.ToJson());

  const TaskConfig cfg3 = TaskConfig::FromTag(TaskTag::k3sp);
  const auto [s3, e3] =
      SynthesizeSample(f.pools.speech, f.pools.noise, cfg3, 21);
  REQUIRE(s3.sources.size() == 3);
  double max_err = 0.0;
  for (size_t i = 0; i < s3.mixture.samples.size(); ++i) {
    const double sum = s3.sources[0].samples[i] + s3.sources[1].samples[i] +
                       s3.sources[2].samples[i];
    max_err = std::max(max_err, std::abs(s3.mixture.samples[i] - sum));
  }
  CHECK(max_err < 1e-6);
}

TEST_CASE("synthesize_sample denoising config and snr conformance") {
  auto& f = Fixture();
  const TaskConfig cfg = TaskConfig::FromTag(TaskTag::k1spN);
  const auto [sample, entry] =
      SynthesizeSample(f.pools.speech, f.pools.noise, cfg, 5);
  REQUIRE(sample.sources.size() == 1);
  REQUIRE(sample.noise.has_value());
  CHECK(entry.noise_snr_db >= cfg.noise_snr_lo_db);
  CHECK(entry.noise_snr_db <= cfg.noise_snr_hi_db);
  // Re-measured speech-vs-noise SNR matches the recorded draw.
  const double measured =
      PowerDb(sample.sources[0].samples) - PowerDb(sample.noise->samples);
  CHECK(std::abs(measured - entry.noise_snr_db) < 1e-6);
}

TEST_CASE("synthesize_sample pairwise speech snr conformance") {
  auto& f = Fixture();
  const TaskConfig cfg = TaskConfig::FromTag(TaskTag::k3spN);
  const auto [sample, entry] =
      SynthesizeSample(f.pools.speech, f.pools.noise, cfg, 33);
  REQUIRE(entry.sources.size() == 3);
  std::set<std::string> speakers;
  for (size_t k = 0; k < 3; ++k) {
    speakers.insert(entry.sources[k].speaker_id);
    const double measured =
        PowerDb(sample.sources[0].samples) - PowerDb(sample.sources[k].samples);
    CHECK(std::abs(measured - entry.sources[k].snr_db) < 1e-6);
    CHECK(entry.sources[k].snr_db >= -2.5);
    CHECK(entry.sources[k].snr_db <= 2.5);
  }
  CHECK(speakers.size() == 3);  // distinct speakers
  // Noise is referenced against the summed speech.
  std::vector<double> speech_sum(sample.mixture.samples.size(), 0.0);
  for (const Waveform& s : sample.sources)
    for (size_t i = 0; i < speech_sum.size(); ++i)
      speech_sum[i] += s.samples[i];
  CHECK(std::abs(PowerDb(speech_sum) - PowerDb(sample.noise->samples) -
                 entry.noise_snr_db) < 1e-6);
}

TEST_CASE("synthesize_sample pool errors") {
  auto& f = Fixture();
  const TaskConfig cfg = TaskConfig::FromTag(TaskTag::k1spN);
  CHECK_THROWS_AS(SynthesizeSample(f.pools.speech, {}, cfg, 1),
                  ContractViolation);
  std::vector<PoolFile> two = {f.pools.speech[0], f.pools.speech[1]};
  // Same speaker twice: not enough distinct speakers for 2sp.
  std::vector<PoolFile> same_speaker = {f.pools.speech[0], f.pools.speech[1]};
  same_speaker[1].speaker_id = same_speaker[0].speaker_id;
  CHECK_THROWS_AS(SynthesizeSample(same_speaker, f.pools.noise,
                                   TaskConfig::FromTag(TaskTag::k2sp), 1),
                  ContractViolation);
}

TEST_CASE("generate_corpus writes the advertised files") {
  auto& f = Fixture();
  const auto out = MakeTempDir("corpus");

  SUBCASE("zero counts produce an empty manifest") {
    const auto manifest = GenerateCorpus(
        f.pools.speech, f.pools.noise,
        {{TaskConfig::FromTag(TaskTag::k2sp), 0}}, out / "empty", 1);
    CHECK(ReadManifest(manifest).empty());
    size_t wavs = 0;
    for (const auto& e : std::filesystem::directory_iterator(out / "empty"))
      if (e.path().extension() == ".wav") ++wavs;
    CHECK(wavs == 0);
  }

  SUBCASE("counts translate to manifest lines and wav files") {
    const auto manifest = GenerateCorpus(
        f.pools.speech, f.pools.noise,
        {{TaskConfig::FromTag(TaskTag::k2sp), 10}}, out / "ten", 2);
    CHECK(ReadManifest(manifest).size() == 10);
    size_t wavs = 0;
    for (const auto& e : std::filesystem::directory_iterator(out / "ten"))
      if (e.path().extension() == ".wav") ++wavs;
    CHECK(wavs == 30);  // mixture + 2 sources each
  }

  SUBCASE("regeneration from the manifest is byte-identical") {
    const auto manifest = GenerateCorpus(
        f.pools.speech, f.pools.noise,
        {{TaskConfig::FromTag(TaskTag::k2spN), 3},
         {TaskConfig::FromTag(TaskTag::k1spN), 2}},
        out / "regen", 3);
    std::map<std::string, std::string> original;
    for (const auto& e : std::filesystem::directory_iterator(out / "regen"))
      if (e.path().extension() == ".wav")
        original[e.path().filename().string()] = SlurpFile(e.path());
    RegenerateFromManifest(manifest, out / "regen_copy");
    for (const auto& [name, bytes] : original)
      CHECK(SlurpFile(out / "regen_copy" / name) == bytes);
  }
}

TEST_CASE("manifest json round trip") {
  auto& f = Fixture();
  const TaskConfig cfg = TaskConfig::FromTag(TaskTag::k2spN);
  auto [sample, entry] = SynthesizeSample(f.pools.speech, f.pools.noise, cfg, 3);
  entry.output_id = "2sp+n_000003";
  const ManifestEntry back = ManifestEntry::FromJson(entry.ToJson());
  CHECK(back.ToJson() == entry.ToJson());
  // Rebuild from the parsed entry matches the original sample bit for bit.
  const MixtureSample rebuilt = RebuildFromManifest(back);
  CHECK(rebuilt.mixture.samples == sample.mixture.samples);
}

TEST_CASE("derive clean corpus pairs with its noisy origin") {
  auto& f = Fixture();
  const auto out = MakeTempDir("derive");
  const auto noisy_manifest = GenerateCorpus(
      f.pools.speech, f.pools.noise,
      {{TaskConfig::FromTag(TaskTag::k2spN), 3}}, out / "noisy", 4);
  const auto clean_manifest =
      DeriveCleanCorpus(noisy_manifest, out / "clean");
  const auto noisy = ReadManifest(noisy_manifest);
  const auto clean = ReadManifest(clean_manifest);
  REQUIRE(clean.size() == noisy.size());
  for (size_t i = 0; i < clean.size(); ++i) {
    CHECK(clean[i].output_id == noisy[i].output_id);
    CHECK(clean[i].tag == TaskTag::k2sp);
    CHECK_FALSE(clean[i].has_noise);
    REQUIRE(clean[i].sources.size() == noisy[i].sources.size());
    for (size_t k = 0; k < clean[i].sources.size(); ++k)
      CHECK(clean[i].sources[k].gain == noisy[i].sources[k].gain);
    // Clean mixture is exactly the source sum.
    const MixtureSample s = RebuildFromManifest(clean[i]);
    for (size_t t = 0; t < s.mixture.samples.size(); ++t) {
      double sum = 0.0;
      for (const Waveform& src : s.sources) sum += src.samples[t];
      CHECK(s.mixture.samples[t] == doctest::Approx(sum).epsilon(1e-12));
    }
  }
}

TEST_CASE("on-the-fly corpus is deterministic per index") {
  auto& f = Fixture();
  const OnTheFlyCorpus corpus(f.pools.speech, f.pools.noise,
                              TaskConfig::FromTag(TaskTag::k2sp), 8, 77);
  const MixtureSample a = corpus.Get(3);
  const MixtureSample b = corpus.Get(3);
  CHECK(a.mixture.samples == b.mixture.samples);
  const MixtureSample c = corpus.Get(4);
  CHECK(a.mixture.samples != c.mixture.samples);
}
