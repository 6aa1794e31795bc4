// sepkit/mixture.cc

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

#include "sepkit/mixture.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "sepkit/common.h"
#include "sepkit/mixing.h"
#include "sepkit/resample.h"
#include "sepkit/rng.h"
#include "sepkit/wav_io.h"

namespace sepkit {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kPeakLimit = 0.9;

using WaveLoader = std::function<const Waveform&(const std::string&)>;

// Caching loader: read + resample each input file once.
class PoolLoader {
 public:
  const Waveform& Get(const std::string& path, int rate) {
    auto it = cache_.find(path);
    if (it != cache_.end()) return it->second;
    Waveform w = ReadWav(path);
    if (w.sample_rate != rate) w = Resample(w, rate);
    return cache_.emplace(path, std::move(w)).first->second;
  }

 private:
  std::map<std::string, Waveform> cache_;
};

// Assembles the in-memory sample purely from manifest fields. Both fresh
// synthesis and replay run through here so the float operations are
// bit-identical.
MixtureSample BuildSample(const ManifestEntry& entry, PoolLoader* loader) {
  MixtureSample sample;
  sample.config = TaskConfig::FromTag(entry.tag);
  sample.seed = entry.seed;

  const size_t len = entry.num_samples;
  sample.mixture.sample_rate = entry.sample_rate;
  sample.mixture.samples.assign(len, 0.0);

  for (const ManifestSource& src : entry.sources) {
    const Waveform& raw = loader->Get(src.path, entry.sample_rate);
    if (raw.samples.size() < len)
      throw ContractViolation("manifest source shorter than sample: " +
                              src.path);
    Waveform s;
    s.sample_rate = entry.sample_rate;
    s.samples.resize(len);
    for (size_t i = 0; i < len; ++i)
      s.samples[i] = raw.samples[i] * src.gain;
    for (size_t i = 0; i < len; ++i) sample.mixture.samples[i] += s.samples[i];
    sample.sources.push_back(std::move(s));
  }

  if (entry.has_noise) {
    const Waveform& raw = loader->Get(entry.noise_path, entry.sample_rate);
    Waveform adapted = AdaptBackgroundLength(raw, len, entry.noise_offset);
    for (size_t i = 0; i < len; ++i) adapted.samples[i] *= entry.noise_gain;
    for (size_t i = 0; i < len; ++i)
      sample.mixture.samples[i] += adapted.samples[i];
    sample.noise = std::move(adapted);
  }
  return sample;
}

}  // namespace

std::string ManifestEntry::ToJson() const {
  ordered_json j;
  j["output_id"] = output_id;
  j["tag"] = TaskTagName(tag);
  ordered_json srcs = ordered_json::array();
  for (const ManifestSource& s : sources) {
    ordered_json js;
    js["path"] = s.path;
    js["speaker_id"] = s.speaker_id;
    js["gain"] = s.gain;
    js["snr_db"] = s.snr_db;
    srcs.push_back(std::move(js));
  }
  j["sources"] = std::move(srcs);
  j["has_noise"] = has_noise;
  if (has_noise) {
    j["noise_path"] = noise_path;
    j["noise_offset"] = noise_offset;
    j["noise_gain"] = noise_gain;
    j["noise_snr_db"] = noise_snr_db;
  }
  j["seed"] = seed;
  j["sample_rate"] = sample_rate;
  j["num_samples"] = num_samples;
  return j.dump();
}

ManifestEntry ManifestEntry::FromJson(const std::string& line) {
  ordered_json j = ordered_json::parse(line);
  ManifestEntry e;
  e.output_id = j.at("output_id").get<std::string>();
  e.tag = ParseTaskTag(j.at("tag").get<std::string>());
  for (const auto& js : j.at("sources")) {
    ManifestSource s;
    s.path = js.at("path").get<std::string>();
    s.speaker_id = js.at("speaker_id").get<std::string>();
    s.gain = js.at("gain").get<double>();
    s.snr_db = js.at("snr_db").get<double>();
    e.sources.push_back(std::move(s));
  }
  e.has_noise = j.at("has_noise").get<bool>();
  if (e.has_noise) {
    e.noise_path = j.at("noise_path").get<std::string>();
    e.noise_offset = j.at("noise_offset").get<uint64_t>();
    e.noise_gain = j.at("noise_gain").get<double>();
    e.noise_snr_db = j.at("noise_snr_db").get<double>();
  }
  e.seed = j.at("seed").get<uint64_t>();
  e.sample_rate = j.at("sample_rate").get<int>();
  e.num_samples = j.at("num_samples").get<uint64_t>();
  return e;
}

std::vector<PoolFile> ScanPool(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw IoError("pool directory not found: " + dir.string());
  std::vector<PoolFile> pool;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() != ".wav") continue;
    PoolFile f;
    f.path = std::filesystem::absolute(entry.path()).string();
    const std::string stem = entry.path().stem().string();
    const auto us = stem.find('_');
    f.speaker_id = us == std::string::npos ? stem : stem.substr(0, us);
    pool.push_back(std::move(f));
  }
  std::sort(pool.begin(), pool.end(),
            [](const PoolFile& a, const PoolFile& b) { return a.path < b.path; });
  return pool;
}

std::pair<MixtureSample, ManifestEntry> SynthesizeSample(
    const std::vector<PoolFile>& speech_pool,
    const std::vector<PoolFile>& noise_pool, const TaskConfig& config,
    uint64_t seed) {
  config.Validate();
  if (config.with_noise && noise_pool.empty())
    throw ContractViolation("synthesize: noise pool empty for noisy config");
  {
    std::set<std::string> speakers;
    for (const PoolFile& f : speech_pool) speakers.insert(f.speaker_id);
    if (static_cast<int>(speakers.size()) < config.num_speakers)
      throw ContractViolation("synthesize: not enough distinct speakers");
  }

  Rng rng(seed);
  PoolLoader loader;

  // Draw source files without replacement, distinct speakers.
  std::vector<size_t> chosen;
  std::set<std::string> used_speakers;
  for (int k = 0; k < config.num_speakers; ++k) {
    std::vector<size_t> eligible;
    for (size_t i = 0; i < speech_pool.size(); ++i) {
      if (used_speakers.count(speech_pool[i].speaker_id)) continue;
      if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
      eligible.push_back(i);
    }
    if (eligible.empty())
      throw ContractViolation("synthesize: speech pool exhausted");
    const size_t pick = eligible[static_cast<size_t>(
        rng.UniformInt(0, static_cast<int64_t>(eligible.size()) - 1))];
    chosen.push_back(pick);
    used_speakers.insert(speech_pool[pick].speaker_id);
  }

  // Common length: shortest source after resampling.
  size_t len = SIZE_MAX;
  for (size_t idx : chosen) {
    const Waveform& w = loader.Get(speech_pool[idx].path, kCorpusSampleRate);
    len = std::min(len, w.samples.size());
  }
  if (len == 0 || len == SIZE_MAX)
    throw ContractViolation("synthesize: empty source file");

  ManifestEntry entry;
  entry.tag = config.tag;
  entry.seed = seed;
  entry.sample_rate = kCorpusSampleRate;
  entry.num_samples = len;

  // Gains from drawn pairwise SNRs relative to the first source.
  std::vector<double> powers;
  for (size_t idx : chosen) {
    const Waveform& w = loader.Get(speech_pool[idx].path, kCorpusSampleRate);
    powers.push_back(
        MeanSquarePower(std::span(w.samples.data(), len)));
  }
  if (powers[0] <= 0.0)
    throw DegenerateSignal("synthesize: zero-energy first source");

  for (size_t k = 0; k < chosen.size(); ++k) {
    ManifestSource src;
    src.path = speech_pool[chosen[k]].path;
    src.speaker_id = speech_pool[chosen[k]].speaker_id;
    if (k == 0) {
      src.gain = 1.0;
      src.snr_db = 0.0;
    } else {
      if (powers[k] <= 0.0)
        throw DegenerateSignal("synthesize: zero-energy source");
      src.snr_db = rng.Uniform(config.speech_snr_lo_db, config.speech_snr_hi_db);
      src.gain = std::sqrt(powers[0] /
                           (powers[k] * std::pow(10.0, src.snr_db / 10.0)));
    }
    entry.sources.push_back(std::move(src));
  }

  if (config.with_noise) {
    const size_t pick = static_cast<size_t>(
        rng.UniformInt(0, static_cast<int64_t>(noise_pool.size()) - 1));
    entry.has_noise = true;
    entry.noise_path = noise_pool[pick].path;
    entry.noise_snr_db =
        rng.Uniform(config.noise_snr_lo_db, config.noise_snr_hi_db);

    const Waveform& raw = loader.Get(entry.noise_path, kCorpusSampleRate);
    entry.noise_offset =
        raw.samples.size() > len
            ? static_cast<uint64_t>(rng.UniformInt(
                  0, static_cast<int64_t>(raw.samples.size() - len)))
            : 0;

    // Summed speech at current gains, to reference the noise SNR against.
    std::vector<double> speech_sum(len, 0.0);
    for (size_t k = 0; k < chosen.size(); ++k) {
      const Waveform& w = loader.Get(entry.sources[k].path, kCorpusSampleRate);
      for (size_t i = 0; i < len; ++i)
        speech_sum[i] += w.samples[i] * entry.sources[k].gain;
    }
    const Waveform adapted =
        AdaptBackgroundLength(raw, len, entry.noise_offset);
    const double p_speech = MeanSquarePower(speech_sum);
    const double p_noise = MeanSquarePower(adapted.samples);
    if (p_noise <= 0.0)
      throw DegenerateSignal("synthesize: zero-energy noise");
    entry.noise_gain = std::sqrt(
        p_speech / (p_noise * std::pow(10.0, entry.noise_snr_db / 10.0)));
  }

  // Fold anti-clipping normalization into the gains, then do the final
  // assembly through the same path replay uses.
  {
    MixtureSample probe = BuildSample(entry, &loader);
    const double peak = PeakAbs(probe.mixture.samples);
    if (peak > kPeakLimit) {
      const double norm = kPeakLimit / peak;
      for (ManifestSource& s : entry.sources) s.gain *= norm;
      if (entry.has_noise) entry.noise_gain *= norm;
    }
  }
  MixtureSample sample = BuildSample(entry, &loader);
  return {std::move(sample), std::move(entry)};
}

std::filesystem::path GenerateCorpus(
    const std::vector<PoolFile>& speech_pool,
    const std::vector<PoolFile>& noise_pool,
    const std::vector<std::pair<TaskConfig, int>>& configs,
    const std::filesystem::path& out_dir, uint64_t master_seed) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path manifest_path = out_dir / "manifest.jsonl";
  std::ofstream manifest(manifest_path, std::ios::trunc);
  if (!manifest) throw IoError("cannot write " + manifest_path.string());

  for (const auto& [config, count] : configs) {
    if (count < 0) throw ContractViolation("generate_corpus: negative count");
    for (int i = 0; i < count; ++i) {
      char idx[16];
      std::snprintf(idx, sizeof(idx), "%06d", i);
      const std::string output_id =
          std::string(TaskTagName(config.tag)) + "_" + idx;
      const uint64_t seed = Rng::DeriveSeed(master_seed, output_id);
      auto [sample, entry] = SynthesizeSample(speech_pool, noise_pool, config, seed);
      entry.output_id = output_id;

      WriteWav(out_dir / entry.MixPath(), sample.mixture);
      for (size_t k = 0; k < sample.sources.size(); ++k)
        WriteWav(out_dir / entry.SourcePath(k), sample.sources[k]);
      if (sample.noise) WriteWav(out_dir / entry.NoisePath(), *sample.noise);

      manifest << entry.ToJson() << "\n";
    }
  }
  manifest.flush();
  if (!manifest) throw IoError("manifest write failed");
  return manifest_path;
}

std::vector<ManifestEntry> ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  std::vector<ManifestEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    entries.push_back(ManifestEntry::FromJson(line));
  }
  return entries;
}

MixtureSample RebuildFromManifest(const ManifestEntry& entry) {
  PoolLoader loader;
  return BuildSample(entry, &loader);
}

void RegenerateFromManifest(const std::filesystem::path& manifest_path,
                            const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  PoolLoader loader;
  for (const ManifestEntry& entry : ReadManifest(manifest_path)) {
    MixtureSample sample = BuildSample(entry, &loader);
    WriteWav(out_dir / entry.MixPath(), sample.mixture);
    for (size_t k = 0; k < sample.sources.size(); ++k)
      WriteWav(out_dir / entry.SourcePath(k), sample.sources[k]);
    if (sample.noise) WriteWav(out_dir / entry.NoisePath(), *sample.noise);
  }
}

std::filesystem::path DeriveCleanCorpus(
    const std::filesystem::path& noisy_manifest,
    const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path manifest_path = out_dir / "manifest.jsonl";
  std::ofstream manifest(manifest_path, std::ios::trunc);
  if (!manifest) throw IoError("cannot write " + manifest_path.string());

  PoolLoader loader;
  for (ManifestEntry entry : ReadManifest(noisy_manifest)) {
    switch (entry.tag) {
      case TaskTag::k2spN: entry.tag = TaskTag::k2sp; break;
      case TaskTag::k3spN: entry.tag = TaskTag::k3sp; break;
      default:
        throw ContractViolation(
            "derive-clean: only 2sp+n/3sp+n entries have clean twins");
    }
    entry.has_noise = false;
    entry.noise_path.clear();
    entry.noise_offset = 0;
    entry.noise_gain = 0.0;
    entry.noise_snr_db = 0.0;

    MixtureSample sample = BuildSample(entry, &loader);
    WriteWav(out_dir / entry.MixPath(), sample.mixture);
    for (size_t k = 0; k < sample.sources.size(); ++k)
      WriteWav(out_dir / entry.SourcePath(k), sample.sources[k]);
    manifest << entry.ToJson() << "\n";
  }
  manifest.flush();
  return manifest_path;
}

}  // namespace sepkit
