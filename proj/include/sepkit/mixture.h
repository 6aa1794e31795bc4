// sepkit/mixture.h

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

#ifndef SEPKIT_MIXTURE_H_
#define SEPKIT_MIXTURE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sepkit/task_config.h"
#include "sepkit/waveform.h"

namespace sepkit {

// All corpora are built at this rate; other inputs get resampled on ingest.
inline constexpr int kCorpusSampleRate = 8000;

// One mixture with its constituents. mixture == sum(sources) + noise holds
// elementwise by construction.
struct MixtureSample {
  Waveform mixture;
  std::vector<Waveform> sources;  // gains already applied
  std::optional<Waveform> noise;  // gain already applied
  TaskConfig config;
  uint64_t seed = 0;
};

struct ManifestSource {
  std::string path;       // input file the source came from
  std::string speaker_id;
  double gain = 1.0;      // final absolute gain (normalization folded in)
  double snr_db = 0.0;    // drawn SNR vs. the first source (0 for source 1)
};

// Everything needed to rebuild one sample bit-identically without re-running
// any power measurement: explicit gains, noise offset, rates and lengths.
struct ManifestEntry {
  std::string output_id;
  TaskTag tag = TaskTag::k2sp;
  std::vector<ManifestSource> sources;
  bool has_noise = false;
  std::string noise_path;
  uint64_t noise_offset = 0;
  double noise_gain = 0.0;
  double noise_snr_db = 0.0;  // drawn SNR of summed speech vs. noise
  uint64_t seed = 0;
  int sample_rate = kCorpusSampleRate;
  uint64_t num_samples = 0;

  std::string MixPath() const { return output_id + "_mix.wav"; }
  std::string SourcePath(size_t i) const {
    return output_id + "_s" + std::to_string(i + 1) + ".wav";
  }
  std::string NoisePath() const { return output_id + "_noise.wav"; }

  std::string ToJson() const;
  static ManifestEntry FromJson(const std::string& line);
};

// A file in a speech or noise pool. speaker_id comes from the filename stem
// up to the first '_' (the toy corpus follows this convention); files without
// a '_' use the full stem, which makes every file its own speaker.
struct PoolFile {
  std::string path;
  std::string speaker_id;
};

// Scans a directory for .wav files, sorted by filename for determinism.
std::vector<PoolFile> ScanPool(const std::filesystem::path& dir);

// Draws speakers without replacement (distinct speaker ids), pairwise speech
// SNRs uniform in the config's speech range relative to the first source, and
// a noise SNR (vs. the summed speech) from the noise range. All components
// are resampled to kCorpusSampleRate and truncated to the shortest. The whole
// sample is scaled down if the mixture would clip. Same seed, same bytes.
std::pair<MixtureSample, ManifestEntry> SynthesizeSample(
    const std::vector<PoolFile>& speech_pool,
    const std::vector<PoolFile>& noise_pool, const TaskConfig& config,
    uint64_t seed);

// Writes WAVs (mixture, each source, noise when present) for `count` samples
// of each config into out_dir plus a manifest.jsonl describing every sample.
// Returns the manifest path.
std::filesystem::path GenerateCorpus(
    const std::vector<PoolFile>& speech_pool,
    const std::vector<PoolFile>& noise_pool,
    const std::vector<std::pair<TaskConfig, int>>& configs,
    const std::filesystem::path& out_dir, uint64_t master_seed);

std::vector<ManifestEntry> ReadManifest(const std::filesystem::path& path);

// Rebuilds a sample from its manifest entry (explicit gains; no RNG).
MixtureSample RebuildFromManifest(const ManifestEntry& entry);

// Re-emits every WAV of a manifest into out_dir. Output is bit-identical to
// the original generation.
void RegenerateFromManifest(const std::filesystem::path& manifest_path,
                            const std::filesystem::path& out_dir);

// Writes noise-free twins of a noisy corpus (same ids, sources and gains,
// noise dropped) for channel-degradation analysis. Returns the new manifest.
std::filesystem::path DeriveCleanCorpus(
    const std::filesystem::path& noisy_manifest,
    const std::filesystem::path& out_dir);

}  // namespace sepkit

#endif  // SEPKIT_MIXTURE_H_
