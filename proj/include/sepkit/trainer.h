// sepkit/trainer.h

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

#ifndef SEPKIT_TRAINER_H_
#define SEPKIT_TRAINER_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sepkit/mixture.h"
#include "sepkit/separator.h"
#include "sepkit/task_config.h"

namespace sepkit {

// Deterministic sample provider; Get(i) always returns the same content.
class SampleSource {
 public:
  virtual ~SampleSource() = default;
  virtual size_t Size() const = 0;
  virtual MixtureSample Get(size_t index) const = 0;
};

// Fixed pre-mixed corpus read from the WAVs a manifest points at.
class PremixedCorpus : public SampleSource {
 public:
  PremixedCorpus(std::filesystem::path corpus_dir,
                 std::vector<ManifestEntry> entries);
  size_t Size() const override { return entries_.size(); }
  MixtureSample Get(size_t index) const override;
  const ManifestEntry& entry(size_t index) const { return entries_[index]; }

 private:
  std::filesystem::path dir_;
  std::vector<ManifestEntry> entries_;
};

// Mixes a fresh sample per index from the pools; randomness is keyed by
// (seed, tag, index) only, so parallel or repeated access never changes
// content.
class OnTheFlyCorpus : public SampleSource {
 public:
  OnTheFlyCorpus(std::vector<PoolFile> speech_pool,
                 std::vector<PoolFile> noise_pool, TaskConfig config,
                 size_t count, uint64_t seed);
  size_t Size() const override { return count_; }
  MixtureSample Get(size_t index) const override;

 private:
  std::vector<PoolFile> speech_pool_, noise_pool_;
  TaskConfig config_;
  size_t count_;
  uint64_t seed_;
};

struct TaskCorpus {
  std::shared_ptr<const SampleSource> train;
  std::shared_ptr<const SampleSource> val;  // may be null: validation skipped
};

using TaskCorpora = std::map<TaskTag, TaskCorpus>;

enum class Strategy { kSaddel, kBaselineSs, kBaselineSd, kA2Pit, kCascade };
const char* StrategyName(Strategy s);
Strategy ParseStrategy(const std::string& name);
std::vector<TaskTag> DefaultTasksFor(Strategy s);

struct TrainConfig {
  std::vector<TaskTag> tasks;
  int batch_size = 4;
  int64_t steps = 2000;
  double learning_rate = 1e-3;
  double weight_decay = 0.0;     // optional constant L2 term
  double grad_clip_norm = 5.0;   // <= 0 disables
  int lr_patience = 3;           // halve LR after this many stalled validations
  int64_t validate_every = 500;
  int64_t checkpoint_every = 0;  // 0: only the final checkpoint
  double segment_seconds = 4.0;  // training crop length
  int val_items = 8;             // per task per validation pass
  uint64_t seed = 0;
  std::string resume_from;       // prior final/step checkpoint (main model)

  void Validate() const;
};

// One optimization step's log entry. wall_time_ms is console-only; the
// persisted line-delimited log carries only run-deterministic fields.
struct TrainLogRecord {
  int64_t step = 0;
  std::vector<std::pair<TaskTag, double>> task_loss;
  double mean_loss = 0.0;
  double grad_norm = 0.0;
  double learning_rate = 0.0;
  std::optional<double> val_loss;
  std::vector<std::pair<TaskTag, double>> val_si_snri;
  std::vector<std::pair<std::string, double>> val_metrics;
  double wall_time_ms = 0.0;

  std::string ToJson() const;  // deterministic fields only
};

struct TrainResult {
  std::vector<TrainLogRecord> log;
  std::filesystem::path final_checkpoint;  // primary model
  int64_t optimizer_steps = 0;
  size_t total_parameters = 0;
};

// Multitask one-and-rest training: per step, one batch per task, the
// unweighted mean of task losses backs a single parameter update. Also serves
// the single-task baselines via a restricted task list.
TrainResult TrainSaddel(Separator* model, const TaskCorpora& corpora,
                        const TrainConfig& cfg,
                        const std::filesystem::path& out_dir,
                        std::ostream* console = nullptr,
                        Strategy strategy = Strategy::kSaddel);

// Denoise-then-separate pipeline trained jointly: the separation stage
// consumes the denoiser's extracted channel, gradients flow through it into
// the denoiser, and the denoiser additionally regresses the clean speech sum.
// bypass_sd (ablation) feeds the separation stage directly.
struct CascadeResult {
  TrainResult result;
  std::filesystem::path sd_checkpoint;
  std::filesystem::path ss_checkpoint;
};
CascadeResult TrainCascade(Separator* sd_model, Separator* ss_model,
                           const TaskCorpora& corpora, const TrainConfig& cfg,
                           const std::filesystem::path& out_dir,
                           std::ostream* console = nullptr,
                           bool bypass_sd = false);

// Fixed-output-count training with auxiliary autoencoding targets for the
// redundant channels. Loop mechanics identical to TrainSaddel.
TrainResult TrainA2Pit(Separator* model, const TaskCorpora& corpora,
                       const TrainConfig& cfg,
                       const std::filesystem::path& out_dir,
                       std::ostream* console = nullptr);

// Deterministic training crop: offset drawn from rng when longer than
// segment_len, all components cropped identically.
MixtureSample CropSample(const MixtureSample& sample, size_t segment_len,
                         class Rng* rng);

}  // namespace sepkit

#endif  // SEPKIT_TRAINER_H_
