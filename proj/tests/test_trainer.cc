// tests/test_trainer.cc

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

#include "sepkit/checkpoint.h"
#include "sepkit/common.h"
#include "sepkit/toy_corpus.h"
#include "sepkit/trainer.h"
#include "testing_util.h"

using namespace sepkit;
using testing::MakeTempDir;
using testing::SlurpFile;

namespace {

struct TrainFixture {
  std::filesystem::path root;
  TaskCorpora corpora;

  TrainFixture() : root(MakeTempDir("trainer")) {
    const ToyPools pools = MakeToyCorpus(root / "toy", 3, 4, 7);
    const std::filesystem::path corpus_dir = root / "corpus";
    const auto manifest = GenerateCorpus(
        pools.speech, pools.noise,
        {{TaskConfig::FromTag(TaskTag::k1spN), 8},
         {TaskConfig::FromTag(TaskTag::k2sp), 8},
         {TaskConfig::FromTag(TaskTag::k2spN), 8},
         {TaskConfig::FromTag(TaskTag::k3spN), 8}},
        corpus_dir, 11);
    std::map<TaskTag, std::vector<ManifestEntry>> train_e, val_e;
    size_t idx = 0;
    for (ManifestEntry& e : ReadManifest(manifest)) {
      ((idx++ % 4 == 3) ? val_e : train_e)[e.tag].push_back(std::move(e));
    }
    for (auto& [tag, entries] : train_e) {
      TaskCorpus tc;
      tc.train = std::make_shared<PremixedCorpus>(corpus_dir, entries);
      tc.val = std::make_shared<PremixedCorpus>(corpus_dir, val_e[tag]);
      corpora[tag] = std::move(tc);
    }
  }
};

TrainFixture& Fixture() {
  static TrainFixture f;
  return f;
}

SeparatorConfig TinyModel() {
  SeparatorConfig c;
  c.encoder_basis_count = 16;
  c.encoder_window = 16;
  c.encoder_stride = 8;
  c.block_channels = 12;
  c.blocks_per_repeat = 2;
  c.repeats = 1;
  return c;
}

TrainConfig QuickConfig(std::vector<TaskTag> tasks, int64_t steps) {
  TrainConfig cfg;
  cfg.tasks = std::move(tasks);
  cfg.batch_size = 2;
  cfg.steps = steps;
  cfg.segment_seconds = 0.5;
  cfg.validate_every = 0;  // no validation unless a test enables it
  cfg.val_items = 2;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("training is reproducible step for step") {
  auto& f = Fixture();
  const TrainConfig cfg = QuickConfig({TaskTag::k1spN, TaskTag::k2sp}, 6);

  Separator m1(TinyModel(), 100);
  const TrainResult r1 =
      TrainSaddel(&m1, f.corpora, cfg, MakeTempDir("train_a"));
  Separator m2(TinyModel(), 100);
  const TrainResult r2 =
      TrainSaddel(&m2, f.corpora, cfg, MakeTempDir("train_b"));

  REQUIRE(r1.log.size() == r2.log.size());
  for (size_t i = 0; i < r1.log.size(); ++i)
    CHECK(r1.log[i].ToJson() == r2.log[i].ToJson());
  // Final checkpoints match byte for byte.
  CHECK(SlurpFile(r1.final_checkpoint) == SlurpFile(r2.final_checkpoint));
}

TEST_CASE("one optimizer update per step and consistent loss averaging") {
  auto& f = Fixture();
  const TrainConfig cfg =
      QuickConfig({TaskTag::k1spN, TaskTag::k2sp, TaskTag::k2spN}, 5);
  Separator model(TinyModel(), 101);
  const TrainResult r =
      TrainSaddel(&model, f.corpora, cfg, MakeTempDir("train_steps"));
  CHECK(r.optimizer_steps == cfg.steps);
  REQUIRE(r.log.size() == static_cast<size_t>(cfg.steps));
  for (const TrainLogRecord& rec : r.log) {
    double acc = 0.0;
    for (const auto& [tag, loss] : rec.task_loss) acc += loss;
    CHECK(std::abs(rec.mean_loss - acc / rec.task_loss.size()) < 1e-9);
    CHECK(rec.task_loss.size() == 3);
  }
}

TEST_CASE("baseline strategies reuse the same loop") {
  auto& f = Fixture();
  const TrainConfig cfg = QuickConfig({TaskTag::k2spN, TaskTag::k3spN}, 4);
  Separator m1(TinyModel(), 102);
  const TrainResult ss = TrainSaddel(&m1, f.corpora, cfg,
                                     MakeTempDir("train_blss"), nullptr,
                                     Strategy::kBaselineSs);
  Separator m2(TinyModel(), 102);
  const TrainResult plain =
      TrainSaddel(&m2, f.corpora, cfg, MakeTempDir("train_plain"));
  REQUIRE(ss.log.size() == plain.log.size());
  for (size_t i = 0; i < ss.log.size(); ++i)
    CHECK(ss.log[i].mean_loss == plain.log[i].mean_loss);
}

TEST_CASE("checkpoint resume reproduces uninterrupted training exactly") {
  auto& f = Fixture();
  TrainConfig cfg = QuickConfig({TaskTag::k2sp, TaskTag::k2spN}, 10);
  cfg.validate_every = 5;

  Separator full(TinyModel(), 103);
  const TrainResult straight =
      TrainSaddel(&full, f.corpora, cfg, MakeTempDir("resume_full"));

  const auto half_dir = MakeTempDir("resume_half");
  TrainConfig half_cfg = cfg;
  half_cfg.steps = 5;
  Separator part(TinyModel(), 103);
  const TrainResult first_half =
      TrainSaddel(&part, f.corpora, half_cfg, half_dir);

  TrainConfig resume_cfg = cfg;  // back to 10 total steps
  resume_cfg.resume_from = first_half.final_checkpoint.string();
  Separator resumed(TinyModel(), 999);  // init overwritten by the checkpoint
  const TrainResult second_half =
      TrainSaddel(&resumed, f.corpora, resume_cfg, MakeTempDir("resume_rest"));

  // Parameters identical to the uninterrupted run.
  auto pa = full.Params();
  auto pb = resumed.Params();
  REQUIRE(pa.size() == pb.size());
  for (size_t i = 0; i < pa.size(); ++i)
    for (size_t k = 0; k < pa[i].size; ++k)
      CHECK(pa[i].value[k] == pb[i].value[k]);

  // And the final checkpoints are byte-identical.
  CHECK(SlurpFile(straight.final_checkpoint) ==
        SlurpFile(second_half.final_checkpoint));
}

TEST_CASE("empty corpus is rejected") {
  auto& f = Fixture();
  TrainConfig cfg = QuickConfig({TaskTag::k3sp}, 2);  // not in the fixture
  Separator model(TinyModel(), 104);
  CHECK_THROWS_AS(
      TrainSaddel(&model, f.corpora, cfg, MakeTempDir("train_empty")),
      ContractViolation);
}

TEST_CASE("cascade doubles the parameter count and trains jointly") {
  auto& f = Fixture();
  TrainConfig cfg = QuickConfig({TaskTag::k2spN, TaskTag::k3spN}, 3);
  cfg.validate_every = 3;
  Separator sd(TinyModel(), 105);
  Separator ss(TinyModel(), 106);
  const size_t single = sd.NumParameters();
  const CascadeResult r =
      TrainCascade(&sd, &ss, f.corpora, cfg, MakeTempDir("cascade"));
  CHECK(r.result.total_parameters == 2 * single);
  CHECK(std::filesystem::exists(r.sd_checkpoint));
  CHECK(std::filesystem::exists(r.ss_checkpoint));
  for (const TrainLogRecord& rec : r.result.log)
    CHECK(std::isfinite(rec.mean_loss));
  // Validation happened and produced finite SI-SNRi numbers.
  bool saw_val = false;
  for (const TrainLogRecord& rec : r.result.log)
    if (rec.val_loss) {
      saw_val = true;
      for (const auto& [tag, v] : rec.val_si_snri) CHECK(std::isfinite(v));
    }
  CHECK(saw_val);
}

TEST_CASE("cascade with a bypassed front stage reduces to plain training") {
  // Clean-task comparison: with noisy tasks the two objectives differ by
  // design (the one-and-rest loss folds noise into the rest target, the
  // cascade separation stage targets clean sources only).
  auto& f = Fixture();
  const TrainConfig cfg = QuickConfig({TaskTag::k2sp}, 4);

  Separator sd(TinyModel(), 107);
  Separator ss(TinyModel(), 108);
  const CascadeResult bypassed =
      TrainCascade(&sd, &ss, f.corpora, cfg, MakeTempDir("cascade_bypass"),
                   nullptr, /*bypass_sd=*/true);

  Separator plain(TinyModel(), 108);  // same init as the ss stage
  const TrainResult direct =
      TrainSaddel(&plain, f.corpora, cfg, MakeTempDir("cascade_plain"));

  REQUIRE(bypassed.result.log.size() == direct.log.size());
  for (size_t i = 0; i < direct.log.size(); ++i)
    CHECK(bypassed.result.log[i].mean_loss == direct.log[i].mean_loss);
}

TEST_CASE("a2pit trains a multi-head model and logs the autoencoding metric") {
  auto& f = Fixture();
  TrainConfig cfg = QuickConfig({TaskTag::k1spN, TaskTag::k2spN}, 4);
  cfg.validate_every = 4;
  SeparatorConfig mc = TinyModel();
  mc.num_output_heads = 3;
  Separator model(mc, 109);
  const TrainResult r =
      TrainA2Pit(&model, f.corpora, cfg, MakeTempDir("a2pit"));
  CHECK(r.optimizer_steps == cfg.steps);
  bool saw_metric = false;
  for (const TrainLogRecord& rec : r.log)
    for (const auto& [name, v] : rec.val_metrics)
      if (name == "autoencode_si_snr") {
        saw_metric = true;
        CHECK(std::isfinite(v));
      }
  CHECK(saw_metric);
}

TEST_CASE("a2pit rejects tasks with more speakers than heads") {
  auto& f = Fixture();
  TrainConfig cfg = QuickConfig({TaskTag::k3spN}, 2);
  SeparatorConfig mc = TinyModel();
  mc.num_output_heads = 2;
  Separator model(mc, 110);
  CHECK_THROWS_AS(
      TrainA2Pit(&model, f.corpora, cfg, MakeTempDir("a2pit_bad")),
      ContractViolation);
}

TEST_CASE("crop sample keeps components aligned") {
  auto& f = Fixture();
  const MixtureSample sample = f.corpora.at(TaskTag::k2spN).train->Get(0);
  Rng rng(111);
  const MixtureSample cropped = CropSample(sample, 1000, &rng);
  REQUIRE(cropped.mixture.samples.size() == 1000);
  for (const Waveform& s : cropped.sources)
    CHECK(s.samples.size() == 1000);
  REQUIRE(cropped.noise.has_value());
  CHECK(cropped.noise->samples.size() == 1000);
  // Additivity survives cropping (within wav quantization, since the corpus
  // lives on disk as 16-bit PCM).
  for (size_t i = 0; i < 1000; ++i) {
    double sum = cropped.noise->samples[i];
    for (const Waveform& s : cropped.sources) sum += s.samples[i];
    CHECK(std::abs(cropped.mixture.samples[i] - sum) < 3.0 / 32768.0);
  }
}
