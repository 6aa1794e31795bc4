// sepkit/runner.cc

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

#include "sepkit/runner.h"

#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <vector>

#include "sepkit/checkpoint.h"
#include "sepkit/common.h"
#include "sepkit/evaluate.h"
#include "sepkit/inference.h"
#include "sepkit/mixture.h"
#include "sepkit/report_render.h"
#include "sepkit/rng.h"
#include "sepkit/toy_corpus.h"
#include "sepkit/trainer.h"
#include "sepkit/wav_io.h"

namespace sepkit {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Line-buffered ostream adapter over a ProgressFn.
class ProgressBuf : public std::streambuf {
 public:
  explicit ProgressBuf(ProgressFn fn) : fn_(std::move(fn)) {}

 protected:
  int overflow(int ch) override {
    if (ch == traits_type::eof()) return ch;
    if (ch == '\n') {
      if (fn_) fn_(line_);
      line_.clear();
    } else {
      line_ += static_cast<char>(ch);
    }
    return ch;
  }

 private:
  ProgressFn fn_;
  std::string line_;
};

void Emit(const ProgressFn& progress, const std::string& line) {
  if (progress) progress(line);
}

fs::path ManifestPathOf(const std::string& dir_or_file) {
  fs::path p(dir_or_file);
  if (fs::is_directory(p)) p /= "manifest.jsonl";
  if (!fs::exists(p)) throw IoError("manifest not found: " + p.string());
  return p;
}

SeparatorConfig SeparatorConfigFromPartial(const json& j) {
  SeparatorConfig c;  // desk-scale defaults
  if (j.contains("encoder_basis_count"))
    c.encoder_basis_count = j.at("encoder_basis_count").get<int>();
  if (j.contains("encoder_window"))
    c.encoder_window = j.at("encoder_window").get<int>();
  if (j.contains("encoder_stride"))
    c.encoder_stride = j.at("encoder_stride").get<int>();
  if (j.contains("block_channels"))
    c.block_channels = j.at("block_channels").get<int>();
  if (j.contains("conv_kernel")) c.conv_kernel = j.at("conv_kernel").get<int>();
  if (j.contains("blocks_per_repeat"))
    c.blocks_per_repeat = j.at("blocks_per_repeat").get<int>();
  if (j.contains("repeats")) c.repeats = j.at("repeats").get<int>();
  if (j.contains("num_output_heads"))
    c.num_output_heads = j.at("num_output_heads").get<int>();
  if (j.contains("mask_nonlinearity"))
    c.mask_nonlinearity = j.at("mask_nonlinearity").get<std::string>();
  return c;
}

StopRule ParseStopSpec(const std::string& spec, int max_iterations) {
  StopRule stop;
  stop.max_iterations = max_iterations;
  if (spec == "max") return stop;
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg =
      colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "known") {
    if (arg.empty())
      throw ContractViolation("stop spec 'known' needs a count, e.g. known:2");
    stop.known_count = std::stoi(arg);
  } else if (kind == "residual") {
    stop.residual_threshold_db =
        arg.empty() ? kDefaultResidualStopDb : std::stod(arg);
  } else {
    throw ContractViolation("unknown stop spec: " + spec);
  }
  return stop;
}

std::vector<std::pair<TaskConfig, int>> ParseSynthConfigs(const json& j) {
  std::vector<std::pair<TaskConfig, int>> configs;
  for (const auto& item : j) {
    TaskConfig tc = TaskConfig::FromTag(ParseTaskTag(item.at("tag")));
    if (item.contains("speech_snr")) {
      tc.speech_snr_lo_db = item.at("speech_snr").at(0).get<double>();
      tc.speech_snr_hi_db = item.at("speech_snr").at(1).get<double>();
    }
    if (item.contains("noise_snr")) {
      tc.noise_snr_lo_db = item.at("noise_snr").at(0).get<double>();
      tc.noise_snr_hi_db = item.at("noise_snr").at(1).get<double>();
    }
    configs.emplace_back(tc, item.at("count").get<int>());
  }
  return configs;
}

}  // namespace

void RunSynth(const json& config, const ProgressFn& progress) {
  const fs::path out_dir(config.at("out_dir").get<std::string>());
  const uint64_t seed = config.value("seed", 0ull);

  if (config.contains("from_manifest")) {
    const fs::path manifest(config.at("from_manifest").get<std::string>());
    RegenerateFromManifest(manifest, out_dir);
    Emit(progress, "regenerated corpus into " + out_dir.string());
    return;
  }
  if (config.contains("strip_noise_from")) {
    const fs::path manifest(config.at("strip_noise_from").get<std::string>());
    const fs::path out = DeriveCleanCorpus(manifest, out_dir);
    Emit(progress, "derived clean twins into " + out.string());
    return;
  }

  std::vector<PoolFile> speech_pool, noise_pool;
  if (config.contains("toy")) {
    const json& toy = config.at("toy");
    const ToyPools pools =
        MakeToyCorpus(out_dir / "pools", toy.value("speakers", 3),
                      toy.value("utterances", 5), seed);
    speech_pool = pools.speech;
    noise_pool = pools.noise;
    Emit(progress, "toy pools: " + std::to_string(speech_pool.size()) +
                       " speech, " + std::to_string(noise_pool.size()) +
                       " noise files");
  }
  if (config.contains("speech_dir"))
    speech_pool = ScanPool(config.at("speech_dir").get<std::string>());
  if (config.contains("noise_dir"))
    noise_pool = ScanPool(config.at("noise_dir").get<std::string>());

  if (!config.contains("configs") || config.at("configs").empty()) {
    if (!config.contains("toy"))
      throw ContractViolation("synth: nothing to do (no configs, no --toy)");
    return;  // pools only
  }
  if (speech_pool.empty())
    throw ContractViolation("synth: no speech pool (use --speech-dir or --toy)");

  const auto configs = ParseSynthConfigs(config.at("configs"));
  const fs::path manifest =
      GenerateCorpus(speech_pool, noise_pool, configs, out_dir, seed);
  size_t total = 0;
  for (const auto& [tc, count] : configs) total += static_cast<size_t>(count);
  Emit(progress, "wrote " + std::to_string(total) + " samples; manifest at " +
                     manifest.string());
}

void RunTrain(const json& config, const ProgressFn& progress) {
  const Strategy strategy =
      ParseStrategy(config.value("strategy", std::string("saddel")));
  std::vector<TaskTag> tasks;
  if (config.contains("tasks")) {
    for (const auto& t : config.at("tasks"))
      tasks.push_back(ParseTaskTag(t.get<std::string>()));
  } else {
    tasks = DefaultTasksFor(strategy);
  }

  TrainConfig cfg;
  cfg.tasks = tasks;
  cfg.batch_size = config.value("batch_size", 4);
  cfg.steps = config.value("steps", static_cast<int64_t>(2000));
  cfg.learning_rate = config.value("lr", 1e-3);
  cfg.weight_decay = config.value("weight_decay", 0.0);
  cfg.grad_clip_norm = config.value("grad_clip_norm", 5.0);
  cfg.lr_patience = config.value("lr_patience", 3);
  cfg.validate_every = config.value("validate_every", static_cast<int64_t>(500));
  cfg.checkpoint_every =
      config.value("checkpoint_every", static_cast<int64_t>(0));
  cfg.segment_seconds = config.value("segment_seconds", 4.0);
  cfg.val_items = config.value("val_items", 8);
  cfg.seed = config.value("seed", 0ull);
  cfg.resume_from = config.value("resume_from", std::string());

  // Corpora: one manifest covering all tasks; entries grouped by tag. Without
  // a separate validation corpus, every 10th entry is held out.
  const fs::path manifest =
      ManifestPathOf(config.at("manifest_dir").get<std::string>());
  const fs::path corpus_dir = manifest.parent_path();
  std::map<TaskTag, std::vector<ManifestEntry>> train_entries, val_entries;
  {
    size_t idx = 0;
    const bool split = !config.contains("val_manifest_dir");
    for (ManifestEntry& e : ReadManifest(manifest)) {
      const bool hold_out = split && (idx % 10 == 9);
      (hold_out ? val_entries : train_entries)[e.tag].push_back(std::move(e));
      ++idx;
    }
  }
  fs::path val_dir = corpus_dir;
  if (config.contains("val_manifest_dir")) {
    const fs::path val_manifest =
        ManifestPathOf(config.at("val_manifest_dir").get<std::string>());
    val_dir = val_manifest.parent_path();
    for (ManifestEntry& e : ReadManifest(val_manifest))
      val_entries[e.tag].push_back(std::move(e));
  }

  TaskCorpora corpora;
  for (TaskTag tag : tasks) {
    TaskCorpus tc;
    tc.train = std::make_shared<PremixedCorpus>(
        corpus_dir, std::move(train_entries[tag]));
    if (!val_entries[tag].empty())
      tc.val = std::make_shared<PremixedCorpus>(val_dir,
                                                std::move(val_entries[tag]));
    corpora[tag] = std::move(tc);
  }

  const fs::path out_dir(config.at("out_dir").get<std::string>());
  SeparatorConfig model_cfg = SeparatorConfigFromPartial(
      config.contains("model") ? config.at("model") : json::object());

  ProgressBuf buf(progress);
  std::ostream console(&buf);

  if (strategy == Strategy::kCascade) {
    Separator sd(model_cfg, Rng::DeriveSeed(cfg.seed, "model-init/sd"));
    Separator ss(model_cfg, Rng::DeriveSeed(cfg.seed, "model-init/ss"));
    const CascadeResult res =
        TrainCascade(&sd, &ss, corpora, cfg, out_dir, &console,
                     config.value("cascade_bypass_sd", false));
    Emit(progress,
         "cascade done; parameters: " +
             std::to_string(res.result.total_parameters) + " (sd+ss); " +
             "checkpoints: " + res.sd_checkpoint.string() + ", " +
             res.ss_checkpoint.string());
    return;
  }

  if (strategy == Strategy::kA2Pit)
    model_cfg.num_output_heads = config.value("a2pit_heads", 3);
  Separator model(model_cfg, Rng::DeriveSeed(cfg.seed, "model-init"));

  TrainResult res;
  if (strategy == Strategy::kA2Pit) {
    res = TrainA2Pit(&model, corpora, cfg, out_dir, &console);
  } else {
    res = TrainSaddel(&model, corpora, cfg, out_dir, &console, strategy);
  }
  Emit(progress, std::string("training done; parameters: ") +
                     std::to_string(res.total_parameters) + "; checkpoint: " +
                     res.final_checkpoint.string());
}

void RunSeparate(const json& config, const ProgressFn& progress) {
  const Checkpoint ckpt =
      Checkpoint::Load(config.at("checkpoint").get<std::string>());
  const Separator model = RestoreSeparator(ckpt);
  const Waveform mixture = ReadWav(config.at("input_wav").get<std::string>());
  const StopRule stop =
      ParseStopSpec(config.value("stop", std::string("residual")),
                    config.value("max_iterations", 5));
  const RecursionResult result = SeparateRecursive(
      [&model](const Waveform& w) { return model.Forward(w); }, mixture, stop);
  const fs::path out_dir(config.at("out_dir").get<std::string>());
  WriteRecursionResult(result, out_dir);
  Emit(progress, "extracted " + std::to_string(result.extracted_sources.size()) +
                     " sources (" + StopReasonName(result.stop_reason) +
                     ") into " + out_dir.string());
}

void RunEval(const json& config, const ProgressFn& progress) {
  if (config.contains("render_table")) {
    const json& rt = config.at("render_table");
    std::vector<std::pair<std::string, EvalReport>> rows;
    size_t i = 0;
    for (const auto& path : rt.at("reports")) {
      std::ifstream in(path.get<std::string>());
      if (!in) throw IoError("cannot open report: " + path.get<std::string>());
      std::stringstream ss;
      ss << in.rdbuf();
      EvalReport report = ReportFromJson(ss.str());
      std::string label;
      if (rt.contains("labels") && i < rt.at("labels").size())
        label = rt.at("labels").at(i).get<std::string>();
      else if (report.metadata.contains("strategy"))
        label = report.metadata["strategy"].get<std::string>();
      else
        label = fs::path(path.get<std::string>()).stem().string();
      rows.emplace_back(label, std::move(report));
      ++i;
    }
    const fs::path out_file(rt.at("out_file").get<std::string>());
    if (out_file.has_parent_path())
      fs::create_directories(out_file.parent_path());
    std::ofstream f(out_file, std::ios::trunc);
    f << RenderTableText(rows);
    if (!f) throw IoError("cannot write " + out_file.string());
    Emit(progress, "table written to " + out_file.string());
    return;
  }

  const std::string ckpt_path = config.at("checkpoint").get<std::string>();
  const Checkpoint ckpt = Checkpoint::Load(ckpt_path);
  const Separator model = RestoreSeparator(ckpt);
  const SeparatorFn fn = [&model](const Waveform& w) {
    return model.Forward(w);
  };

  std::unique_ptr<Separator> front;
  if (config.contains("sd_front_checkpoint"))
    front = std::make_unique<Separator>(RestoreSeparator(
        Checkpoint::Load(config.at("sd_front_checkpoint").get<std::string>())));

  EvalReport report;
  report.metadata["strategy"] =
      config.contains("strategy_label")
          ? config.at("strategy_label").get<std::string>()
          : (ckpt.metadata.contains("strategy")
                 ? ckpt.metadata.at("strategy").get<std::string>()
                 : "model");
  report.metadata["checkpoint"] = fs::path(ckpt_path).filename().string();
  report.metadata["scoring"] =
      "per-utterance best-permutation matching; SI-SNRi averaged per source, "
      "then per utterance, then per task";

  if (config.contains("manifest")) {
    EvalOptions options;
    const std::string stop_spec = config.value("stop", std::string("known"));
    options.max_iterations = config.value("max_iterations", 5);
    if (stop_spec == "known") {
      options.use_known_count = true;
    } else {
      const StopRule rule =
          ParseStopSpec(stop_spec, options.max_iterations);
      if (!rule.residual_threshold_db)
        throw ContractViolation("eval stop must be 'known' or 'residual[:db]'");
      options.use_known_count = false;
      options.residual_threshold_db = *rule.residual_threshold_db;
    }
    report.metadata["stop"] = stop_spec;
    if (front) {
      const Separator* f = front.get();
      options.preprocess = [f](const Waveform& w) {
        return f->Forward(w).extracted;
      };
      report.metadata["sd_front"] = true;
    }
    const fs::path manifest =
        ManifestPathOf(config.at("manifest").get<std::string>());
    const EvalReport scored = Evaluate(fn, manifest, options);
    report.records = scored.records;
    report.per_task = scored.per_task;
    for (const auto& [tag, stats] : report.per_task) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%s: mean SI-SNRi %.2f dB (n=%d)",
                    TaskTagName(tag), stats.mean, stats.count);
      Emit(progress, buf);
    }
  }

  if (config.contains("degradation")) {
    const json& d = config.at("degradation");
    report.degradation = DegradationAnalysis(
        fn, ManifestPathOf(d.at("clean_manifest").get<std::string>()),
        ManifestPathOf(d.at("noisy_manifest").get<std::string>()));
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "degradation: ch1 mean %.4f dB, ch2 mean %.4f dB (n=%d)",
                  report.degradation->ch1_mean, report.degradation->ch2_mean,
                  report.degradation->count);
    Emit(progress, buf);
  }

  std::vector<std::string> formats = {"json", "csv", "table", "plot"};
  if (config.contains("formats"))
    formats = config.at("formats").get<std::vector<std::string>>();
  const fs::path out_dir(config.at("out_dir").get<std::string>());
  RenderReport(report, out_dir, formats);
  Emit(progress, "report written under " + out_dir.string());
}

}  // namespace sepkit
