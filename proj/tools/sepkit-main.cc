// tools/sepkit-main.cc

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

// Command-line front end. All functionality lives behind the C API in
// libsepkit; this binary only parses flags, builds the JSON configs, and
// relays progress lines.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sepkit/capi.h"

namespace {

using nlohmann::json;

void PrintProgress(const char* line, void* /*user_data*/) {
  std::fprintf(stderr, "%s\n", line);
}

int Run(sk_status (*fn)(const char*, sk_progress_fn, void*),
        const json& config) {
  const std::string text = config.dump();
  const sk_status status = fn(text.c_str(), PrintProgress, nullptr);
  if (status != SK_OK) {
    std::fprintf(stderr, "error (%s): %s\n", sk_status_name(status),
                 sk_last_error());
    return 1;
  }
  return 0;
}

// "2sp+n:1000,1sp+n:500" -> [{tag, count}, ...]
json ParseConfigSpec(const std::string& spec) {
  json configs = json::array();
  std::string item;
  std::stringstream ss(spec);
  while (std::getline(ss, item, ',')) {
    const auto colon = item.rfind(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("--config", "expected TAG:COUNT pairs");
    json c;
    c["tag"] = item.substr(0, colon);
    c["count"] = std::stoi(item.substr(colon + 1));
    configs.push_back(std::move(c));
  }
  return configs;
}

std::vector<std::string> SplitCommas(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sepkit: joint speech separation and denoising toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sk_version()));

  // --- synth ---------------------------------------------------------------
  auto* synth = app.add_subcommand(
      "synth", "Generate mixture corpora (or the built-in toy corpus)");
  std::string sy_speech_dir, sy_noise_dir, sy_config_spec, sy_out;
  std::string sy_from_manifest, sy_strip_noise_from;
  uint64_t sy_seed = 0;
  bool sy_toy = false;
  int sy_toy_speakers = 3, sy_toy_utterances = 5;
  synth->add_option("--speech-dir", sy_speech_dir, "Directory of speech WAVs");
  synth->add_option("--noise-dir", sy_noise_dir, "Directory of noise WAVs");
  synth->add_option("--config", sy_config_spec,
                    "Comma list of TAG:COUNT, e.g. 2sp+n:1000,1sp+n:500");
  synth->add_option("--seed", sy_seed, "Master seed");
  synth->add_option("--out", sy_out, "Output corpus directory")->required();
  synth->add_flag("--toy", sy_toy, "Generate synthetic toy pools first");
  synth->add_option("--toy-speakers", sy_toy_speakers, "Toy speaker count");
  synth->add_option("--toy-utterances", sy_toy_utterances,
                    "Toy utterances per speaker");
  synth->add_option("--from-manifest", sy_from_manifest,
                    "Regenerate a corpus bit-identically from its manifest");
  synth->add_option("--strip-noise-from", sy_strip_noise_from,
                    "Write noise-free twins of a noisy corpus manifest");

  // --- train ---------------------------------------------------------------
  auto* train = app.add_subcommand("train", "Train a separator");
  std::string tr_strategy = "saddel", tr_tasks, tr_manifest_dir, tr_val_dir,
              tr_out, tr_resume;
  int64_t tr_steps = 2000;
  int tr_batch = 4, tr_val_items = 8, tr_a2pit_heads = 3, tr_lr_patience = 3;
  int64_t tr_validate_every = 500, tr_checkpoint_every = 0;
  double tr_lr = 1e-3, tr_wd = 0.0, tr_clip = 5.0, tr_segment = 4.0;
  uint64_t tr_seed = 0;
  bool tr_bypass_sd = false;
  int tr_basis = 128, tr_window = 16, tr_stride = 8, tr_channels = 64,
      tr_blocks = 4, tr_repeats = 2, tr_kernel = 3;
  train->add_option("--strategy", tr_strategy,
                    "saddel | baseline_ss | baseline_sd | a2pit | cascade");
  train->add_option("--tasks", tr_tasks,
                    "Comma list of task tags (default: per strategy)");
  train->add_option("--manifest-dir", tr_manifest_dir,
                    "Corpus directory (contains manifest.jsonl)")
      ->required();
  train->add_option("--val-manifest-dir", tr_val_dir,
                    "Held-out corpus (default: 10% split of training corpus)");
  train->add_option("--steps", tr_steps, "Optimization steps");
  train->add_option("--batch-size", tr_batch, "Items per task per step");
  train->add_option("--lr", tr_lr, "Initial learning rate");
  train->add_option("--weight-decay", tr_wd, "L2 coefficient");
  train->add_option("--grad-clip", tr_clip, "Global-norm clip (<=0 disables)");
  train->add_option("--lr-patience", tr_lr_patience,
                    "Stalled validations before halving the LR");
  train->add_option("--validate-every", tr_validate_every, "Validation cadence");
  train->add_option("--checkpoint-every", tr_checkpoint_every,
                    "Checkpoint cadence (0: final only)");
  train->add_option("--segment-seconds", tr_segment, "Training crop length");
  train->add_option("--val-items", tr_val_items, "Validation items per task");
  train->add_option("--seed", tr_seed, "Training seed");
  train->add_option("--out", tr_out, "Output directory")->required();
  train->add_option("--resume-from", tr_resume, "Checkpoint to resume from");
  train->add_option("--a2pit-heads", tr_a2pit_heads,
                    "Output channels for the a2pit strategy");
  train->add_flag("--cascade-bypass-sd", tr_bypass_sd,
                  "Ablation: feed the separation stage directly");
  train->add_option("--model-basis", tr_basis, "Encoder basis count");
  train->add_option("--model-window", tr_window, "Encoder window (samples)");
  train->add_option("--model-stride", tr_stride, "Encoder stride (samples)");
  train->add_option("--model-channels", tr_channels, "Block channels");
  train->add_option("--model-blocks", tr_blocks, "Blocks per repeat");
  train->add_option("--model-repeats", tr_repeats, "Repeats");
  train->add_option("--model-kernel", tr_kernel, "Depthwise kernel (odd)");

  // --- separate --------------------------------------------------------------
  auto* separate = app.add_subcommand(
      "separate", "Recursively extract sources from one mixture");
  std::string se_ckpt, se_in, se_out, se_stop = "residual:-25";
  int se_max_iter = 5;
  separate->add_option("--ckpt", se_ckpt, "Model checkpoint")->required();
  separate->add_option("--in", se_in, "Input mixture WAV")->required();
  separate->add_option("--stop", se_stop,
                       "known:K | residual[:db] | max");
  separate->add_option("--max-iter", se_max_iter, "Iteration cap");
  separate->add_option("--out-dir", se_out, "Output directory")->required();

  // --- eval ------------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "Score a model over a test corpus");
  std::string ev_ckpt, ev_manifest, ev_stop = "known", ev_out, ev_label,
              ev_clean, ev_noisy, ev_sd_front, ev_formats, ev_table_out;
  std::vector<std::string> ev_reports;
  int ev_max_iter = 5;
  bool ev_degradation = false;
  eval->add_option("--ckpt", ev_ckpt, "Model checkpoint");
  eval->add_option("--manifest", ev_manifest, "Test corpus manifest (or dir)");
  eval->add_option("--stop", ev_stop, "known | residual[:db]");
  eval->add_option("--max-iter", ev_max_iter, "Iteration cap");
  eval->add_option("--out", ev_out, "Report output directory");
  eval->add_option("--label", ev_label, "Strategy label for the table row");
  eval->add_flag("--degradation", ev_degradation,
                 "Channel-wise clean-vs-noisy degradation analysis");
  eval->add_option("--clean", ev_clean, "Clean corpus manifest (degradation)");
  eval->add_option("--noisy", ev_noisy, "Noisy corpus manifest (degradation)");
  eval->add_option("--sd-front", ev_sd_front,
                   "Denoiser checkpoint applied before the recursion");
  eval->add_option("--formats", ev_formats,
                   "Comma list of json,csv,table,plot (default all)");
  eval->add_option("--render-table", ev_table_out,
                   "Merge report JSONs into one score table at this path");
  eval->add_option("--reports", ev_reports,
                   "Report JSONs for --render-table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      json config;
      config["out_dir"] = sy_out;
      config["seed"] = sy_seed;
      if (sy_toy) {
        config["toy"] = {{"speakers", sy_toy_speakers},
                         {"utterances", sy_toy_utterances}};
      }
      if (!sy_speech_dir.empty()) config["speech_dir"] = sy_speech_dir;
      if (!sy_noise_dir.empty()) config["noise_dir"] = sy_noise_dir;
      if (!sy_config_spec.empty())
        config["configs"] = ParseConfigSpec(sy_config_spec);
      if (!sy_from_manifest.empty()) config["from_manifest"] = sy_from_manifest;
      if (!sy_strip_noise_from.empty())
        config["strip_noise_from"] = sy_strip_noise_from;
      return Run(sk_synth_run, config);
    }

    if (train->parsed()) {
      json config;
      config["strategy"] = tr_strategy;
      if (!tr_tasks.empty()) config["tasks"] = SplitCommas(tr_tasks);
      config["manifest_dir"] = tr_manifest_dir;
      if (!tr_val_dir.empty()) config["val_manifest_dir"] = tr_val_dir;
      config["out_dir"] = tr_out;
      config["steps"] = tr_steps;
      config["batch_size"] = tr_batch;
      config["lr"] = tr_lr;
      config["weight_decay"] = tr_wd;
      config["grad_clip_norm"] = tr_clip;
      config["lr_patience"] = tr_lr_patience;
      config["validate_every"] = tr_validate_every;
      config["checkpoint_every"] = tr_checkpoint_every;
      config["segment_seconds"] = tr_segment;
      config["val_items"] = tr_val_items;
      config["seed"] = tr_seed;
      if (!tr_resume.empty()) config["resume_from"] = tr_resume;
      config["a2pit_heads"] = tr_a2pit_heads;
      if (tr_bypass_sd) config["cascade_bypass_sd"] = true;
      config["model"] = {
          {"encoder_basis_count", tr_basis}, {"encoder_window", tr_window},
          {"encoder_stride", tr_stride},     {"block_channels", tr_channels},
          {"blocks_per_repeat", tr_blocks},  {"repeats", tr_repeats},
          {"conv_kernel", tr_kernel}};
      return Run(sk_train_run, config);
    }

    if (separate->parsed()) {
      json config;
      config["checkpoint"] = se_ckpt;
      config["input_wav"] = se_in;
      config["out_dir"] = se_out;
      config["stop"] = se_stop;
      config["max_iterations"] = se_max_iter;
      return Run(sk_separate_run, config);
    }

    if (eval->parsed()) {
      json config;
      if (!ev_table_out.empty()) {
        json rt;
        rt["out_file"] = ev_table_out;
        rt["reports"] = ev_reports;
        config["render_table"] = std::move(rt);
        return Run(sk_eval_run, config);
      }
      if (ev_ckpt.empty())
        throw CLI::ValidationError("--ckpt", "required unless --render-table");
      config["checkpoint"] = ev_ckpt;
      if (!ev_manifest.empty()) config["manifest"] = ev_manifest;
      config["stop"] = ev_stop;
      config["max_iterations"] = ev_max_iter;
      if (ev_out.empty())
        throw CLI::ValidationError("--out", "output directory required");
      config["out_dir"] = ev_out;
      if (!ev_label.empty()) config["strategy_label"] = ev_label;
      if (!ev_sd_front.empty()) config["sd_front_checkpoint"] = ev_sd_front;
      if (!ev_formats.empty()) config["formats"] = SplitCommas(ev_formats);
      if (ev_degradation) {
        if (ev_clean.empty() || ev_noisy.empty())
          throw CLI::ValidationError("--degradation",
                                     "needs --clean and --noisy manifests");
        config["degradation"] = {{"clean_manifest", ev_clean},
                                 {"noisy_manifest", ev_noisy}};
      }
      return Run(sk_eval_run, config);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
