// sepkit/trainer.cc

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

#include "sepkit/trainer.h"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "sepkit/adam.h"
#include "sepkit/checkpoint.h"
#include "sepkit/common.h"
#include "sepkit/losses.h"
#include "sepkit/metrics.h"
#include "sepkit/rng.h"
#include "sepkit/scoring.h"
#include "sepkit/wav_io.h"

namespace sepkit {

namespace {

using ordered_json = nlohmann::ordered_json;

std::span<const double> VecSpan(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<size_t>(v.size())};
}

Eigen::VectorXd ToVec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXd WaveVec(const Waveform& w) {
  return Eigen::Map<const Eigen::VectorXd>(
      w.samples.data(), static_cast<Eigen::Index>(w.samples.size()));
}

struct ItemTargets {
  std::vector<std::span<const double>> sources;
  std::optional<std::span<const double>> noise;
};

ItemTargets TargetsOf(const MixtureSample& item) {
  ItemTargets t;
  for (const Waveform& s : item.sources) t.sources.emplace_back(s.samples);
  if (item.noise) t.noise = std::span<const double>(item.noise->samples);
  return t;
}

StopRule EvalStopFor(const MixtureSample& item) {
  StopRule stop = StopRule::KnownCount(static_cast<int>(item.sources.size()));
  stop.max_iterations =
      std::max(5, static_cast<int>(item.sources.size()));
  return stop;
}

// Strategy-specific loss plumbing behind the shared step engine.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual std::vector<ParamView> Params() = 0;
  // Accumulates parameter gradients scaled by `scale`; returns the item loss.
  virtual double TrainItem(const MixtureSample& item, double scale) = 0;
  virtual double ValLoss(const MixtureSample& item) = 0;
  virtual UtteranceScore ValScore(const MixtureSample& item) = 0;
  virtual void ValExtras(const MixtureSample& item,
                         std::map<std::string, std::pair<double, int>>* acc) {}
  virtual std::filesystem::path SaveModels(const std::filesystem::path& out_dir,
                                           const std::string& suffix,
                                           Checkpoint extra) = 0;
  virtual Checkpoint Restore(const std::filesystem::path& path) = 0;
};

class SaddelObjective : public Objective {
 public:
  explicit SaddelObjective(Separator* model) : model_(model) {
    if (model_->config().num_output_heads != 2)
      throw ContractViolation("saddel training requires a 2-head model");
  }

 protected:
  struct MultiHeadTag {};
  SaddelObjective(Separator* model, MultiHeadTag) : model_(model) {}

 public:
  std::vector<ParamView> Params() override { return model_->Params(); }

  double TrainItem(const MixtureSample& item, double scale) override {
    Separator::Trace trace;
    const Eigen::VectorXd input = WaveVec(item.mixture);
    std::vector<Eigen::VectorXd> heads = model_->ForwardTrain(input, &trace);
    const ItemTargets targets = TargetsOf(item);
    std::vector<double> gs(item.mixture.samples.size()),
        gr(item.mixture.samples.size());
    const Assignment a =
        OrPitLossSpan(VecSpan(heads[0]), VecSpan(heads[1]), targets.sources,
                      targets.noise, gs, gr);
    std::vector<Eigen::VectorXd> head_grads(2);
    head_grads[0] = scale * ToVec(gs);
    head_grads[1] = scale * ToVec(gr);
    model_->Backward(trace, head_grads);
    return a.loss_value;
  }

  double ValLoss(const MixtureSample& item) override {
    const SeparationOutput out = model_->Forward(item.mixture);
    std::optional<Waveform> noise = item.noise;
    return OrPitLoss(out, item.sources, noise).loss_value;
  }

  UtteranceScore ValScore(const MixtureSample& item) override {
    const Separator* model = model_;
    return ScoreUtterance(
        [model](const Waveform& w) { return model->Forward(w); }, item,
        EvalStopFor(item));
  }

  std::filesystem::path SaveModels(const std::filesystem::path& out_dir,
                                   const std::string& suffix,
                                   Checkpoint extra) override {
    Checkpoint ckpt = MakeCheckpoint(model_, extra.metadata);
    for (auto& arr : extra.arrays) ckpt.arrays.push_back(std::move(arr));
    const std::filesystem::path path = out_dir / ("model" + suffix + ".ckpt");
    ckpt.Save(path);
    return path;
  }

  Checkpoint Restore(const std::filesystem::path& path) override {
    Checkpoint ckpt = Checkpoint::Load(path);
    LoadInto(model_, ckpt);
    return ckpt;
  }

 protected:
  Separator* model_;
};

class A2PitObjective : public SaddelObjective {
 public:
  A2PitObjective(Separator* model, const TrainConfig& cfg)
      : SaddelObjective(model, MultiHeadTag{}) {
    for (TaskTag tag : cfg.tasks) {
      const TaskConfig tc = TaskConfig::FromTag(tag);
      if (tc.num_speakers > model->config().num_output_heads)
        throw ContractViolation(
            "a2pit: task speaker count exceeds model head count");
    }
  }

  double TrainItem(const MixtureSample& item, double scale) override {
    Separator::Trace trace;
    const Eigen::VectorXd input = WaveVec(item.mixture);
    std::vector<Eigen::VectorXd> heads = model_->ForwardTrain(input, &trace);
    std::vector<std::span<const double>> est;
    for (const auto& h : heads) est.push_back(VecSpan(h));
    const ItemTargets targets = TargetsOf(item);
    std::vector<std::vector<double>> grads;
    const PitResult r = A2PitLossSpan(est, targets.sources,
                                      item.mixture.samples, &grads);
    std::vector<Eigen::VectorXd> head_grads;
    head_grads.reserve(grads.size());
    for (auto& g : grads) head_grads.push_back(scale * ToVec(g));
    model_->Backward(trace, head_grads);
    return r.loss;
  }

  double ValLoss(const MixtureSample& item) override {
    const std::vector<Waveform> est = model_->ForwardAll(item.mixture);
    return A2PitLoss(est, item.sources, item.mixture).loss;
  }

  UtteranceScore ValScore(const MixtureSample& item) override {
    return ScoreEstimates(model_->ForwardAll(item.mixture), item);
  }

  void ValExtras(const MixtureSample& item,
                 std::map<std::string, std::pair<double, int>>* acc) override {
    const std::vector<Waveform> est = model_->ForwardAll(item.mixture);
    const PitResult r = A2PitLoss(est, item.sources, item.mixture);
    const int n = static_cast<int>(item.sources.size());
    for (size_t e = 0; e < est.size(); ++e) {
      if (r.permutation[e] < n) continue;  // paired with a real source
      auto& [sum, count] = (*acc)["autoencode_si_snr"];
      sum += SiSnr(est[e], item.mixture);
      ++count;
    }
  }

};

class CascadeObjective : public Objective {
 public:
  CascadeObjective(Separator* sd, Separator* ss, bool bypass_sd)
      : sd_(sd), ss_(ss), bypass_sd_(bypass_sd) {
    if (sd_->config().num_output_heads != 2 ||
        ss_->config().num_output_heads != 2)
      throw ContractViolation("cascade training requires 2-head models");
  }

  std::vector<ParamView> Params() override {
    std::vector<ParamView> views = sd_->Params();
    for (ParamView& v : ss_->Params()) views.push_back(v);
    return views;
  }

  double TrainItem(const MixtureSample& item, double scale) override {
    const size_t len = item.mixture.samples.size();
    const ItemTargets targets = TargetsOf(item);

    Separator::Trace sd_trace;
    std::vector<Eigen::VectorXd> sd_heads;
    Eigen::VectorXd denoised;
    if (bypass_sd_) {
      denoised = WaveVec(item.mixture);
    } else {
      sd_heads = sd_->ForwardTrain(WaveVec(item.mixture), &sd_trace);
      denoised = sd_heads[0];
    }

    Separator::Trace ss_trace;
    std::vector<Eigen::VectorXd> ss_heads =
        ss_->ForwardTrain(denoised, &ss_trace);

    // Separation stage: one-and-rest loss against clean sources.
    std::vector<double> gs(len), gr(len);
    const Assignment a =
        OrPitLossSpan(VecSpan(ss_heads[0]), VecSpan(ss_heads[1]),
                      targets.sources, std::nullopt, gs, gr);
    std::vector<Eigen::VectorXd> ss_grads(2);
    ss_grads[0] = scale * ToVec(gs);
    ss_grads[1] = scale * ToVec(gr);
    const Eigen::VectorXd g_denoised = ss_->Backward(ss_trace, ss_grads);

    double loss = a.loss_value;
    if (!bypass_sd_) {
      // Denoising stage regresses the noise-free speech sum.
      Eigen::VectorXd clean_sum = Eigen::VectorXd::Zero(len);
      for (const Waveform& s : item.sources) clean_sum += WaveVec(s);
      std::vector<double> g_sd(len);
      const double v = SiSnrWithGrad(VecSpan(sd_heads[0]),
                                     VecSpan(clean_sum), g_sd);
      loss += -v;
      std::vector<Eigen::VectorXd> sd_grads(2);
      sd_grads[0] = g_denoised - scale * ToVec(g_sd);
      sd_grads[1] = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(len));
      sd_->Backward(sd_trace, sd_grads);
    }
    return loss;
  }

  double ValLoss(const MixtureSample& item) override {
    const Waveform denoised =
        bypass_sd_ ? item.mixture : sd_->Forward(item.mixture).extracted;
    const SeparationOutput out = ss_->Forward(denoised);
    double loss = OrPitLoss(out, item.sources, std::nullopt).loss_value;
    if (!bypass_sd_) {
      Waveform clean_sum = item.sources[0];
      for (size_t k = 1; k < item.sources.size(); ++k)
        for (size_t i = 0; i < clean_sum.samples.size(); ++i)
          clean_sum.samples[i] += item.sources[k].samples[i];
      loss += NegSiSnr(denoised.samples, clean_sum.samples);
    }
    return loss;
  }

  UtteranceScore ValScore(const MixtureSample& item) override {
    const Waveform denoised =
        bypass_sd_ ? item.mixture : sd_->Forward(item.mixture).extracted;
    const Separator* ss = ss_;
    const RecursionResult rec = SeparateRecursive(
        [ss](const Waveform& w) { return ss->Forward(w); }, denoised,
        EvalStopFor(item));
    UtteranceScore score = ScoreEstimates(rec.extracted_sources, item);
    score.stop_reason = rec.stop_reason;
    return score;
  }

  std::filesystem::path SaveModels(const std::filesystem::path& out_dir,
                                   const std::string& suffix,
                                   Checkpoint extra) override {
    const std::string ss_name = "ss" + suffix + ".ckpt";
    ordered_json sd_meta = extra.metadata;
    sd_meta["companion_ss"] = ss_name;
    Checkpoint sd_ckpt = MakeCheckpoint(sd_, sd_meta);
    for (auto& arr : extra.arrays) sd_ckpt.arrays.push_back(std::move(arr));
    const std::filesystem::path sd_path = out_dir / ("sd" + suffix + ".ckpt");
    sd_ckpt.Save(sd_path);

    Checkpoint ss_ckpt = MakeCheckpoint(ss_, extra.metadata);
    ss_ckpt.Save(out_dir / ss_name);
    return sd_path;
  }

  Checkpoint Restore(const std::filesystem::path& path) override {
    Checkpoint sd_ckpt = Checkpoint::Load(path);
    LoadInto(sd_, sd_ckpt);
    const std::string ss_name =
        sd_ckpt.metadata.at("companion_ss").get<std::string>();
    const Checkpoint ss_ckpt = Checkpoint::Load(path.parent_path() / ss_name);
    LoadInto(ss_, ss_ckpt);
    return sd_ckpt;
  }

 private:
  Separator* sd_;
  Separator* ss_;
  bool bypass_sd_;
};

struct ValidationOutcome {
  double mean_loss = 0.0;
  std::vector<std::pair<TaskTag, double>> si_snri;
  std::vector<std::pair<std::string, double>> metrics;
};

ValidationOutcome RunValidation(Objective* obj, const TaskCorpora& corpora,
                                const TrainConfig& cfg) {
  ValidationOutcome out;
  double loss_acc = 0.0;
  std::map<std::string, std::pair<double, int>> extras;
  for (TaskTag tag : cfg.tasks) {
    const SampleSource& src = *corpora.at(tag).val;
    const size_t n =
        std::min<size_t>(static_cast<size_t>(cfg.val_items), src.Size());
    double task_loss = 0.0, task_si_snri = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const MixtureSample item = src.Get(i);
      task_loss += obj->ValLoss(item);
      task_si_snri += obj->ValScore(item).mean_si_snri;
      obj->ValExtras(item, &extras);
    }
    task_loss /= static_cast<double>(n);
    task_si_snri /= static_cast<double>(n);
    loss_acc += task_loss;
    out.si_snri.emplace_back(tag, task_si_snri);
  }
  out.mean_loss = loss_acc / static_cast<double>(cfg.tasks.size());
  for (const auto& [name, sum_count] : extras)
    out.metrics.emplace_back(name, sum_count.first / sum_count.second);
  return out;
}

TrainResult RunEngine(Objective* obj, const TaskCorpora& corpora,
                      const TrainConfig& cfg,
                      const std::filesystem::path& out_dir,
                      std::ostream* console, Strategy strategy) {
  cfg.Validate();
  if (cfg.tasks.empty()) throw ContractViolation("train: no tasks");
  bool has_val = true;
  for (TaskTag tag : cfg.tasks) {
    auto it = corpora.find(tag);
    if (it == corpora.end() || !it->second.train || it->second.train->Size() == 0)
      throw ContractViolation(std::string("train: empty corpus for task ") +
                              TaskTagName(tag));
    if (!it->second.val || it->second.val->Size() == 0) has_val = false;
  }
  std::filesystem::create_directories(out_dir);

  AdamOptimizer adam({cfg.learning_rate, 0.9, 0.999, 1e-8, cfg.weight_decay,
                      cfg.grad_clip_norm});
  int64_t start_step = 0;
  double best_val = std::numeric_limits<double>::infinity();
  int stall = 0;

  if (!cfg.resume_from.empty()) {
    const Checkpoint ckpt = obj->Restore(cfg.resume_from);
    adam.ImportState(ckpt.arrays, ckpt.metadata.at("optimizer"));
    start_step = ckpt.metadata.at("completed_steps").get<int64_t>();
    const auto& sched = ckpt.metadata.at("schedule");
    if (!sched.at("best_val").is_null())
      best_val = sched.at("best_val").get<double>();
    stall = sched.at("stall").get<int>();
  }

  std::ofstream log_file(out_dir / "train_log.jsonl",
                         start_step > 0 ? std::ios::app : std::ios::trunc);
  if (!log_file) throw IoError("cannot write training log");

  std::vector<ParamView> params = obj->Params();
  TrainResult result;
  for (const ParamView& v : params) result.total_parameters += v.size;

  const auto segment_len = static_cast<size_t>(
      cfg.segment_seconds * kCorpusSampleRate);
  const double scale =
      1.0 / (static_cast<double>(cfg.batch_size) *
             static_cast<double>(cfg.tasks.size()));

  auto checkpoint_meta = [&](int64_t completed) {
    Checkpoint extra;
    ordered_json meta;
    meta["strategy"] = StrategyName(strategy);
    meta["completed_steps"] = completed;
    ordered_json tasks = ordered_json::array();
    for (TaskTag tag : cfg.tasks) tasks.push_back(TaskTagName(tag));
    meta["tasks"] = std::move(tasks);
    ordered_json sched;
    sched["best_val"] = std::isfinite(best_val) ? ordered_json(best_val)
                                                : ordered_json(nullptr);
    sched["stall"] = stall;
    meta["schedule"] = std::move(sched);
    ordered_json train_cfg;
    train_cfg["batch_size"] = cfg.batch_size;
    train_cfg["steps"] = cfg.steps;
    train_cfg["learning_rate"] = cfg.learning_rate;
    train_cfg["weight_decay"] = cfg.weight_decay;
    train_cfg["grad_clip_norm"] = cfg.grad_clip_norm;
    train_cfg["lr_patience"] = cfg.lr_patience;
    train_cfg["validate_every"] = cfg.validate_every;
    train_cfg["segment_seconds"] = cfg.segment_seconds;
    train_cfg["val_items"] = cfg.val_items;
    train_cfg["seed"] = cfg.seed;
    meta["train_config"] = std::move(train_cfg);
    ordered_json opt_meta;
    adam.ExportState(&extra.arrays, &opt_meta);
    meta["optimizer"] = std::move(opt_meta);
    extra.metadata = std::move(meta);
    return extra;
  };

  for (int64_t step = start_step; step < cfg.steps; ++step) {
    const auto t0 = std::chrono::steady_clock::now();
    for (ParamView& v : params) std::fill(v.grad, v.grad + v.size, 0.0);

    TrainLogRecord rec;
    rec.step = step + 1;
    double loss_acc = 0.0;
    for (TaskTag tag : cfg.tasks) {
      const SampleSource& src = *corpora.at(tag).train;
      Rng rng = Rng::ForKey(cfg.seed, "step/" + std::to_string(step) + "/" +
                                          TaskTagName(tag));
      double task_acc = 0.0;
      for (int b = 0; b < cfg.batch_size; ++b) {
        const auto idx = static_cast<size_t>(
            rng.UniformInt(0, static_cast<int64_t>(src.Size()) - 1));
        const MixtureSample item = CropSample(src.Get(idx), segment_len, &rng);
        const double loss = obj->TrainItem(item, scale);
        if (!std::isfinite(loss)) {
          ordered_json diag;
          diag["step"] = step + 1;
          diag["event"] = "non_finite_loss";
          diag["task"] = TaskTagName(tag);
          diag["item_index"] = idx;
          log_file << diag.dump() << "\n";
          log_file.flush();
          throw Error("non-finite training loss; diagnostic record written");
        }
        task_acc += loss;
      }
      task_acc /= static_cast<double>(cfg.batch_size);
      rec.task_loss.emplace_back(tag, task_acc);
      loss_acc += task_acc;
    }
    rec.mean_loss = loss_acc / static_cast<double>(cfg.tasks.size());
    rec.grad_norm = adam.Step(&params);
    rec.learning_rate = adam.learning_rate();

    const bool last_step = step + 1 == cfg.steps;
    if (has_val && cfg.validate_every > 0 &&
        ((step + 1) % cfg.validate_every == 0 || last_step)) {
      const ValidationOutcome val = RunValidation(obj, corpora, cfg);
      rec.val_loss = val.mean_loss;
      rec.val_si_snri = val.si_snri;
      rec.val_metrics = val.metrics;
      if (val.mean_loss < best_val - 1e-9) {
        best_val = val.mean_loss;
        stall = 0;
      } else if (++stall >= cfg.lr_patience) {
        adam.set_learning_rate(adam.learning_rate() * 0.5);
        stall = 0;
      }
    }

    rec.wall_time_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();
    log_file << rec.ToJson() << "\n";
    if (console) {
      *console << "step " << rec.step << "/" << cfg.steps
               << " loss " << rec.mean_loss << " lr " << rec.learning_rate;
      if (rec.val_loss) *console << " val_loss " << *rec.val_loss;
      *console << " (" << rec.wall_time_ms << " ms)\n";
      console->flush();
    }
    result.log.push_back(std::move(rec));

    if (cfg.checkpoint_every > 0 && (step + 1) % cfg.checkpoint_every == 0 &&
        !last_step) {
      char suffix[32];
      std::snprintf(suffix, sizeof(suffix), "_step%08lld",
                    static_cast<long long>(step + 1));
      obj->SaveModels(out_dir, suffix, checkpoint_meta(step + 1));
    }
  }

  log_file.flush();
  result.final_checkpoint =
      obj->SaveModels(out_dir, "_final", checkpoint_meta(cfg.steps));
  result.optimizer_steps = adam.step_count();
  return result;
}

}  // namespace

// ---------------------------------------------------------------------------

PremixedCorpus::PremixedCorpus(std::filesystem::path corpus_dir,
                               std::vector<ManifestEntry> entries)
    : dir_(std::move(corpus_dir)), entries_(std::move(entries)) {}

MixtureSample PremixedCorpus::Get(size_t index) const {
  if (index >= entries_.size())
    throw ContractViolation("corpus index out of range");
  const ManifestEntry& e = entries_[index];
  MixtureSample s;
  s.config = TaskConfig::FromTag(e.tag);
  s.seed = e.seed;
  s.mixture = ReadWav(dir_ / e.MixPath());
  for (size_t k = 0; k < e.sources.size(); ++k)
    s.sources.push_back(ReadWav(dir_ / e.SourcePath(k)));
  if (e.has_noise) s.noise = ReadWav(dir_ / e.NoisePath());
  return s;
}

OnTheFlyCorpus::OnTheFlyCorpus(std::vector<PoolFile> speech_pool,
                               std::vector<PoolFile> noise_pool,
                               TaskConfig config, size_t count, uint64_t seed)
    : speech_pool_(std::move(speech_pool)),
      noise_pool_(std::move(noise_pool)),
      config_(config),
      count_(count),
      seed_(seed) {}

MixtureSample OnTheFlyCorpus::Get(size_t index) const {
  const uint64_t item_seed = Rng::DeriveSeed(
      seed_, std::string("otf/") + TaskTagName(config_.tag) + "/" +
                 std::to_string(index));
  return SynthesizeSample(speech_pool_, noise_pool_, config_, item_seed).first;
}

const char* StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kSaddel: return "saddel";
    case Strategy::kBaselineSs: return "baseline_ss";
    case Strategy::kBaselineSd: return "baseline_sd";
    case Strategy::kA2Pit: return "a2pit";
    case Strategy::kCascade: return "cascade";
  }
  return "unknown";
}

Strategy ParseStrategy(const std::string& name) {
  if (name == "saddel") return Strategy::kSaddel;
  if (name == "baseline_ss" || name == "bl_ss") return Strategy::kBaselineSs;
  if (name == "baseline_sd" || name == "bl_sd") return Strategy::kBaselineSd;
  if (name == "a2pit") return Strategy::kA2Pit;
  if (name == "cascade") return Strategy::kCascade;
  throw ContractViolation("unknown strategy: " + name);
}

std::vector<TaskTag> DefaultTasksFor(Strategy s) {
  switch (s) {
    case Strategy::kSaddel:
      return {TaskTag::k1spN, TaskTag::k2sp, TaskTag::k3sp, TaskTag::k2spN,
              TaskTag::k3spN};
    case Strategy::kBaselineSs:
    case Strategy::kCascade:
      return {TaskTag::k2spN, TaskTag::k3spN};
    case Strategy::kBaselineSd:
      return {TaskTag::k1spN};
    case Strategy::kA2Pit:
      return {TaskTag::k1spN, TaskTag::k2spN, TaskTag::k3spN};
  }
  return {};
}

void TrainConfig::Validate() const {
  if (tasks.empty()) throw ContractViolation("train config: no tasks");
  if (batch_size < 1) throw ContractViolation("train config: batch_size < 1");
  if (steps < 1) throw ContractViolation("train config: steps < 1");
  if (learning_rate <= 0.0)
    throw ContractViolation("train config: learning rate must be > 0");
  if (segment_seconds <= 0.0)
    throw ContractViolation("train config: segment_seconds must be > 0");
  if (val_items < 1) throw ContractViolation("train config: val_items < 1");
}

std::string TrainLogRecord::ToJson() const {
  ordered_json j;
  j["step"] = step;
  ordered_json tl;
  for (const auto& [tag, loss] : task_loss) tl[TaskTagName(tag)] = loss;
  j["task_loss"] = std::move(tl);
  j["mean_loss"] = mean_loss;
  j["grad_norm"] = grad_norm;
  j["learning_rate"] = learning_rate;
  if (val_loss) {
    j["val_loss"] = *val_loss;
    ordered_json vs;
    for (const auto& [tag, v] : val_si_snri) vs[TaskTagName(tag)] = v;
    j["val_si_snri"] = std::move(vs);
    if (!val_metrics.empty()) {
      ordered_json vm;
      for (const auto& [name, v] : val_metrics) vm[name] = v;
      j["val_metrics"] = std::move(vm);
    }
  }
  return j.dump();
}

MixtureSample CropSample(const MixtureSample& sample, size_t segment_len,
                         Rng* rng) {
  const size_t len = sample.mixture.samples.size();
  if (len <= segment_len) return sample;
  const auto offset = static_cast<size_t>(
      rng->UniformInt(0, static_cast<int64_t>(len - segment_len)));
  auto crop = [&](const Waveform& w) {
    Waveform out;
    out.sample_rate = w.sample_rate;
    out.samples.assign(w.samples.begin() + static_cast<long>(offset),
                       w.samples.begin() + static_cast<long>(offset + segment_len));
    return out;
  };
  MixtureSample out;
  out.config = sample.config;
  out.seed = sample.seed;
  out.mixture = crop(sample.mixture);
  for (const Waveform& s : sample.sources) out.sources.push_back(crop(s));
  if (sample.noise) out.noise = crop(*sample.noise);
  return out;
}

TrainResult TrainSaddel(Separator* model, const TaskCorpora& corpora,
                        const TrainConfig& cfg,
                        const std::filesystem::path& out_dir,
                        std::ostream* console, Strategy strategy) {
  SaddelObjective obj(model);
  return RunEngine(&obj, corpora, cfg, out_dir, console, strategy);
}

CascadeResult TrainCascade(Separator* sd_model, Separator* ss_model,
                           const TaskCorpora& corpora, const TrainConfig& cfg,
                           const std::filesystem::path& out_dir,
                           std::ostream* console, bool bypass_sd) {
  for (TaskTag tag : cfg.tasks) {
    const TaskConfig tc = TaskConfig::FromTag(tag);
    if (!bypass_sd && (!tc.with_noise || tc.num_speakers < 2))
      throw ContractViolation(
          "cascade training expects noisy multi-speaker tasks");
  }
  CascadeObjective obj(sd_model, ss_model, bypass_sd);
  CascadeResult out;
  out.result =
      RunEngine(&obj, corpora, cfg, out_dir, console, Strategy::kCascade);
  out.sd_checkpoint = out.result.final_checkpoint;
  out.ss_checkpoint = out.sd_checkpoint.parent_path() / "ss_final.ckpt";
  return out;
}

TrainResult TrainA2Pit(Separator* model, const TaskCorpora& corpora,
                       const TrainConfig& cfg,
                       const std::filesystem::path& out_dir,
                       std::ostream* console) {
  A2PitObjective obj(model, cfg);
  return RunEngine(&obj, corpora, cfg, out_dir, console, Strategy::kA2Pit);
}

}  // namespace sepkit
