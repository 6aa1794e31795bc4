// sepkit/capi.cc

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

#include "sepkit/capi.h"

#include <cstring>
#include <string>

#include <nlohmann/json.hpp>

#include "sepkit/checkpoint.h"
#include "sepkit/common.h"
#include "sepkit/inference.h"
#include "sepkit/metrics.h"
#include "sepkit/runner.h"

namespace {

thread_local std::string g_last_error;

sk_status Fail(sk_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Maps the C++ error taxonomy onto C codes at the boundary.
template <typename Fn>
sk_status Guard(Fn&& fn) {
  try {
    fn();
    return SK_OK;
  } catch (const sepkit::ContractViolation& e) {
    return Fail(SK_ERR_INVALID_ARGUMENT, e.what());
  } catch (const sepkit::DegenerateSignal& e) {
    return Fail(SK_ERR_DEGENERATE_SIGNAL, e.what());
  } catch (const sepkit::CheckpointError& e) {
    return Fail(SK_ERR_BAD_CHECKPOINT, e.what());
  } catch (const sepkit::IoError& e) {
    return Fail(SK_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return Fail(SK_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(SK_ERR_INTERNAL, "unknown error");
  }
}

sk_status RunJson(const char* config_json, sk_progress_fn progress,
                  void* user_data,
                  void (*runner)(const nlohmann::json&,
                                 const sepkit::ProgressFn&)) {
  return Guard([&] {
    if (config_json == nullptr)
      throw sepkit::ContractViolation("config_json is null");
    nlohmann::json config;
    try {
      config = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::exception& e) {
      throw sepkit::ContractViolation(std::string("bad config json: ") +
                                      e.what());
    }
    sepkit::ProgressFn fn;
    if (progress != nullptr)
      fn = [progress, user_data](const std::string& line) {
        progress(line.c_str(), user_data);
      };
    runner(config, fn);
  });
}

sepkit::StopRule ParseStop(const char* stop_spec, int max_iterations) {
  sepkit::StopRule stop;
  stop.max_iterations = max_iterations;
  const std::string spec = stop_spec == nullptr ? "residual" : stop_spec;
  if (spec == "max") return stop;
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg =
      colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "known") {
    if (arg.empty())
      throw sepkit::ContractViolation("stop spec 'known' needs a count");
    stop.known_count = std::stoi(arg);
  } else if (kind == "residual") {
    stop.residual_threshold_db =
        arg.empty() ? sepkit::kDefaultResidualStopDb : std::stod(arg);
  } else {
    throw sepkit::ContractViolation("unknown stop spec: " + spec);
  }
  return stop;
}

}  // namespace

struct sk_model {
  sepkit::Separator separator;
};

struct sk_separation {
  sepkit::RecursionResult result;
  std::string stop_reason;
};

extern "C" {

const char* sk_version(void) { return "0.1.0"; }

const char* sk_status_name(sk_status status) {
  switch (status) {
    case SK_OK: return "ok";
    case SK_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SK_ERR_DEGENERATE_SIGNAL: return "degenerate_signal";
    case SK_ERR_IO: return "io_error";
    case SK_ERR_BAD_CHECKPOINT: return "bad_checkpoint";
    case SK_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* sk_last_error(void) { return g_last_error.c_str(); }

sk_status sk_si_snr(const double* estimate, const double* reference,
                    size_t len, double* out_db) {
  return Guard([&] {
    if (estimate == nullptr || reference == nullptr || out_db == nullptr)
      throw sepkit::ContractViolation("null pointer argument");
    *out_db = sepkit::SiSnrSpan({estimate, len}, {reference, len});
  });
}

sk_status sk_si_snr_improvement(const double* estimate,
                                const double* reference, const double* mixture,
                                size_t len, double* out_db) {
  return Guard([&] {
    if (estimate == nullptr || reference == nullptr || mixture == nullptr ||
        out_db == nullptr)
      throw sepkit::ContractViolation("null pointer argument");
    *out_db = sepkit::SiSnrSpan({estimate, len}, {reference, len}) -
              sepkit::SiSnrSpan({mixture, len}, {reference, len});
  });
}

sk_status sk_model_load(const char* checkpoint_path, sk_model** out_model) {
  return Guard([&] {
    if (checkpoint_path == nullptr || out_model == nullptr)
      throw sepkit::ContractViolation("null pointer argument");
    const sepkit::Checkpoint ckpt = sepkit::Checkpoint::Load(checkpoint_path);
    *out_model = new sk_model{sepkit::RestoreSeparator(ckpt)};
  });
}

void sk_model_free(sk_model* model) { delete model; }

sk_status sk_model_num_parameters(const sk_model* model, uint64_t* out_count) {
  return Guard([&] {
    if (model == nullptr || out_count == nullptr)
      throw sepkit::ContractViolation("null pointer argument");
    *out_count = model->separator.NumParameters();
  });
}

sk_status sk_model_config_json(const sk_model* model, char** out_json) {
  return Guard([&] {
    if (model == nullptr || out_json == nullptr)
      throw sepkit::ContractViolation("null pointer argument");
    const std::string text = model->separator.config().ToJson();
    char* copy = new char[text.size() + 1];
    std::memcpy(copy, text.c_str(), text.size() + 1);
    *out_json = copy;
  });
}

void sk_string_free(char* s) { delete[] s; }

sk_status sk_separate(const sk_model* model, const double* mixture, size_t len,
                      int sample_rate, const char* stop_spec,
                      int max_iterations, sk_separation** out_separation) {
  return Guard([&] {
    if (model == nullptr || mixture == nullptr || out_separation == nullptr)
      throw sepkit::ContractViolation("null pointer argument");
    sepkit::Waveform w;
    w.sample_rate = sample_rate;
    w.samples.assign(mixture, mixture + len);
    const sepkit::StopRule stop = ParseStop(stop_spec, max_iterations);
    const sepkit::Separator* sep = &model->separator;
    sepkit::RecursionResult result = sepkit::SeparateRecursive(
        [sep](const sepkit::Waveform& x) { return sep->Forward(x); }, w, stop);
    auto* out = new sk_separation;
    out->stop_reason = sepkit::StopReasonName(result.stop_reason);
    out->result = std::move(result);
    *out_separation = out;
  });
}

size_t sk_separation_count(const sk_separation* separation) {
  return separation == nullptr ? 0 : separation->result.extracted_sources.size();
}

sk_status sk_separation_source(const sk_separation* separation, size_t index,
                               const double** out_data, size_t* out_len) {
  return Guard([&] {
    if (separation == nullptr || out_data == nullptr || out_len == nullptr)
      throw sepkit::ContractViolation("null pointer argument");
    if (index >= separation->result.extracted_sources.size())
      throw sepkit::ContractViolation("source index out of range");
    const auto& samples = separation->result.extracted_sources[index].samples;
    *out_data = samples.data();
    *out_len = samples.size();
  });
}

sk_status sk_separation_residual(const sk_separation* separation,
                                 const double** out_data, size_t* out_len) {
  return Guard([&] {
    if (separation == nullptr || out_data == nullptr || out_len == nullptr)
      throw sepkit::ContractViolation("null pointer argument");
    *out_data = separation->result.final_residual.samples.data();
    *out_len = separation->result.final_residual.samples.size();
  });
}

const char* sk_separation_stop_reason(const sk_separation* separation) {
  return separation == nullptr ? "" : separation->stop_reason.c_str();
}

void sk_separation_free(sk_separation* separation) { delete separation; }

sk_status sk_synth_run(const char* config_json, sk_progress_fn progress,
                       void* user_data) {
  return RunJson(config_json, progress, user_data, sepkit::RunSynth);
}

sk_status sk_train_run(const char* config_json, sk_progress_fn progress,
                       void* user_data) {
  return RunJson(config_json, progress, user_data, sepkit::RunTrain);
}

sk_status sk_separate_run(const char* config_json, sk_progress_fn progress,
                          void* user_data) {
  return RunJson(config_json, progress, user_data, sepkit::RunSeparate);
}

sk_status sk_eval_run(const char* config_json, sk_progress_fn progress,
                      void* user_data) {
  return RunJson(config_json, progress, user_data, sepkit::RunEval);
}

}  // extern "C"
