// sepkit/task_config.h

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

#ifndef SEPKIT_TASK_CONFIG_H_
#define SEPKIT_TASK_CONFIG_H_

#include <string>

namespace sepkit {

// The five mixture configurations: 1sp+n (denoising), 2sp/3sp (clean
// separation), 2sp+n/3sp+n (noisy separation).
enum class TaskTag { k1spN, k2sp, k3sp, k2spN, k3spN };

const char* TaskTagName(TaskTag tag);          // "1sp+n", "2sp", ...
TaskTag ParseTaskTag(const std::string& name); // throws ContractViolation

struct TaskConfig {
  TaskTag tag = TaskTag::k2sp;
  int num_speakers = 2;
  bool with_noise = false;
  double speech_snr_lo_db = -2.5;
  double speech_snr_hi_db = 2.5;
  double noise_snr_lo_db = -5.0;
  double noise_snr_hi_db = 20.0;

  static TaskConfig FromTag(TaskTag tag);

  // tag consistent with num_speakers / with_noise, ranges ordered.
  void Validate() const;
};

}  // namespace sepkit

#endif  // SEPKIT_TASK_CONFIG_H_
