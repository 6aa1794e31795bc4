// sepkit/task_config.cc

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

#include "sepkit/task_config.h"

#include "sepkit/common.h"

namespace sepkit {

const char* TaskTagName(TaskTag tag) {
  switch (tag) {
    case TaskTag::k1spN: return "1sp+n";
    case TaskTag::k2sp:  return "2sp";
    case TaskTag::k3sp:  return "3sp";
    case TaskTag::k2spN: return "2sp+n";
    case TaskTag::k3spN: return "3sp+n";
  }
  throw ContractViolation("unknown task tag");
}

TaskTag ParseTaskTag(const std::string& name) {
  if (name == "1sp+n") return TaskTag::k1spN;
  if (name == "2sp") return TaskTag::k2sp;
  if (name == "3sp") return TaskTag::k3sp;
  if (name == "2sp+n") return TaskTag::k2spN;
  if (name == "3sp+n") return TaskTag::k3spN;
  throw ContractViolation("unknown task tag: " + name);
}

TaskConfig TaskConfig::FromTag(TaskTag tag) {
  TaskConfig c;
  c.tag = tag;
  switch (tag) {
    case TaskTag::k1spN: c.num_speakers = 1; c.with_noise = true; break;
    case TaskTag::k2sp:  c.num_speakers = 2; c.with_noise = false; break;
    case TaskTag::k3sp:  c.num_speakers = 3; c.with_noise = false; break;
    case TaskTag::k2spN: c.num_speakers = 2; c.with_noise = true; break;
    case TaskTag::k3spN: c.num_speakers = 3; c.with_noise = true; break;
  }
  return c;
}

void TaskConfig::Validate() const {
  const TaskConfig ref = FromTag(tag);
  if (num_speakers != ref.num_speakers || with_noise != ref.with_noise)
    throw ContractViolation("task config inconsistent with its tag");
  if (num_speakers < 1 || num_speakers > 3)
    throw ContractViolation("num_speakers out of range");
  if (speech_snr_lo_db > speech_snr_hi_db)
    throw ContractViolation("speech SNR range inverted");
  if (with_noise && noise_snr_lo_db > noise_snr_hi_db)
    throw ContractViolation("noise SNR range inverted");
}

}  // namespace sepkit
