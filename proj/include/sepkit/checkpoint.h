// sepkit/checkpoint.h

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

#ifndef SEPKIT_CHECKPOINT_H_
#define SEPKIT_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sepkit/separator.h"

namespace sepkit {

// Single-file model container: magic + version, a JSON header carrying the
// SeparatorConfig and free-form metadata, then raw little-endian float64
// arrays in header order. Arrays prefixed "opt/" hold optimizer state and are
// ignored when only the model is wanted.
struct Checkpoint {
  SeparatorConfig config;
  nlohmann::ordered_json metadata;
  std::vector<std::pair<std::string, std::vector<double>>> arrays;

  void Save(const std::filesystem::path& path) const;
  static Checkpoint Load(const std::filesystem::path& path);

  const std::vector<double>* FindArray(const std::string& name) const;
};

// Snapshot of the model's parameters plus metadata.
Checkpoint MakeCheckpoint(Separator* model, nlohmann::ordered_json metadata);

// Builds a model from the stored config and fills its parameters.
Separator RestoreSeparator(const Checkpoint& ckpt);

// Fills an existing model; throws CheckpointError when the stored config does
// not match the model's.
void LoadInto(Separator* model, const Checkpoint& ckpt);

}  // namespace sepkit

#endif  // SEPKIT_CHECKPOINT_H_
