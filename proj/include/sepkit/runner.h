// sepkit/runner.h

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

#ifndef SEPKIT_RUNNER_H_
#define SEPKIT_RUNNER_H_

#include <functional>
#include <string>

#include <nlohmann/json.hpp>

namespace sepkit {

// Progress lines (human-oriented, non-contractual).
using ProgressFn = std::function<void(const std::string&)>;

// JSON-config entry points mirroring the CLI subcommands; the C API and the
// CLI both sit on top of these. Configs are documented in the README.
void RunSynth(const nlohmann::json& config, const ProgressFn& progress);
void RunTrain(const nlohmann::json& config, const ProgressFn& progress);
void RunSeparate(const nlohmann::json& config, const ProgressFn& progress);
void RunEval(const nlohmann::json& config, const ProgressFn& progress);

}  // namespace sepkit

#endif  // SEPKIT_RUNNER_H_
