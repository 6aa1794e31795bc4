// sepkit/common.h

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

#ifndef SEPKIT_COMMON_H_
#define SEPKIT_COMMON_H_

#include <stdexcept>
#include <string>

namespace sepkit {

// Saturation ceiling for SI-SNR values, in dB. Perfect reconstructions clip
// here instead of diverging to +inf.
inline constexpr double kSiSnrCapDb = 30.0;

// Floor inside the SI-SNR log ratio.
inline constexpr double kSiSnrEps = 1e-8;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (length mismatch, bad config, ...).
struct ContractViolation : Error {
  using Error::Error;
};

// An input signal is unusable (zero energy where energy is required).
struct DegenerateSignal : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct CheckpointError : Error {
  using Error::Error;
};

}  // namespace sepkit

#endif  // SEPKIT_COMMON_H_
