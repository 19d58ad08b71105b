/* Copyright 2026 The jointsched Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

   http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "jointsched/error.hpp"

namespace jointsched {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kDuplicateId: return "DuplicateId";
    case Errc::kNoFeasibleConfig: return "NoFeasibleConfig";
    case Errc::kInvariantViolation: return "InvariantViolation";
    case Errc::kExecutorFailure: return "ExecutorFailure";
    case Errc::kMissingEntry: return "MissingEntry";
    case Errc::kInfeasibleEntry: return "InfeasibleEntry";
    case Errc::kParseError: return "ParseError";
    case Errc::kNegativeLatency: return "NegativeLatency";
    case Errc::kHorizonOverflow: return "HorizonOverflow";
    case Errc::kNumericalFailure: return "NumericalFailure";
    case Errc::kTooLarge: return "TooLarge";
    case Errc::kCapacityViolation: return "CapacityViolation";
    case Errc::kUnknownPreset: return "UnknownPreset";
    case Errc::kInvalidPlan: return "InvalidPlan";
    case Errc::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what),
      code_(code) {}

}  // namespace jointsched
