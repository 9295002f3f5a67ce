// Copyright 2026 The qdgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qdgate {

enum class ErrorKind {
    kInvalidArgument,
    kBandwidthExceeded,
    kStepTooLarge,
    kScheduleGap,
    kInvalidScenario,
    kUndefinedPhase,
    kInconsistentInputs,
    kDegenerateState,
    kConfigParse,
    kConfigValidation,
};

const char *error_kind_name(ErrorKind kind);

/// Numerical failures (bandwidth, stability, phase of an empty signal)
/// as opposed to bad inputs. The CLI maps these to distinct exit codes.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {
    }

    ErrorKind kind() const noexcept {
        return kind_;
    }

   private:
    ErrorKind kind_;
};

}  // namespace qdgate
