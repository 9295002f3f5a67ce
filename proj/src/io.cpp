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

#include "qdgate/io.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "qdgate/error.hpp"

namespace qdgate {

const char *error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::kInvalidArgument:
            return "invalid-argument";
        case ErrorKind::kBandwidthExceeded:
            return "bandwidth-exceeded";
        case ErrorKind::kStepTooLarge:
            return "step-too-large";
        case ErrorKind::kScheduleGap:
            return "schedule-gap";
        case ErrorKind::kInvalidScenario:
            return "invalid-scenario";
        case ErrorKind::kUndefinedPhase:
            return "undefined-phase";
        case ErrorKind::kInconsistentInputs:
            return "inconsistent-inputs";
        case ErrorKind::kDegenerateState:
            return "degenerate-state";
        case ErrorKind::kConfigParse:
            return "config-parse";
        case ErrorKind::kConfigValidation:
            return "config-validation";
    }
    return "unknown";
}

bool is_numerical(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::kBandwidthExceeded:
        case ErrorKind::kStepTooLarge:
        case ErrorKind::kUndefinedPhase:
        case ErrorKind::kDegenerateState:
            return true;
        default:
            return false;
    }
}

std::string format_number(double value) {
    if (value == 0.0) {
        // Avoid "-0".
        return "0";
    }
    return fmt::format("{:.12g}", value);
}

double round_sig12(double value) {
    if (!std::isfinite(value) || value == 0.0) {
        return value == 0.0 ? 0.0 : value;
    }
    return std::stod(fmt::format("{:.12g}", value));
}

double wrap_phase(double phase) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double wrapped = std::remainder(phase, two_pi);
    if (wrapped <= -std::numbers::pi) {
        wrapped += two_pi;
    }
    return wrapped;
}

double phase_distance(double a, double b) {
    return std::abs(std::remainder(a - b, 2.0 * std::numbers::pi));
}

}  // namespace qdgate
