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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "qdgate/protocol.hpp"

namespace qdgate {

/// Default Gaussian width (units of 1/g).
inline constexpr double kDefaultPulseWidth = 0.8;

/// Every free parameter of a gate run. Unset optional times are derived:
///   t0_1  = 6 w
///   T1    = storage peak of photon 1 (see find_storage_time)
///   t0_2  = T1 + 6 w
///   T2    = t0_2 + 6 max(w, 1)
///   T_end = T2 + 15
struct RunConfig {
    SystemParams params;
    Numerics numerics;
    double width = kDefaultPulseWidth;
    std::optional<double> t0_1, t0_2;
    std::optional<double> T1, T2, T_end;
    double ramp_time = 0.0;
    double biexciton_coupling_factor = 1.0;
    BareCavityModel bare_cavity_model = BareCavityModel::kDecoupled;
    ResidualModel residual_model = ResidualModel::kDiscard;
    std::string state = "all";
    std::string output_dir = "out";

    /// Throws kConfigValidation naming the violated precondition.
    void validate() const;
};

/// Parses INI-style text: [section] headers, `key = value` lines, full-line
/// comments starting with ';' or '#'. Sections and keys:
///
///   [params]    g, kappa, gamma, delta_bind, delta_cav, kappa_convention (field|energy)
///   [grid]      n_modes, bandwidth
///   [pulses]    w, t0_1, t0_2
///   [schedule]  T1 (number or "auto"), T2, T_end, ramp_time
///   [numerics]  dt, envelope_dt, sample_every
///   [options]   biexciton_coupling_factor, bare_cavity_model (decoupled|detuned_exciton),
///               residual_model (discard|amplitude_weighted)
///   [run]       state (aa|ab|ba|bb|all), out
///
/// Unknown sections or keys are rejected. Throws kConfigParse with the line
/// number on syntax errors and kConfigValidation on bad values.
RunConfig parse_config(std::istream &in);
RunConfig load_config(const std::filesystem::path &path);

/// Resolves derived times (running the storage search when T1 is unset) and
/// returns the gate scenario for `config.state` (aa when state is "all").
GateScenario make_scenario(const RunConfig &config);

}  // namespace qdgate
