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

#include <iosfwd>

#include "qdgate/protocol.hpp"

namespace qdgate {

/// Scenario JSON. Keys: input_state, fidelity1, fidelity2, phase1, phase2,
/// delay1, delay2, state_fidelity, gate_element_re, gate_element_im,
/// stored_excitation_prob (null for b-channel photon 1), params{...}.
/// Numbers carry 12 significant digits.
void write_scenario_json(std::ostream &out, const ScenarioResult &result);

/// Gate JSON. Keys: correction_phase, match, concurrence,
/// diagonal[{state, re, im, abs, arg}], superposition[{state, re, im}].
void write_gate_json(std::ostream &out, const GateMatrix &matrix);

}  // namespace qdgate
