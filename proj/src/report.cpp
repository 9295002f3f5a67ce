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

#include "qdgate/report.hpp"

#include <complex>
#include <ostream>
#include <string>

#include <json.hpp>

#include "qdgate/io.hpp"

namespace qdgate {

namespace {

using nlohmann::ordered_json;

// Shortest round-trip output of a 12-digit value has at most 12 digits.
double num(double v) {
    return round_sig12(v);
}

ordered_json params_json(const GateScenario &s) {
    ordered_json p;
    p["g"] = num(s.params.g);
    p["kappa"] = num(s.params.kappa);
    p["gamma"] = num(s.params.gamma);
    p["delta_bind"] = num(s.params.delta_bind);
    p["delta_cav"] = num(s.params.delta_cav);
    p["kappa_convention"] = std::string(to_string(s.params.convention));
    p["n_modes"] = s.numerics.n_modes;
    p["bandwidth"] = num(s.numerics.bandwidth);
    p["dt"] = num(s.numerics.dt);
    p["envelope_dt"] = num(s.numerics.envelope_dt);
    p["w"] = num(s.photon1_pulse.width);
    p["t0_1"] = num(s.photon1_pulse.t0);
    p["t0_2"] = num(s.photon2_pulse.t0);
    p["T1"] = num(s.times.T1);
    p["T2"] = num(s.times.T2);
    p["T_end"] = num(s.times.T_end);
    p["ramp_time"] = num(s.ramp_time);
    p["biexciton_coupling_factor"] = num(s.biexciton_coupling_factor);
    p["bare_cavity_model"] = std::string(to_string(s.bare_cavity_model));
    p["residual_model"] = std::string(to_string(s.residual_model));
    return p;
}

}  // namespace

void write_scenario_json(std::ostream &out, const ScenarioResult &r) {
    ordered_json j;
    j["input_state"] = std::string(to_string(r.input_state()));
    j["fidelity1"] = num(r.fidelity1);
    j["fidelity2"] = num(r.fidelity2);
    j["phase1"] = num(r.phase1);
    j["phase2"] = num(r.phase2);
    j["delay1"] = num(r.delay1);
    j["delay2"] = num(r.delay2);
    j["state_fidelity"] = num(r.state_fidelity());
    j["gate_element_re"] = num(r.gate_element.real());
    j["gate_element_im"] = num(r.gate_element.imag());
    if (r.stored_excitation_prob) {
        j["stored_excitation_prob"] = num(*r.stored_excitation_prob);
    } else {
        j["stored_excitation_prob"] = nullptr;
    }
    j["params"] = params_json(r.scenario);
    out << j.dump(2) << '\n';
}

void write_gate_json(std::ostream &out, const GateMatrix &m) {
    const SuperpositionResult sup = apply_to_superposition(m);
    ordered_json j;
    j["correction_phase"] = num(m.correction_phase);
    j["match"] = num(m.match());
    j["concurrence"] = num(sup.concurrence);
    ordered_json diag = ordered_json::array();
    ordered_json amps = ordered_json::array();
    for (BasisState s : kAllBasisStates) {
        const auto i = static_cast<Eigen::Index>(s);
        const cplx e = m.elements(i, i);
        diag.push_back({{"state", std::string(to_string(s))},
                        {"re", num(e.real())},
                        {"im", num(e.imag())},
                        {"abs", num(std::abs(e))},
                        {"arg", num(std::arg(e))}});
        amps.push_back({{"state", std::string(to_string(s))},
                        {"re", num(sup.amplitudes(i).real())},
                        {"im", num(sup.amplitudes(i).imag())}});
    }
    j["diagonal"] = diag;
    j["superposition"] = amps;
    out << j.dump(2) << '\n';
}

}  // namespace qdgate
