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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "qdgate/analysis.hpp"
#include "qdgate/dynamics.hpp"
#include "qdgate/model.hpp"

namespace qdgate {

/// Channels of (photon 1, photon 2). Basis order is aa, ab, ba, bb.
enum class BasisState { kAA = 0, kAB = 1, kBA = 2, kBB = 3 };

inline constexpr std::array<BasisState, 4> kAllBasisStates = {
    BasisState::kAA, BasisState::kAB, BasisState::kBA, BasisState::kBB};

std::string_view to_string(BasisState state);
BasisState parse_basis_state(std::string_view name);

inline bool photon1_in_a(BasisState s) {
    return s == BasisState::kAA || s == BasisState::kAB;
}
inline bool photon2_in_a(BasisState s) {
    return s == BasisState::kAA || s == BasisState::kBA;
}

/// What photon 2 sees when the QD is still in its ground state.
enum class BareCavityModel {
    kDecoupled,       // cavity only
    kDetunedExciton,  // exciton present, pushed up by delta_bind
};

/// How the part of photon 1 that was not stored enters the aa element.
enum class ResidualModel {
    kDiscard,            // photon 2 always meets the biexciton transition
    kAmplitudeWeighted,  // sqrt(p) biexciton branch + sqrt(1 - p) bare branch
};

std::string_view to_string(BareCavityModel model);
std::string_view to_string(ResidualModel model);
std::string_view to_string(KappaConvention convention);

/// Step boundaries: step 1 on [0, T1), step 2 on [T1, T2), step 3 on [T2, T_end].
struct ProtocolTimes {
    double T1 = 0.0;
    double T2 = 0.0;
    double T_end = 0.0;

    bool operator==(const ProtocolTimes &) const = default;
};

struct Numerics {
    std::size_t n_modes = 2000;
    double bandwidth = 20.0;
    double dt = 1e-3;
    double envelope_dt = 1e-3;
    std::size_t sample_every = 100;

    bool operator==(const Numerics &) const = default;
};

struct GateScenario {
    BasisState input_state = BasisState::kAA;
    PulseSpec photon1_pulse;
    PulseSpec photon2_pulse;
    ProtocolTimes times;
    SystemParams params;
    Numerics numerics;
    double ramp_time = 0.0;
    double biexciton_coupling_factor = 1.0;
    BareCavityModel bare_cavity_model = BareCavityModel::kDecoupled;
    ResidualModel residual_model = ResidualModel::kDiscard;

    ModeGrid grid() const;
    /// Common grid [0, T_end] for all input and output envelopes.
    TimeGrid envelope_grid() const;

    /// Throws kInvalidScenario when a pulse leaves its window:
    /// t0_1 - 6w >= 0, t0_1 < T1, T1 <= t0_2 - 6w, t0_2 + 6w <= T2 < T_end.
    void validate() const;

    bool operator==(const GateScenario &) const = default;
};

/// Same setup apart from the input state.
bool same_setup(const GateScenario &a, const GateScenario &b);

struct PhotonRun {
    Trajectory trajectory;
    Envelope input;
    Envelope output;
    FidelityReport fidelity;
};

struct Photon1Run : PhotonRun {
    /// |alpha(T1)|^2
    double stored_excitation_prob = 0.0;
};

/// Photon 1 in channel a over [0, T_end]: QD resonant in steps 1 and 3,
/// exciton pushed up by delta_bind in step 2 (cavity meets the XX line).
Photon1Run run_photon1(const GateScenario &scenario);

/// Photon 2 in channel a over the step-2 window [T1, T2]. With the QD
/// excited it meets the resonant biexciton line (coupling g times the
/// biexciton factor); otherwise the bare-cavity model applies.
PhotonRun run_photon2(const GateScenario &scenario, bool qd_excited);

/// Time on the step grid maximizing |alpha|^2 while photon 1 is absorbed by
/// the resonant QD, searched up to t0_1 + 6w. Used to place T1.
double find_storage_time(const SystemParams &params, const Numerics &numerics,
                         const PulseSpec &photon1_pulse);

struct NamedTrajectory {
    std::string name;
    Trajectory trajectory;
};

struct ScenarioResult {
    GateScenario scenario;
    /// Absent for b-channel photons, which pass unchanged.
    std::optional<Envelope> photon1_in, photon1_out, photon2_in, photon2_out;
    double fidelity1 = 1.0, fidelity2 = 1.0;
    double phase1 = 0.0, phase2 = 0.0;
    double delay1 = 0.0, delay2 = 0.0;
    std::optional<double> stored_excitation_prob;
    /// Product of per-photon overlap amplitudes; b photons contribute 1.
    cplx gate_element{1.0, 0.0};
    std::vector<NamedTrajectory> trajectories;

    BasisState input_state() const {
        return scenario.input_state;
    }
    /// |gate_element|
    double state_fidelity() const;
};

ScenarioResult run_scenario(const GateScenario &scenario);

/// All four basis states, sharing the three underlying photon runs (which
/// execute concurrently). Results are in basis order.
std::array<ScenarioResult, 4> run_all_states(const GateScenario &base);

/// Phase picked up by an a-channel photon 1; the gate applies it to the
/// b-channel photon 1 so relative phases match the ideal gate.
double correction_phase(const Photon1Run &run);

struct GateMatrix {
    Eigen::Matrix4cd elements = Eigen::Matrix4cd::Zero();
    Eigen::Matrix4cd target = ideal_target();
    double correction_phase = 0.0;

    /// |tr(target^dagger elements)| / 4
    double match() const;

    static Eigen::Matrix4cd ideal_target();
};

/// Diagonal matrix from the four basis results (any order). b-channel
/// photon-1 entries carry exp(i correction) taken from the a-channel
/// photon-1 phase. Throws kInconsistentInputs unless all four states are
/// present with the same setup.
GateMatrix assemble_gate_matrix(std::span<const ScenarioResult> results);

struct SuperpositionResult {
    /// Unnormalized, over aa, ab, ba, bb.
    Eigen::Vector4cd amplitudes;
    double concurrence = 0.0;
};

/// 2 |c_aa c_bb - c_ab c_ba| of the normalized state.
double concurrence(const Eigen::Vector4cd &amplitudes);

/// Applies the gate to (|a> + |b>)(|a> + |b>) / 2.
SuperpositionResult apply_to_superposition(const GateMatrix &matrix);

}  // namespace qdgate
