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

#include "qdgate/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "qdgate/error.hpp"
#include "qdgate/io.hpp"

namespace qdgate {

namespace {

constexpr double kPulseHalfSpan = 6.0;

double pulse_start(const PulseSpec &p) {
    if (p.kind == PulseSpec::Kind::kGaussian) {
        return p.t0 - kPulseHalfSpan * p.width;
    }
    for (std::size_t i = 0; i < p.samples.values.size(); ++i) {
        if (p.samples.values[i] != cplx{0.0, 0.0}) {
            return p.samples.times.at(i);
        }
    }
    return p.samples.times.start;
}

double pulse_end(const PulseSpec &p) {
    if (p.kind == PulseSpec::Kind::kGaussian) {
        return p.t0 + kPulseHalfSpan * p.width;
    }
    for (std::size_t i = p.samples.values.size(); i-- > 0;) {
        if (p.samples.values[i] != cplx{0.0, 0.0}) {
            return p.samples.times.at(i);
        }
    }
    return p.samples.times.start;
}

/// Concatenates two trajectories that meet at a common time.
Trajectory join(Trajectory first, Trajectory second) {
    auto append = [](std::vector<double> &dst, const std::vector<double> &src) {
        dst.insert(dst.end(), src.begin() + 1, src.end());
    };
    append(first.times, second.times);
    append(first.alpha_abs2, second.alpha_abs2);
    append(first.beta_abs2, second.beta_abs2);
    append(first.norm, second.norm);
    first.final_state = std::move(second.final_state);
    return first;
}

IntegrationSettings settings_for(const Numerics &numerics, double t_start, double t_end) {
    return IntegrationSettings{t_start, t_end, numerics.dt, numerics.sample_every};
}

Envelope add(const Envelope &a, cplx wa, const Envelope &b, cplx wb) {
    Envelope out{a.times, std::vector<cplx>(a.values.size())};
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        out.values[i] = wa * a.values[i] + wb * b.values[i];
    }
    return out;
}

struct SharedRuns {
    std::optional<Photon1Run> photon1;
    std::optional<PhotonRun> photon2_excited;
    std::optional<PhotonRun> photon2_bare;
};

ScenarioResult assemble_result(const GateScenario &scenario, const SharedRuns &runs) {
    ScenarioResult result;
    result.scenario = scenario;
    const BasisState s = scenario.input_state;

    cplx amplitude1{1.0, 0.0};
    if (photon1_in_a(s)) {
        const Photon1Run &p1 = *runs.photon1;
        result.photon1_in = p1.input;
        result.photon1_out = p1.output;
        result.fidelity1 = p1.fidelity.value;
        result.phase1 = correction_phase(p1);
        result.delay1 = p1.fidelity.optimal_delay;
        result.stored_excitation_prob = p1.stored_excitation_prob;
        result.trajectories.push_back({"photon1", p1.trajectory});
        amplitude1 = p1.fidelity.overlap_amplitude;
    }

    cplx amplitude2{1.0, 0.0};
    if (photon2_in_a(s)) {
        const bool qd_excited = s == BasisState::kAA;
        const PhotonRun &main = qd_excited ? *runs.photon2_excited : *runs.photon2_bare;
        result.photon2_in = main.input;
        result.trajectories.push_back({"photon2", main.trajectory});

        FidelityReport report = main.fidelity;
        Envelope output = main.output;
        if (qd_excited && scenario.residual_model == ResidualModel::kAmplitudeWeighted) {
            const double p = std::clamp(*result.stored_excitation_prob, 0.0, 1.0);
            const PhotonRun &bare = *runs.photon2_bare;
            output = add(main.output, std::sqrt(p), bare.output, std::sqrt(1.0 - p));
            report = fidelity(main.input, output);
            result.trajectories.push_back({"photon2_bare", bare.trajectory});
        }
        result.photon2_out = output;
        result.fidelity2 = report.value;
        result.delay2 = report.optimal_delay;
        if (report.value < 1e-12) {
            throw Error(ErrorKind::kUndefinedPhase, "photon 2 output has no overlap with its input");
        }
        result.phase2 = wrap_phase(std::arg(report.overlap_amplitude));
        amplitude2 = report.overlap_amplitude;
    }

    result.gate_element = amplitude1 * amplitude2;
    return result;
}

}  // namespace

std::string_view to_string(BasisState state) {
    switch (state) {
        case BasisState::kAA:
            return "aa";
        case BasisState::kAB:
            return "ab";
        case BasisState::kBA:
            return "ba";
        case BasisState::kBB:
            return "bb";
    }
    return "?";
}

BasisState parse_basis_state(std::string_view name) {
    for (BasisState s : kAllBasisStates) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw Error(ErrorKind::kInvalidArgument,
                "unknown input state '" + std::string(name) + "' (expected aa, ab, ba or bb)");
}

std::string_view to_string(BareCavityModel model) {
    return model == BareCavityModel::kDecoupled ? "decoupled" : "detuned_exciton";
}

std::string_view to_string(ResidualModel model) {
    return model == ResidualModel::kDiscard ? "discard" : "amplitude_weighted";
}

std::string_view to_string(KappaConvention convention) {
    return convention == KappaConvention::kField ? "field" : "energy";
}

ModeGrid GateScenario::grid() const {
    return build_mode_grid(numerics.n_modes, numerics.bandwidth, 0.0);
}

TimeGrid GateScenario::envelope_grid() const {
    return TimeGrid::spanning(0.0, times.T_end, numerics.envelope_dt);
}

void GateScenario::validate() const {
    params.validate();
    const auto fail = [](const std::string &what) {
        throw Error(ErrorKind::kInvalidScenario, what);
    };
    // Window edges are usually computed as sums like T1 + 6w - 6w.
    const double slack = 1e-9 * std::max(1.0, times.T_end);
    if (!(times.T1 < times.T2 && times.T2 < times.T_end)) {
        fail("protocol times must satisfy T1 < T2 < T_end");
    }
    if (pulse_start(photon1_pulse) < -slack) {
        fail("photon 1 pulse starts before t = 0 (t0_1 - 6w < 0)");
    }
    if (!(photon1_pulse.t0 < times.T1)) {
        fail("photon 1 must peak before the end of step 1 (t0_1 < T1)");
    }
    if (pulse_start(photon2_pulse) < times.T1 - slack) {
        fail("photon 2 pulse starts before step 2 (t0_2 - 6w < T1)");
    }
    if (pulse_end(photon2_pulse) > times.T2 + slack) {
        fail("photon 2 pulse extends past step 2 (t0_2 + 6w > T2)");
    }
    if (!(biexciton_coupling_factor > 0.0)) {
        fail("biexciton coupling factor must be positive");
    }
}

bool same_setup(const GateScenario &a, const GateScenario &b) {
    GateScenario x = a;
    x.input_state = b.input_state;
    return x == b;
}

Photon1Run run_photon1(const GateScenario &scenario) {
    scenario.validate();
    const ModeGrid grid = scenario.grid();
    const TimeGrid env_grid = scenario.envelope_grid();
    const ProtocolTimes &T = scenario.times;
    const Numerics &num = scenario.numerics;

    const StarkSchedule schedule({{0.0, T.T1, 0.0},
                                  {T.T1, T.T2, scenario.params.delta_bind},
                                  {T.T2, T.T_end, 0.0}},
                                 scenario.ramp_time);

    Photon1Run run;
    run.input = synthesize(scenario.photon1_pulse, env_grid);
    const ExcitationState initial =
        ExcitationState::from_modes(envelope_to_modes(run.input, grid, 0.0));

    Trajectory absorb =
        integrate(initial, scenario.params, grid, schedule, settings_for(num, 0.0, T.T1));
    run.stored_excitation_prob = std::norm(absorb.final_state.alpha);
    const ExcitationState at_t1 = absorb.final_state;
    Trajectory rest =
        integrate(at_t1, scenario.params, grid, schedule, settings_for(num, T.T1, T.T_end));
    run.trajectory = join(std::move(absorb), std::move(rest));

    run.output = modes_to_envelope(run.trajectory.final_state.mode_vector(), grid, T.T_end, env_grid);
    run.fidelity = fidelity(run.input, run.output);
    return run;
}

PhotonRun run_photon2(const GateScenario &scenario, bool qd_excited) {
    scenario.validate();
    const ModeGrid grid = scenario.grid();
    const TimeGrid env_grid = scenario.envelope_grid();
    const ProtocolTimes &T = scenario.times;

    SystemParams params = scenario.params;
    double delta_qd = 0.0;
    if (qd_excited) {
        params.g *= scenario.biexciton_coupling_factor;
    } else if (scenario.bare_cavity_model == BareCavityModel::kDetunedExciton) {
        delta_qd = params.delta_bind;
    } else {
        params.g = 0.0;
    }
    const StarkSchedule schedule({{T.T1, T.T2, delta_qd}}, 0.0);

    PhotonRun run;
    run.input = synthesize(scenario.photon2_pulse, env_grid);
    const ExcitationState initial =
        ExcitationState::from_modes(envelope_to_modes(run.input, grid, T.T1));
    run.trajectory =
        integrate(initial, params, grid, schedule, settings_for(scenario.numerics, T.T1, T.T2));
    run.output = modes_to_envelope(run.trajectory.final_state.mode_vector(), grid, T.T2, env_grid);
    run.fidelity = fidelity(run.input, run.output);
    return run;
}

double find_storage_time(const SystemParams &params, const Numerics &numerics,
                         const PulseSpec &photon1_pulse) {
    params.validate();
    const double search_end = photon1_pulse.t0 + kPulseHalfSpan * photon1_pulse.width;
    const ModeGrid grid = build_mode_grid(numerics.n_modes, numerics.bandwidth, 0.0);
    const TimeGrid env_grid = TimeGrid::spanning(0.0, search_end, numerics.envelope_dt);
    const Envelope input = synthesize(photon1_pulse, env_grid);
    const ExcitationState initial = ExcitationState::from_modes(envelope_to_modes(input, grid, 0.0));
    const StarkSchedule schedule = StarkSchedule::constant(0.0, search_end, 0.0);
    const Trajectory traj = integrate(initial, params, grid, schedule,
                                      IntegrationSettings{0.0, search_end, numerics.dt, 1});
    const auto best = std::max_element(traj.alpha_abs2.begin(), traj.alpha_abs2.end());
    return traj.times[static_cast<std::size_t>(std::distance(traj.alpha_abs2.begin(), best))];
}

double ScenarioResult::state_fidelity() const {
    return std::abs(gate_element);
}

ScenarioResult run_scenario(const GateScenario &scenario) {
    scenario.validate();
    SharedRuns runs;
    const BasisState s = scenario.input_state;
    if (photon1_in_a(s)) {
        runs.photon1 = run_photon1(scenario);
    }
    if (s == BasisState::kAA) {
        runs.photon2_excited = run_photon2(scenario, true);
        if (scenario.residual_model == ResidualModel::kAmplitudeWeighted) {
            runs.photon2_bare = run_photon2(scenario, false);
        }
    }
    if (s == BasisState::kBA) {
        runs.photon2_bare = run_photon2(scenario, false);
    }
    return assemble_result(scenario, runs);
}

std::array<ScenarioResult, 4> run_all_states(const GateScenario &base) {
    base.validate();
    auto f1 = std::async(std::launch::async, [&] { return run_photon1(base); });
    auto f2 = std::async(std::launch::async, [&] { return run_photon2(base, true); });
    auto f3 = std::async(std::launch::async, [&] { return run_photon2(base, false); });
    SharedRuns runs;
    runs.photon1 = f1.get();
    runs.photon2_excited = f2.get();
    runs.photon2_bare = f3.get();

    std::array<ScenarioResult, 4> out;
    for (BasisState s : kAllBasisStates) {
        GateScenario scenario = base;
        scenario.input_state = s;
        out[static_cast<std::size_t>(s)] = assemble_result(scenario, runs);
    }
    return out;
}

double correction_phase(const Photon1Run &run) {
    if (run.fidelity.value < 1e-12) {
        throw Error(ErrorKind::kUndefinedPhase, "photon 1 output vanishes; correction undefined");
    }
    return wrap_phase(std::arg(run.fidelity.overlap_amplitude));
}

Eigen::Matrix4cd GateMatrix::ideal_target() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    m(2, 2) = cplx{-1.0, 0.0};
    return m;
}

double GateMatrix::match() const {
    return std::abs((target.adjoint() * elements).trace()) / 4.0;
}

GateMatrix assemble_gate_matrix(std::span<const ScenarioResult> results) {
    std::array<const ScenarioResult *, 4> by_state{};
    for (const ScenarioResult &r : results) {
        const auto idx = static_cast<std::size_t>(r.input_state());
        if (by_state[idx] != nullptr) {
            throw Error(ErrorKind::kInconsistentInputs,
                        "basis state " + std::string(to_string(r.input_state())) + " given twice");
        }
        by_state[idx] = &r;
    }
    for (BasisState s : kAllBasisStates) {
        if (by_state[static_cast<std::size_t>(s)] == nullptr) {
            throw Error(ErrorKind::kInconsistentInputs,
                        "basis state " + std::string(to_string(s)) + " missing");
        }
    }
    for (const ScenarioResult *r : by_state) {
        if (!same_setup(r->scenario, by_state[0]->scenario)) {
            throw Error(ErrorKind::kInconsistentInputs,
                        "scenario results were computed with different parameters");
        }
    }

    GateMatrix m;
    m.correction_phase = by_state[static_cast<std::size_t>(BasisState::kAB)]->phase1;
    const cplx correction = std::polar(1.0, m.correction_phase);
    for (BasisState s : kAllBasisStates) {
        const auto idx = static_cast<std::size_t>(s);
        cplx element = by_state[idx]->gate_element;
        if (!photon1_in_a(s)) {
            element *= correction;
        }
        m.elements(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) = element;
    }
    return m;
}

double concurrence(const Eigen::Vector4cd &c) {
    const double n2 = c.squaredNorm();
    if (!(n2 > 0.0)) {
        throw Error(ErrorKind::kDegenerateState, "zero-norm two-photon state");
    }
    return 2.0 * std::abs(c[0] * c[3] - c[1] * c[2]) / n2;
}

SuperpositionResult apply_to_superposition(const GateMatrix &matrix) {
    const Eigen::Vector4cd input = Eigen::Vector4cd::Constant(cplx{0.5, 0.0});
    SuperpositionResult out;
    out.amplitudes = matrix.elements * input;
    out.concurrence = concurrence(out.amplitudes);
    return out;
}

}  // namespace qdgate
