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
#include <vector>

#include "qdgate/model.hpp"

namespace qdgate {

struct FidelityReport {
    double value = 0.0;
    /// f_out(t) best matches f_in(t - optimal_delay).
    double optimal_delay = 0.0;
    /// int f_in*(t - tau) f_out(t) dt at tau = optimal_delay, per unit-norm f_in.
    cplx overlap_amplitude{0.0, 0.0};
};

/// Delay-optimized overlap F = max_tau |int f_in*(t - tau) f_out(t) dt|.
///
/// The delay is scanned over every grid shift (FFT cross-correlation) and
/// refined by a parabola through the three samples around the maximum.
/// f_in is normalized to unit norm; f_out is not, so lost amplitude lowers F.
/// Both envelopes must share the time step and be sample-aligned.
FidelityReport fidelity(const Envelope &f_in, const Envelope &f_out);

/// arg of the optimal overlap amplitude, in (-pi, pi]. Throws
/// kUndefinedPhase when the overlap vanishes.
double aggregate_phase(const Envelope &f_in, const Envelope &f_out);

struct PhaseProfile {
    std::vector<double> times;
    std::vector<double> phase;
};

/// arg f_out(t) - arg f_in(t - tau), unwrapped along t, on the samples of
/// f_out where |f_in(t - tau)| exceeds 1e-3 of its peak. The branch puts the
/// value at the input peak in (-pi, pi].
PhaseProfile phase_profile(const Envelope &f_in, const Envelope &f_out, double tau);

/// Columns t, phase.
void write_phase_csv(std::ostream &out, const PhaseProfile &profile);

enum class QdMode {
    kResonantTwoLevel,  // QD transition on the rotating-frame origin
    kDetunedTwoLevel,   // QD transition at +delta_bind
    kDecoupled,         // bare cavity
};

/// Steady-state reflection coefficient for a monochromatic field at detuning
/// omega, from the continuum limit of the amplitude equations:
///   r = 1 - K / (K/2 + i(D_c - omega) + g^2 / (gamma + i(D_qd - omega)))
/// with K the cavity energy decay rate.
cplx reflection_oracle(double omega, const SystemParams &params, QdMode mode);

}  // namespace qdgate
