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

#include <cstddef>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "qdgate/model.hpp"

namespace qdgate {

/// Single-excitation amplitudes: QD excited (alpha), cavity photon (beta)
/// and one photon in waveguide mode k (modes[k]).
struct ExcitationState {
    cplx alpha{0.0, 0.0};
    cplx beta{0.0, 0.0};
    Eigen::VectorXcd modes;

    static ExcitationState zero(std::size_t n_modes);
    static ExcitationState from_modes(const std::vector<cplx> &beta_k);

    std::vector<cplx> mode_vector() const;

    ExcitationState &operator+=(const ExcitationState &other);
    ExcitationState &operator*=(cplx factor);
};

ExcitationState operator+(ExcitationState lhs, const ExcitationState &rhs);
ExcitationState operator*(cplx factor, ExcitationState state);

/// |alpha|^2 + |beta|^2 + sum_k |beta_k|^2
double norm(const ExcitationState &state);

/// Piecewise QD detuning Delta_QD(t). Segments are contiguous; each holds a
/// constant value. Switches are instantaneous and right-continuous unless
/// `ramp_time` > 0, in which case the value moves linearly from the old to
/// the new level over [boundary, boundary + ramp_time).
class StarkSchedule {
   public:
    struct Segment {
        double t_start;
        double t_end;
        double delta_qd;
    };

    explicit StarkSchedule(std::vector<Segment> segments, double ramp_time = 0.0);

    /// Constant detuning over [t_start, t_end).
    static StarkSchedule constant(double t_start, double t_end, double delta_qd);

    const std::vector<Segment> &segments() const {
        return segments_;
    }
    double ramp_time() const {
        return ramp_time_;
    }
    double t_begin() const {
        return segments_.front().t_start;
    }
    double t_end() const {
        return segments_.back().t_end;
    }
    bool covers(double t) const;

    /// Throws kScheduleGap outside [t_begin, t_end].
    double value(double t) const;

    /// Largest |Delta_QD| over the whole schedule.
    double max_abs_value() const;

    /// Times where the detuning is not smooth (segment boundaries and ramp ends).
    std::vector<double> breakpoints() const;

    /// The schedule is a chain of linear pieces; integrators evaluate
    /// within one piece so a step ending on a boundary sees the left limit.
    std::size_t piece_index(double t) const;
    double value_in_piece(std::size_t piece, double t) const;

   private:
    struct Piece {
        double t_start;
        double t_end;
        double v_start;
        double v_end;
    };

    std::vector<Segment> segments_;
    std::vector<Piece> pieces_;
    double ramp_time_;
};

/// d/dt of the amplitudes:
///   alpha'  = g beta + (-i Delta_QD(t) - gamma) alpha
///   beta'   = -i Delta_c beta - g alpha + kappa' sum_k beta_k
///   beta_k' = -i Delta_k beta_k - kappa' beta
ExcitationState rhs(const ExcitationState &state, double t, const SystemParams &params,
                    const ModeGrid &grid, const StarkSchedule &schedule);

struct Trajectory {
    std::vector<double> times;
    std::vector<double> alpha_abs2;
    std::vector<double> beta_abs2;
    std::vector<double> norm;
    ExcitationState final_state;
};

struct IntegrationSettings {
    double t_start = 0.0;
    double t_end = 0.0;
    double dt = 1e-3;
    std::size_t sample_every = 100;
};

/// Fixed-step classical RK4 from t_start to t_end. Steps that straddle a
/// schedule breakpoint are split there, and the last step is shortened to
/// land on t_end exactly. The trajectory is sampled on the global step grid
/// every `sample_every` steps, plus at t_end.
///
/// Throws kStepTooLarge unless dt * (max|Delta_k| + max|Delta_QD| + |Delta_c|) < 0.5.
Trajectory integrate(const ExcitationState &initial, const SystemParams &params,
                     const ModeGrid &grid, const StarkSchedule &schedule,
                     const IntegrationSettings &settings);

/// Columns t, alpha_abs2, beta_abs2, norm.
void write_trajectory_csv(std::ostream &out, const Trajectory &trajectory);

}  // namespace qdgate
