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

#include "qdgate/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "qdgate/error.hpp"
#include "qdgate/io.hpp"

namespace qdgate {

namespace {

constexpr double kMaxRampTime = 0.1;
constexpr double kStabilityLimit = 0.5;
// Relative tolerance for comparing times on the step grid.
constexpr double kTimeSlack = 1e-9;

}  // namespace

// ---------------------------------------------------------------------------
// ExcitationState

ExcitationState ExcitationState::zero(std::size_t n_modes) {
    return ExcitationState{{0.0, 0.0}, {0.0, 0.0},
                           Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_modes))};
}

ExcitationState ExcitationState::from_modes(const std::vector<cplx> &beta_k) {
    ExcitationState s = zero(beta_k.size());
    for (std::size_t k = 0; k < beta_k.size(); ++k) {
        s.modes[static_cast<Eigen::Index>(k)] = beta_k[k];
    }
    return s;
}

std::vector<cplx> ExcitationState::mode_vector() const {
    return std::vector<cplx>(modes.data(), modes.data() + modes.size());
}

ExcitationState &ExcitationState::operator+=(const ExcitationState &other) {
    alpha += other.alpha;
    beta += other.beta;
    modes += other.modes;
    return *this;
}

ExcitationState &ExcitationState::operator*=(cplx factor) {
    alpha *= factor;
    beta *= factor;
    modes *= factor;
    return *this;
}

ExcitationState operator+(ExcitationState lhs, const ExcitationState &rhs) {
    lhs += rhs;
    return lhs;
}

ExcitationState operator*(cplx factor, ExcitationState state) {
    state *= factor;
    return state;
}

double norm(const ExcitationState &state) {
    return std::norm(state.alpha) + std::norm(state.beta) + state.modes.squaredNorm();
}

// ---------------------------------------------------------------------------
// StarkSchedule

StarkSchedule::StarkSchedule(std::vector<Segment> segments, double ramp_time)
    : segments_(std::move(segments)), ramp_time_(ramp_time) {
    if (segments_.empty()) {
        throw Error(ErrorKind::kInvalidArgument, "Stark schedule needs at least one segment");
    }
    if (!(ramp_time_ >= 0.0) || !(ramp_time_ < kMaxRampTime)) {
        throw Error(ErrorKind::kInvalidArgument, "ramp_time must lie in [0, 0.1)");
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment &s = segments_[i];
        if (!(s.t_end > s.t_start)) {
            throw Error(ErrorKind::kInvalidArgument, "Stark segment with non-positive duration");
        }
        if (i > 0 && s.t_start != segments_[i - 1].t_end) {
            throw Error(ErrorKind::kScheduleGap, "Stark segments must be contiguous");
        }
        if (i > 0 && ramp_time_ > 0.0 && ramp_time_ >= s.t_end - s.t_start) {
            throw Error(ErrorKind::kInvalidArgument, "ramp_time longer than a Stark segment");
        }
    }

    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment &s = segments_[i];
        double start = s.t_start;
        if (i > 0 && ramp_time_ > 0.0) {
            const double previous = segments_[i - 1].delta_qd;
            pieces_.push_back({start, start + ramp_time_, previous, s.delta_qd});
            start += ramp_time_;
        }
        pieces_.push_back({start, s.t_end, s.delta_qd, s.delta_qd});
    }
}

StarkSchedule StarkSchedule::constant(double t_start, double t_end, double delta_qd) {
    return StarkSchedule({{t_start, t_end, delta_qd}});
}

bool StarkSchedule::covers(double t) const {
    return t >= t_begin() && t <= t_end();
}

std::size_t StarkSchedule::piece_index(double t) const {
    if (!covers(t)) {
        throw Error(ErrorKind::kScheduleGap,
                    "time " + format_number(t) + " outside the Stark schedule [" +
                        format_number(t_begin()) + ", " + format_number(t_end()) + "]");
    }
    // Right-continuous: the piece whose [t_start, t_end) contains t; t_end
    // itself belongs to the last piece.
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                               [](double value, const Piece &p) { return value < p.t_start; });
    return static_cast<std::size_t>(std::distance(pieces_.begin(), it)) - 1;
}

double StarkSchedule::value_in_piece(std::size_t piece, double t) const {
    const Piece &p = pieces_.at(piece);
    if (p.v_start == p.v_end) {
        return p.v_start;
    }
    const double x = (t - p.t_start) / (p.t_end - p.t_start);
    return p.v_start + (p.v_end - p.v_start) * x;
}

double StarkSchedule::value(double t) const {
    return value_in_piece(piece_index(t), t);
}

double StarkSchedule::max_abs_value() const {
    double m = 0.0;
    for (const Segment &s : segments_) {
        m = std::max(m, std::abs(s.delta_qd));
    }
    return m;
}

std::vector<double> StarkSchedule::breakpoints() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < pieces_.size(); ++i) {
        out.push_back(pieces_[i].t_start);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Equations of motion

ExcitationState rhs(const ExcitationState &state, double t, const SystemParams &params,
                    const ModeGrid &grid, const StarkSchedule &schedule) {
    if (static_cast<std::size_t>(state.modes.size()) != grid.n_modes()) {
        throw Error(ErrorKind::kInvalidArgument, "state dimension does not match the mode grid");
    }
    const double delta_qd = schedule.value(t);
    const double kp = params.kappa_prime(grid);
    const cplx i{0.0, 1.0};

    ExcitationState d = ExcitationState::zero(grid.n_modes());
    d.alpha = params.g * state.beta + (-i * delta_qd - params.gamma) * state.alpha;
    d.beta = -i * params.delta_cav * state.beta - params.g * state.alpha + kp * state.modes.sum();
    for (std::size_t k = 0; k < grid.n_modes(); ++k) {
        const auto idx = static_cast<Eigen::Index>(k);
        d.modes[idx] = -i * grid.detuning(k) * state.modes[idx] - kp * state.beta;
    }
    return d;
}

namespace {

/// RK4 stepper holding preallocated stage buffers. Each stage costs one
/// pass over the modes plus one reduction for sum_k beta_k.
class Rk4Stepper {
   public:
    Rk4Stepper(const SystemParams &params, const ModeGrid &grid, const StarkSchedule &schedule)
        : schedule_(schedule),
          g_(params.g),
          gamma_(params.gamma),
          delta_cav_(params.delta_cav),
          kp_(params.kappa_prime(grid)) {
        const auto n = static_cast<Eigen::Index>(grid.n_modes());
        minus_i_detuning_.resize(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            minus_i_detuning_[k] = cplx{0.0, -grid.detuning(static_cast<std::size_t>(k))};
        }
        for (auto *buffer : {&k1_, &k2_, &k3_, &k4_, &tmp_}) {
            buffer->modes.resize(n);
        }
    }

    /// Advances `y` from t over h, evaluating Delta_QD within `piece`.
    void step(ExcitationState &y, double t, double h, std::size_t piece) {
        derivative(y, schedule_.value_in_piece(piece, t), k1_);
        axpy(y, 0.5 * h, k1_, tmp_);
        const double mid_delta = schedule_.value_in_piece(piece, t + 0.5 * h);
        derivative(tmp_, mid_delta, k2_);
        axpy(y, 0.5 * h, k2_, tmp_);
        derivative(tmp_, mid_delta, k3_);
        axpy(y, h, k3_, tmp_);
        derivative(tmp_, schedule_.value_in_piece(piece, t + h), k4_);

        const double w = h / 6.0;
        y.alpha += w * (k1_.alpha + 2.0 * k2_.alpha + 2.0 * k3_.alpha + k4_.alpha);
        y.beta += w * (k1_.beta + 2.0 * k2_.beta + 2.0 * k3_.beta + k4_.beta);
        y.modes.array() +=
            w * (k1_.modes.array() + 2.0 * k2_.modes.array() + 2.0 * k3_.modes.array() +
                 k4_.modes.array());
    }

   private:
    void derivative(const ExcitationState &y, double delta_qd, ExcitationState &out) const {
        const cplx i{0.0, 1.0};
        out.alpha = g_ * y.beta + (-i * delta_qd - gamma_) * y.alpha;
        out.beta = -i * delta_cav_ * y.beta - g_ * y.alpha + kp_ * y.modes.sum();
        out.modes.array() = minus_i_detuning_ * y.modes.array() - kp_ * y.beta;
    }

    static void axpy(const ExcitationState &y, double h, const ExcitationState &k,
                     ExcitationState &out) {
        out.alpha = y.alpha + h * k.alpha;
        out.beta = y.beta + h * k.beta;
        out.modes.array() = y.modes.array() + h * k.modes.array();
    }

    const StarkSchedule &schedule_;
    double g_, gamma_, delta_cav_, kp_;
    Eigen::ArrayXcd minus_i_detuning_;
    ExcitationState k1_, k2_, k3_, k4_, tmp_;
};

void record(Trajectory &traj, double t, const ExcitationState &y) {
    traj.times.push_back(t);
    traj.alpha_abs2.push_back(std::norm(y.alpha));
    traj.beta_abs2.push_back(std::norm(y.beta));
    traj.norm.push_back(norm(y));
}

}  // namespace

Trajectory integrate(const ExcitationState &initial, const SystemParams &params,
                     const ModeGrid &grid, const StarkSchedule &schedule,
                     const IntegrationSettings &settings) {
    const double t0 = settings.t_start;
    const double t1 = settings.t_end;
    const double dt = settings.dt;
    if (static_cast<std::size_t>(initial.modes.size()) != grid.n_modes()) {
        throw Error(ErrorKind::kInvalidArgument, "state dimension does not match the mode grid");
    }
    if (!(t1 > t0)) {
        throw Error(ErrorKind::kInvalidArgument, "integration needs t_end > t_start");
    }
    if (!(dt > 0.0) || settings.sample_every == 0) {
        throw Error(ErrorKind::kInvalidArgument, "integration needs dt > 0 and sample_every >= 1");
    }
    const double fastest =
        grid.max_abs_detuning() + schedule.max_abs_value() + std::abs(params.delta_cav);
    if (!(dt * fastest < kStabilityLimit)) {
        throw Error(ErrorKind::kStepTooLarge,
                    "dt * (max|D_k| + max|D_QD| + |D_c|) = " + format_number(dt * fastest) +
                        " must be < 0.5");
    }
    if (!schedule.covers(t0) || !schedule.covers(t1)) {
        throw Error(ErrorKind::kScheduleGap, "Stark schedule does not cover [" +
                                                 format_number(t0) + ", " + format_number(t1) +
                                                 "]");
    }

    Rk4Stepper stepper(params, grid, schedule);
    const std::vector<double> breaks = schedule.breakpoints();

    ExcitationState y = initial;
    Trajectory traj;
    const double span = t1 - t0;
    const auto n_steps = static_cast<std::size_t>(std::ceil(span / dt - kTimeSlack));
    const double eps = kTimeSlack * dt;

    record(traj, t0, y);
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double a = t0 + static_cast<double>(n) * dt;
        const double b = (n + 1 == n_steps) ? t1 : t0 + static_cast<double>(n + 1) * dt;

        double cursor = a;
        auto it = std::upper_bound(breaks.begin(), breaks.end(), a + eps);
        for (; it != breaks.end() && *it < b - eps; ++it) {
            stepper.step(y, cursor, *it - cursor, schedule.piece_index(0.5 * (cursor + *it)));
            cursor = *it;
        }
        stepper.step(y, cursor, b - cursor, schedule.piece_index(0.5 * (cursor + b)));

        if ((n + 1) % settings.sample_every == 0 || n + 1 == n_steps) {
            record(traj, b, y);
        }
    }
    traj.final_state = std::move(y);
    return traj;
}

void write_trajectory_csv(std::ostream &out, const Trajectory &trajectory) {
    out << "t,alpha_abs2,beta_abs2,norm\n";
    for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
        out << format_number(trajectory.times[i]) << ',' << format_number(trajectory.alpha_abs2[i])
            << ',' << format_number(trajectory.beta_abs2[i]) << ','
            << format_number(trajectory.norm[i]) << '\n';
    }
}

}  // namespace qdgate
