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

#include <cmath>
#include <numbers>

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "qdgate/error.hpp"
#include "qdgate/dynamics.hpp"

using namespace qdgate;

namespace {

ErrorKind kind_of(auto fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::kInvalidArgument;
}

// Deterministic pseudo-random state with unit norm.
ExcitationState mixed_state(std::size_t n, double seed) {
    ExcitationState s = ExcitationState::zero(n);
    s.alpha = {0.3 * std::sin(seed), 0.2};
    s.beta = {-0.1, 0.4 * std::cos(seed)};
    for (std::size_t k = 0; k < n; ++k) {
        s.modes[static_cast<Eigen::Index>(k)] = {std::sin(1.3 * k + seed), std::cos(0.7 * k - seed)};
    }
    s *= cplx{1.0 / std::sqrt(norm(s)), 0.0};
    return s;
}

// Dense generator A with x' = A x over x = (alpha, beta, beta_1..beta_N).
Eigen::MatrixXcd generator(const SystemParams &p, const ModeGrid &grid, double delta_qd) {
    const auto n = static_cast<Eigen::Index>(grid.n_modes());
    const double kp = p.kappa_prime(grid);
    const cplx i{0.0, 1.0};
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n + 2, n + 2);
    a(0, 0) = -i * delta_qd - p.gamma;
    a(0, 1) = p.g;
    a(1, 0) = -p.g;
    a(1, 1) = -i * p.delta_cav;
    for (Eigen::Index k = 0; k < n; ++k) {
        a(1, k + 2) = kp;
        a(k + 2, 1) = -kp;
        a(k + 2, k + 2) = -i * grid.detuning(static_cast<std::size_t>(k));
    }
    return a;
}

Eigen::VectorXcd as_vector(const ExcitationState &s) {
    Eigen::VectorXcd v(s.modes.size() + 2);
    v << s.alpha, s.beta, s.modes;
    return v;
}

double max_diff(const ExcitationState &a, const ExcitationState &b) {
    return (as_vector(a) - as_vector(b)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("dynamics") {
    TEST_CASE("norm of simple states") {
        ExcitationState s = ExcitationState::zero(3);
        CHECK(norm(s) == 0.0);
        s.alpha = 1.0;
        CHECK(norm(s) == 1.0);
        s = ExcitationState::zero(3);
        s.beta = 1.0 / std::sqrt(2.0);
        s.modes[1] = 1.0 / std::sqrt(2.0);
        CHECK(norm(s) == doctest::Approx(1.0).epsilon(1e-15));
    }

    TEST_CASE("rhs reads off the amplitude equations") {
        const ModeGrid grid = build_mode_grid(4, 2.0);
        const StarkSchedule sched = StarkSchedule::constant(0.0, 10.0, 0.0);
        SystemParams p;
        const double kp = p.kappa_prime(grid);

        ExcitationState s = ExcitationState::zero(4);
        s.alpha = 1.0;
        ExcitationState d = rhs(s, 1.0, p, grid, sched);
        CHECK(d.alpha == cplx{0.0, 0.0});
        CHECK(d.beta == cplx{-1.0, 0.0});
        CHECK(d.modes.cwiseAbs().maxCoeff() == 0.0);

        s = ExcitationState::zero(4);
        s.beta = 1.0;
        d = rhs(s, 1.0, p, grid, sched);
        CHECK(d.alpha == cplx{1.0, 0.0});
        CHECK(d.beta == cplx{0.0, 0.0});
        for (Eigen::Index k = 0; k < 4; ++k) {
            CHECK(d.modes[k] == cplx{-kp, 0.0});
        }

        p.gamma = 0.1;
        s = ExcitationState::zero(4);
        s.alpha = 1.0;
        CHECK(rhs(s, 1.0, p, grid, sched).alpha == cplx{-0.1, 0.0});

        CHECK(kind_of([&] { rhs(s, 11.0, p, grid, sched); }) == ErrorKind::kScheduleGap);
    }

    TEST_CASE("schedule validation and evaluation") {
        CHECK(kind_of([] { StarkSchedule({{0, 1, 0}, {1.5, 2, 3}}); }) == ErrorKind::kScheduleGap);
        CHECK(kind_of([] { StarkSchedule({{0, 1, 0}}, 0.2); }) != ErrorKind::kScheduleGap);

        const StarkSchedule s({{0, 1, 0}, {1, 2, 5}, {2, 3, 0}});
        CHECK(s.value(0.5) == 0.0);
        CHECK(s.value(1.0) == 5.0);  // right-continuous
        CHECK(s.value(1.999) == 5.0);
        CHECK(s.value(2.0) == 0.0);
        CHECK(s.value(3.0) == 0.0);
        CHECK(s.max_abs_value() == 5.0);
        CHECK(kind_of([&] { s.value(3.5); }) == ErrorKind::kScheduleGap);

        const StarkSchedule ramped({{0, 1, 0}, {1, 2, 5}}, 0.05);
        CHECK(ramped.value(1.0) == doctest::Approx(0.0));
        CHECK(ramped.value(1.025) == doctest::Approx(2.5));
        CHECK(ramped.value(1.05) == doctest::Approx(5.0));
    }

    TEST_CASE("empty cavity returns the photon") {
        const ModeGrid grid = build_mode_grid(400, 10.0);
        SystemParams p;
        p.g = 0.0;
        PulseSpec pulse;
        const TimeGrid times = TimeGrid::spanning(0.0, 12.0, 1e-3);
        const auto beta = envelope_to_modes(synthesize(pulse, times), grid, 0.0);
        const StarkSchedule sched = StarkSchedule::constant(0.0, 30.0, 0.0);
        const Trajectory t = integrate(ExcitationState::from_modes(beta), p, grid, sched,
                                       {0.0, 30.0, 1e-3, 1000});
        const double modes = t.final_state.modes.squaredNorm();
        CHECK(std::abs(modes - 1.0) < 1e-6);
    }

    TEST_CASE("norm conserved without loss, non-increasing with loss") {
        const ModeGrid grid = build_mode_grid(200, 8.0);
        const StarkSchedule sched({{0, 20, 0}, {20, 60, 20}, {60, 100, 0}});
        SystemParams p;
        const ExcitationState s0 = mixed_state(200, 0.4);
        const Trajectory t = integrate(s0, p, grid, sched, {0.0, 100.0, 2e-3, 50});
        double drift = 0.0;
        for (std::size_t i = 0; i < t.times.size(); ++i) {
            drift = std::max(drift, std::abs(t.norm[i] - 1.0) / std::max(t.times[i], 1.0));
        }
        CHECK(drift < 1e-8);

        p.gamma = 0.1;
        const Trajectory lossy = integrate(s0, p, grid, sched, {0.0, 100.0, 2e-3, 1});
        for (std::size_t i = 1; i < lossy.norm.size(); ++i) {
            CHECK(lossy.norm[i] <= lossy.norm[i - 1] + 1e-10);
        }
        CHECK(lossy.norm.back() < 0.99);
    }

    TEST_CASE("brute-force matrix exponential agreement") {
        for (std::size_t n : {2u, 5u, 8u}) {
            CAPTURE(n);
            const ModeGrid grid = build_mode_grid(n, 3.0);
            SystemParams p;
            p.gamma = 0.05;
            p.delta_cav = 0.3;
            const std::vector<StarkSchedule::Segment> segs = {{0, 2.5, 0}, {2.5, 6.1, 4.0}, {6.1, 9, -1}};
            const StarkSchedule sched(segs);
            const ExcitationState s0 = mixed_state(n, 1.1);

            const Trajectory t = integrate(s0, p, grid, sched, {0.0, 9.0, 1e-3, 1000});

            Eigen::VectorXcd x = as_vector(s0);
            for (const auto &seg : segs) {
                x = (generator(p, grid, seg.delta_qd) * (seg.t_end - seg.t_start)).exp() * x;
            }
            const double diff = (as_vector(t.final_state) - x).cwiseAbs().maxCoeff();
            CHECK(diff < 1e-6);
        }
    }

    TEST_CASE("halving the step changes little") {
        const ModeGrid grid = build_mode_grid(300, 10.0);
        const StarkSchedule sched({{0, 3, 0}, {3, 7, 20}, {7, 10, 0}});
        const ExcitationState s0 = mixed_state(300, 2.0);
        const SystemParams p;
        const Trajectory a = integrate(s0, p, grid, sched, {0.0, 10.0, 2e-3, 1000});
        const Trajectory b = integrate(s0, p, grid, sched, {0.0, 10.0, 1e-3, 1000});
        CHECK(max_diff(a.final_state, b.final_state) < 1e-7);
    }

    TEST_CASE("integration is linear in the initial state") {
        const ModeGrid grid = build_mode_grid(100, 5.0);
        const StarkSchedule sched({{0, 2, 0}, {2, 4, 3}}, 0.02);
        SystemParams p;
        p.gamma = 0.02;
        const IntegrationSettings cfg{0.0, 4.0, 1e-3, 100};
        const ExcitationState s1 = mixed_state(100, 0.1);
        const ExcitationState s2 = mixed_state(100, 0.9);
        const cplx a{0.6, -0.2}, b{-0.3, 0.5};
        const Trajectory combined = integrate(a * s1 + b * s2, p, grid, sched, cfg);
        const ExcitationState sum = a * integrate(s1, p, grid, sched, cfg).final_state +
                                    b * integrate(s2, p, grid, sched, cfg).final_state;
        CHECK(max_diff(combined.final_state, sum) < 1e-9);
    }

    TEST_CASE("step too large is rejected") {
        const ModeGrid grid = build_mode_grid(100, 20.0);
        const StarkSchedule sched = StarkSchedule::constant(0.0, 1.0, 20.0);
        const ExcitationState s0 = ExcitationState::zero(100);
        CHECK(kind_of([&] { integrate(s0, SystemParams{}, grid, sched, {0.0, 1.0, 0.02, 1}); }) ==
              ErrorKind::kStepTooLarge);
        CHECK(kind_of([&] { integrate(s0, SystemParams{}, grid, sched, {0.0, 2.0, 1e-3, 1}); }) ==
              ErrorKind::kScheduleGap);
    }

    TEST_CASE("trajectory sampling") {
        const ModeGrid grid = build_mode_grid(10, 2.0);
        const StarkSchedule sched = StarkSchedule::constant(0.0, 1.05, 0.0);
        const Trajectory t =
            integrate(mixed_state(10, 0.0), SystemParams{}, grid, sched, {0.0, 1.05, 0.01, 10});
        REQUIRE(t.times.size() == 12);
        CHECK(t.times.front() == 0.0);
        CHECK(t.times[1] == doctest::Approx(0.1));
        CHECK(t.times.back() == doctest::Approx(1.05));
    }
}
