// Copyright 2026 The fockstir Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <doctest.h>

#include "oracles.hpp"

#include "fockstir/adiabatic.hpp"
#include "fockstir/errors.hpp"
#include "fockstir/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

using namespace fockstir;

namespace {

IntegratorOptions coarse_grid(double tol = 1e-10) {
    IntegratorOptions o;
    o.tol = tol;
    o.grid_points = 201;
    return o;
}

} // namespace

TEST_CASE("all-off schedule leaves the initial state untouched") {
    const PulseSchedule s = make_schedule({0.0, 0.0, 10.0}, {0.0, 20.0, 20.0}, {0.0, -10.0, 20.0});
    const Trajectory traj = integrate_schrodinger(s, AmplitudeBlock::basis(1), coarse_grid());
    for (const AmplitudeBlock& b : traj.states) {
        CHECK(b.b == Eigen::Vector4cd(1, 0, 0, 0));
    }
    CHECK(traj.diagnostics.max_p2 == 0.0);
}

TEST_CASE("grid covers the window and the final sample is the end state") {
    const PulseSchedule s = reference_schedule(20.0);
    const Trajectory traj = integrate_schrodinger(s, AmplitudeBlock::basis(1), coarse_grid());
    REQUIRE(traj.times.size() == 201);
    REQUIRE(traj.states.size() == 201);
    CHECK(traj.times.front() == s.t_start);
    CHECK(traj.times.back() == s.t_end);
    for (int i = 0; i < 4; ++i) {
        CHECK(traj.populations[i].size() == 201);
    }
    CHECK(traj.diagnostics.accepted_steps > 0);
}

TEST_CASE("reference schedule transfers sin^2 gamma into state 4") {
    const PulseSchedule s = reference_schedule(20.0);
    const double gamma = mixing_angle_gamma(s);
    const Trajectory traj = integrate_schrodinger(s, AmplitudeBlock::basis(1), coarse_grid());
    const AmplitudeBlock& f = traj.final_state();
    CHECK(std::abs(f.population(1) - std::pow(std::cos(gamma), 2)) <= 1e-2);
    CHECK(std::abs(f.population(4) - std::pow(std::sin(gamma), 2)) <= 1e-2);
    CHECK(traj.diagnostics.max_p2 <= 1e-2);
    // Dark-state following keeps the amplitudes real up to a common phase.
    CHECK(std::abs(f.b(0).imag()) <= 1e-2);
    CHECK(f.b(3).real() * std::sin(gamma) > 0.0);
}

TEST_CASE("global phase of the initial state is carried through") {
    const PulseSchedule s = reference_schedule(20.0);
    const cplx phase = std::polar(1.0, 0.7);
    AmplitudeBlock b0 = AmplitudeBlock::basis(1);
    const Eigen::Vector4cd plain = integrate_schrodinger(s, b0, coarse_grid()).final_state().b;
    b0.b *= phase;
    const Eigen::Vector4cd rotated = integrate_schrodinger(s, b0, coarse_grid()).final_state().b;
    CHECK((rotated - phase * plain).norm() <= 1e-8);
}

TEST_CASE("bad options and unnormalised inputs are config errors") {
    const PulseSchedule s = reference_schedule(20.0);
    IntegratorOptions o;
    o.tol = 1e-3;
    CHECK_THROWS_AS(integrate_schrodinger(s, AmplitudeBlock::basis(1), o), ConfigError);
    o.tol = 1e-15;
    CHECK_THROWS_AS(integrate_schrodinger(s, AmplitudeBlock::basis(1), o), ConfigError);
    o.tol = 1e-10;
    o.grid_points = 1;
    CHECK_THROWS_AS(integrate_schrodinger(s, AmplitudeBlock::basis(1), o), ConfigError);

    AmplitudeBlock b0;
    b0.b << 1.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(integrate_schrodinger(s, b0, coarse_grid()), ConfigError);
    CHECK_THROWS_AS(integrate_in_adiabatic_frame(s, Eigen::Vector4cd::Zero(), coarse_grid()), ConfigError);
}

TEST_CASE("step budget exhaustion is a numerical error") {
    IntegratorOptions o = coarse_grid();
    o.max_steps = 10;
    CHECK_THROWS_AS(integrate_schrodinger(reference_schedule(20.0), AmplitudeBlock::basis(1), o), NumericalError);
}

TEST_CASE("norm drift stays within the tolerance budget") {
    for (double tol : {1e-6, 1e-8, 1e-10}) {
        const Trajectory traj =
            integrate_schrodinger(reference_schedule(20.0), AmplitudeBlock::basis(1), coarse_grid(tol));
        for (std::size_t k = 0; k < traj.states.size(); ++k) {
            CHECK(traj.norm_drift(k) <= 100 * tol);
        }
        CHECK(traj.diagnostics.max_norm_drift <= 100 * tol);
    }
}

TEST_CASE("propagator is unitary and preserves inner products") {
    // Bright-state columns oscillate at Omega, so a tighter tolerance is used here.
    const Eigen::Matrix4cd p = propagator(reference_schedule(20.0), coarse_grid(1e-12));
    CHECK((p.adjoint() * p - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() <= 1e-8);

    const Eigen::Vector4cd x = Eigen::Vector4cd(1.0, cplx(0, 1), 0.5, -0.2).normalized();
    const Eigen::Vector4cd y = Eigen::Vector4cd(0.3, 0.0, cplx(1, 1), 0.4).normalized();
    CHECK(std::abs((p * x).dot(p * y) - x.dot(y)) <= 1e-8);

    AmplitudeBlock b0;
    b0.b = x;
    const Eigen::Vector4cd via_traj = integrate_schrodinger(reference_schedule(20.0), b0, coarse_grid(1e-12)).final_state().b;
    CHECK((via_traj - p * x).norm() <= 1e-8);
}

TEST_CASE("final state converges as the tolerance is tightened") {
    const PulseSchedule s = reference_schedule(20.0);
    const Eigen::Vector4cd ref = integrate_schrodinger(s, AmplitudeBlock::basis(1), coarse_grid(1e-12)).final_state().b;
    double prev = 1.0;
    for (double tol : {1e-5, 1e-7, 1e-9}) {
        const double err =
            (integrate_schrodinger(s, AmplitudeBlock::basis(1), coarse_grid(tol)).final_state().b - ref).norm();
        CHECK(err <= 1000 * tol);
        CHECK(err <= prev);
        prev = err;
    }
}

TEST_CASE("adaptive result agrees with fixed-step RK4") {
    const PulseSchedule s = reference_schedule(20.0);
    const Eigen::Vector4cd rk = oracle::rk4(s, Eigen::Vector4cd(1, 0, 0, 0), 200000);
    const Eigen::Vector4cd dp = integrate_schrodinger(s, AmplitudeBlock::basis(1), coarse_grid()).final_state().b;
    CHECK((rk - dp).norm() <= 1e-7);
}

TEST_CASE("manifold index only rescales the cavity coupling") {
    PulseSchedule s = reference_schedule(20.0);
    s.n = 3;
    s.beta.amplitude /= 2.0; // sqrt(n+1) beta is unchanged
    const Eigen::Vector4cd a = integrate_schrodinger(s, AmplitudeBlock::basis(1, 3), coarse_grid()).final_state().b;
    const Eigen::Vector4cd b =
        integrate_schrodinger(reference_schedule(20.0), AmplitudeBlock::basis(1), coarse_grid()).final_state().b;
    CHECK((a - b).norm() <= 1e-8);
}

TEST_CASE("adiabatic-frame evolution rotates the dark pair by gamma") {
    const PulseSchedule s = reference_schedule(20.0);
    const Trajectory traj = integrate_in_adiabatic_frame(s, Eigen::Vector4cd(1, 0, 0, 0), coarse_grid());
    const Eigen::Vector4cd c = traj.final_state().b;
    const double gamma = mixing_angle_gamma(s);
    CHECK(std::abs(c(0) - std::cos(gamma)) <= 1e-3);
    CHECK(std::abs(c(1) - std::sin(gamma)) <= 1e-3);
    CHECK(std::abs(c(2)) == 0.0);
    CHECK(std::abs(c(3)) == 0.0);

    const std::vector<AmplitudeBlock> lab = to_lab_frame(s, traj);
    REQUIRE(lab.size() == traj.states.size());
    CHECK(lab.front().population(1) == doctest::Approx(1.0));
    const Eigen::Vector4cd exact =
        integrate_schrodinger(s, AmplitudeBlock::basis(1), coarse_grid()).final_state().b;
    CHECK(std::abs(std::abs(exact.dot(lab.back().b)) - 1.0) <= 1e-2);
}

TEST_CASE("exact evolution stays in the dark subspace up to a small leakage") {
    const PulseSchedule s = reference_schedule(20.0);
    const Trajectory traj = integrate_schrodinger(s, AmplitudeBlock::basis(1), coarse_grid());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const Eigen::Matrix4d u = transform_matrix(mixing_angles(s, traj.times[k]));
        const Eigen::Vector4cd c = u.transpose().cast<cplx>() * traj.states[k].b;
        CHECK(std::norm(c(2)) + std::norm(c(3)) <= 1e-2);
    }
}

TEST_CASE("frozen mixing angle keeps the adiabatic coefficients constant") {
    // No w1: theta stays 0 so the dark pair never rotates.
    const PulseSchedule s = make_schedule({0.0, 0.0, 10.0}, {20.0, 20.0, 20.0}, {4.0, -10.0, 20.0});
    const Eigen::Vector4cd c0 = Eigen::Vector4cd(0.6, 0.8, 0.0, 0.0);
    const Trajectory traj = integrate_in_adiabatic_frame(s, c0, coarse_grid());
    for (const AmplitudeBlock& b : traj.states) {
        CHECK((b.b - c0).norm() <= 1e-12);
    }
}

TEST_CASE("adiabaticity ratios scale inversely with amplitude") {
    const PulseSchedule s = reference_schedule(20.0);
    PulseSchedule big = s;
    big.w1.amplitude *= 10;
    big.w2.amplitude *= 10;
    big.beta.amplitude *= 10;
    const AdiabaticityReport a = adiabaticity_report(s);
    const AdiabaticityReport b = adiabaticity_report(big);
    CHECK(b.max_theta_ratio == doctest::Approx(a.max_theta_ratio / 10).epsilon(1e-9));
    CHECK(b.max_phi_ratio == doctest::Approx(a.max_phi_ratio / 10).epsilon(1e-9));
    CHECK(b.effective_area == doctest::Approx(10 * a.effective_area).epsilon(1e-9));
}

TEST_CASE("reference schedule is adiabatic") {
    const AdiabaticityReport r = adiabaticity_report(reference_schedule(20.0));
    CHECK(r.max_theta_ratio < 0.1);
    CHECK(r.max_phi_ratio < 0.1);
    CHECK_FALSE(r.flagged);
    CHECK(r.effective_area > 100.0);
    CHECK(r.threshold == 0.1);
}

TEST_CASE("schedule with a gap between the pulses is flagged") {
    // Cavity pulse long gone before w1 arrives: Omega is tiny where theta moves.
    const PulseSchedule s = make_schedule({20.0, 0.0, 5.0}, {20.0, 10.0, 5.0}, {4.0, -60.0, 5.0});
    const AdiabaticityReport r = adiabaticity_report(s);
    CHECK(r.flagged);
    CHECK(r.max_theta_ratio > 0.1);
}

TEST_CASE("trajectory CSV has a header and one full-precision row per sample") {
    const PulseSchedule s = reference_schedule(20.0);
    IntegratorOptions o = coarse_grid();
    o.grid_points = 11;
    const Trajectory traj = integrate_schrodinger(s, AmplitudeBlock::basis(1), o);
    std::ostringstream out;
    write_trajectory_csv(out, traj);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,p1,p2,p3,p4,norm_drift");
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 5);
        ++rows;
    }
    CHECK(rows == 11);
    std::istringstream first(out.str().substr(out.str().find('\n') + 1));
    double t0 = 0.0;
    first >> t0;
    CHECK(t0 == s.t_start);
}
