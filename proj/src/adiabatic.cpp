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
#include "fockstir/adiabatic.hpp"

#include "fockstir/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fockstir {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

struct BasisDerivatives {
    Eigen::Matrix4d d_theta;
    Eigen::Matrix4d d_phi;
};

BasisDerivatives transform_derivatives(const MixingAngles& a) {
    const double st = std::sin(a.theta), ct = std::cos(a.theta);
    const double sp = std::sin(a.phi), cp = std::cos(a.phi);
    BasisDerivatives d;
    d.d_theta << -st, sp * ct, kInvSqrt2 * cp * ct, kInvSqrt2 * cp * ct,
                 0.0, 0.0, 0.0, 0.0,
                 0.0, 0.0, 0.0, 0.0,
                 -ct, -sp * st, -kInvSqrt2 * cp * st, -kInvSqrt2 * cp * st;
    d.d_phi << 0.0, cp * st, -kInvSqrt2 * sp * st, -kInvSqrt2 * sp * st,
               0.0, 0.0, 0.0, 0.0,
               0.0, sp, kInvSqrt2 * cp, kInvSqrt2 * cp,
               0.0, cp * ct, -kInvSqrt2 * sp * ct, -kInvSqrt2 * sp * ct;
    return d;
}

} // namespace

std::array<Eigen::Vector4d, 4> adiabatic_basis(const MixingAngles& angles) {
    const double st = std::sin(angles.theta), ct = std::cos(angles.theta);
    const double sp = std::sin(angles.phi), cp = std::cos(angles.phi);
    return {Eigen::Vector4d(ct, 0.0, 0.0, -st),
            Eigen::Vector4d(sp * st, 0.0, -cp, sp * ct),
            kInvSqrt2 * Eigen::Vector4d(cp * st, 1.0, sp, cp * ct),
            kInvSqrt2 * Eigen::Vector4d(cp * st, -1.0, sp, cp * ct)};
}

Eigen::Matrix4d transform_matrix(const MixingAngles& angles) {
    const auto basis = adiabatic_basis(angles);
    Eigen::Matrix4d u;
    for (int k = 0; k < 4; ++k) {
        u.col(k) = basis[k];
    }
    return u;
}

AdiabaticFrame adiabatic_frame(const PulseSchedule& s, double t) {
    AdiabaticFrame frame;
    frame.angles = mixing_angles(s, t);
    frame.u = transform_matrix(frame.angles);
    frame.eigenvalues << 0.0, 0.0, frame.angles.omega, -frame.angles.omega;
    return frame;
}

EffectiveCoupling effective_coupling(const PulseSchedule& s, double t, double threshold) {
    const MixingAngles a = mixing_angles(s, t);
    const AngleRates r = angle_rates(s, t);
    EffectiveCoupling out;
    const cplx dark(0.0, r.theta_dot * std::sin(a.phi));
    out.matrix(0, 1) = -dark;
    out.matrix(1, 0) = dark;
    out.matrix(2, 2) = a.omega;
    out.matrix(3, 3) = -a.omega;

    const double rate = std::max(std::abs(r.theta_dot), std::abs(r.phi_dot));
    if (a.omega > 0.0) {
        out.adiabaticity_ratio = rate / a.omega;
    } else {
        out.adiabaticity_ratio = rate > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    if (out.adiabaticity_ratio > threshold) {
        std::ostringstream msg;
        msg << "adiabaticity violated at t=" << t << ": max(|theta'|, |phi'|)/Omega = " << out.adiabaticity_ratio
            << " > " << threshold;
        out.warning = msg.str();
    }
    return out;
}

Eigen::Matrix4cd exact_frame_coupling(const PulseSchedule& s, double t) {
    const MixingAngles a = mixing_angles(s, t);
    const AngleRates r = angle_rates(s, t);
    const Eigen::Matrix4d u = transform_matrix(a);
    const BasisDerivatives d = transform_derivatives(a);
    const Eigen::Matrix4d u_dot = d.d_theta * r.theta_dot + d.d_phi * r.phi_dot;
    const Eigen::Matrix4d w = coupling_matrix(s, t).entries;
    Eigen::Matrix4cd out = (u.transpose() * w * u).cast<cplx>();
    out += cplx(0.0, 1.0) * (u_dot.transpose() * u).cast<cplx>();
    return out;
}

double gamma_integral(const PulseSchedule& s, double a, double b, const QuadratureOptions& options) {
    auto integrand = [&s](double t) { return angle_rates(s, t).theta_dot * std::sin(mixing_angles(s, t).phi); };
    return integrate(integrand, a, b, options).value;
}

double mixing_angle_gamma(const PulseSchedule& s, const QuadratureOptions& options) {
    return std::remainder(gamma_integral(s, s.t_start, s.t_end, options), 2.0 * std::numbers::pi);
}

double dynamical_phase(const PulseSchedule& s, double t, const QuadratureOptions& options) {
    if (t <= s.t_start) {
        return 0.0;
    }
    return integrate([&s](double x) { return rabi_frequency(s, x); }, s.t_start, t, options).value;
}

Eigen::Matrix4cd evolution_operator(double gamma, double s_phase) {
    Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
    r(0, 0) = std::cos(gamma);
    r(0, 1) = -std::sin(gamma);
    r(1, 0) = std::sin(gamma);
    r(1, 1) = std::cos(gamma);
    r(2, 2) = std::polar(1.0, -s_phase);
    r(3, 3) = std::polar(1.0, s_phase);
    return r;
}

AmplitudeBlock asymptotic_state(double gamma, int n) {
    AmplitudeBlock out;
    out.n = n;
    out.b << std::cos(gamma), 0.0, 0.0, std::sin(gamma);
    return out;
}

AdiabaticSolution adiabatic_solution(const PulseSchedule& s, const QuadratureOptions& options) {
    validate_schedule(s);
    const OrderingReport ordering = schedule_ordering_check(s);
    if (!ordering.passed()) {
        for (const auto& c : ordering.conditions) {
            if (!c.passed) {
                std::ostringstream msg;
                msg << "schedule ordering violated: " << c.name << ", got " << c.achieved;
                throw ConfigError(msg.str());
            }
        }
    }
    AdiabaticSolution out;
    out.gamma = mixing_angle_gamma(s, options);
    out.dynamical_phase = dynamical_phase(s, s.t_end, options);
    out.final_amplitudes = asymptotic_state(out.gamma, s.n);
    return out;
}

} // namespace fockstir
