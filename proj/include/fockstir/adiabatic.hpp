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
#pragma once

#include "fockstir/amplitudes.hpp"
#include "fockstir/model.hpp"
#include "fockstir/quadrature.hpp"

#include <array>
#include <optional>
#include <string>

namespace fockstir {

/// Dark states Phi1, Phi2 (eigenvalue 0) and bright states Phi3, Phi4 (+/- Omega).
std::array<Eigen::Vector4d, 4> adiabatic_basis(const MixingAngles& angles);

/// Real orthogonal U whose columns are Phi1..Phi4.
Eigen::Matrix4d transform_matrix(const MixingAngles& angles);

struct AdiabaticFrame {
    MixingAngles angles;
    Eigen::Matrix4d u = Eigen::Matrix4d::Identity();
    Eigen::Vector4d eigenvalues = Eigen::Vector4d::Zero();
};

AdiabaticFrame adiabatic_frame(const PulseSchedule& s, double t);

/// Ratio max(|theta'|, |phi'|) / Omega above which adiabatic following is flagged.
inline constexpr double kAdiabaticityThreshold = 0.1;

struct EffectiveCoupling {
    Eigen::Matrix4cd matrix = Eigen::Matrix4cd::Zero();
    double adiabaticity_ratio = 0.0;
    std::optional<std::string> warning;
};

/**
 * Adiabatic-frame coupling with dark-bright terms dropped: the dark block
 * is [[0, -i theta' sin phi], [i theta' sin phi, 0]] and the bright block
 * diag(Omega, -Omega). A warning is attached when the local ratio exceeds
 * `threshold`; the matrix is returned regardless.
 */
EffectiveCoupling effective_coupling(const PulseSchedule& s, double t,
                                     double threshold = kAdiabaticityThreshold);

/// Exact U^T W U + i (dU^T/dt) U, including the dark-bright blocks.
Eigen::Matrix4cd exact_frame_coupling(const PulseSchedule& s, double t);

/// Integral of theta' sin phi over [a, b].
double gamma_integral(const PulseSchedule& s, double a, double b,
                      const QuadratureOptions& options = {});

/**
 * Dark-state rotation angle: theta' sin phi integrated over the schedule
 * window, wrapped to [-pi, pi].
 *
 * With theta and phi on the [0, pi/2] branch the value is negative for the
 * superposition ordering (the state 4 amplitude ends up negative); the
 * transferred fraction is sin^2(gamma) either way.
 */
double mixing_angle_gamma(const PulseSchedule& s, const QuadratureOptions& options = {});

/// Accumulated bright-state phase S(t) = integral of Omega from t_start to t.
double dynamical_phase(const PulseSchedule& s, double t, const QuadratureOptions& options = {});

/// Dark-block rotation by gamma, bright block diag(exp(-iS), exp(iS)).
Eigen::Matrix4cd evolution_operator(double gamma, double s_phase);

/// (cos gamma, 0, 0, sin gamma): cos(gamma)|n>|1> + sin(gamma)|n+1>|4>.
AmplitudeBlock asymptotic_state(double gamma, int n = 0);

struct AdiabaticSolution {
    double gamma = 0.0;
    double dynamical_phase = 0.0;
    AmplitudeBlock final_amplitudes;
};

/// Adiabatic prediction for a schedule starting in state 1. Throws
/// ConfigError when the schedule fails the ordering check.
AdiabaticSolution adiabatic_solution(const PulseSchedule& s, const QuadratureOptions& options = {});

} // namespace fockstir
