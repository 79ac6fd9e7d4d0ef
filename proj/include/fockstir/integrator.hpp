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
#include "fockstir/pulses.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace fockstir {

struct IntegratorOptions {
    double tol = 1e-10;
    std::size_t grid_points = 2001;
    std::size_t max_steps = 5'000'000;
};

inline constexpr double kMinTol = 1e-13;
inline constexpr double kMaxTol = 1e-4;

struct TrajectoryDiagnostics {
    double max_p2 = 0.0;
    double max_norm_drift = 0.0;
    double max_theta_ratio = 0.0;
    double max_phi_ratio = 0.0;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<AmplitudeBlock> states;
    std::array<std::vector<double>, 4> populations;
    TrajectoryDiagnostics diagnostics;

    const AmplitudeBlock& final_state() const { return states.back(); }
    /// |sum_i |b_i(t_k)|^2 - 1|
    double norm_drift(std::size_t k) const;
};

/**
 * Propagates i dB/dt = W(t) B with an adaptive Dormand-Prince 5(4) pair
 * from t_start to t_end. States are reported on a uniform grid through the
 * dense-output interpolant. No renormalisation is applied.
 */
Trajectory integrate_schrodinger(const PulseSchedule& s, const AmplitudeBlock& b0,
                                 const IntegratorOptions& options = {});

/// Full 4x4 propagator of the schedule's manifold from t_start to t_end.
Eigen::Matrix4cd propagator(const PulseSchedule& s, const IntegratorOptions& options = {});

/**
 * Propagates adiabatic-frame coefficients C under the effective coupling
 * (dark-bright terms dropped). The trajectory holds C, not B; use
 * to_lab_frame to map back through U.
 */
Trajectory integrate_in_adiabatic_frame(const PulseSchedule& s, const Eigen::Vector4cd& c0,
                                        const IntegratorOptions& options = {});

std::vector<AmplitudeBlock> to_lab_frame(const PulseSchedule& s, const Trajectory& adiabatic);

struct AdiabaticityReport {
    double max_theta_ratio = 0.0;
    double max_phi_ratio = 0.0;
    double t_theta_max = 0.0;
    double t_phi_max = 0.0;
    double effective_area = 0.0;
    double threshold = 0.0;
    bool flagged = false;

    double max_ratio() const { return std::max(max_theta_ratio, max_phi_ratio); }
};

/// Angle rates below this fraction of their peak over the window are not
/// counted; there the mixing angles are frozen and Omega may underflow.
inline constexpr double kRateFloor = 1e-3;
inline constexpr std::size_t kReportSamples = 20001;

/**
 * Worst-case |theta'|/Omega and |phi'|/Omega over the window, plus S'.
 * Flags the schedule when either ratio exceeds `threshold`.
 */
AdiabaticityReport adiabaticity_report(const PulseSchedule& s, double threshold = 0.1);

/// CSV with header t,p1,p2,p3,p4,norm_drift; every value at full precision.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

} // namespace fockstir
