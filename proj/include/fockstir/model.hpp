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

#include "fockstir/pulses.hpp"

#include <Eigen/Dense>

namespace fockstir {

/// Resonant coupling matrix of one photon manifold over atomic states 1..4
/// (state 4 carries one extra photon).
struct CouplingMatrix {
    Eigen::Matrix4d entries = Eigen::Matrix4d::Zero();
    int n = 0;
};

CouplingMatrix coupling_matrix(double w1, double w2, double beta, int n);
CouplingMatrix coupling_matrix(const PulseSchedule& s, double t);

struct MixingAngles {
    double theta = 0.0;
    double phi = 0.0;
    double omega = 0.0;
};

/// Rms Rabi frequency sqrt(W1^2 + W2^2 + (n+1) beta^2).
double rabi_frequency(const PulseSchedule& s, double t);

/// Angles from instantaneous values. A vanishing atan2 pair yields 0.
MixingAngles mixing_angles(double w1, double w2, double beta, int n);

/**
 * Angles of the schedule at t.
 *
 * The tangents are ratios of Gaussians, so they are evaluated from the
 * log-envelopes; the result is the one-sided limit wherever the envelope
 * values themselves underflow.
 */
MixingAngles mixing_angles(const PulseSchedule& s, double t);

struct AngleRates {
    double theta_dot = 0.0;
    double phi_dot = 0.0;
};

/// Closed-form time derivatives of theta and phi.
AngleRates angle_rates(const PulseSchedule& s, double t);

} // namespace fockstir
