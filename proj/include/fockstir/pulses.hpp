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

#include "fockstir/quadrature.hpp"

#include <string>
#include <vector>

namespace fockstir {

/// Gaussian envelope amplitude * exp(-(t - center)^2 / width^2).
struct PulseEnvelope {
    double amplitude = 0.0;
    double center = 0.0;
    double width = 1.0;

    double value(double t) const;
    /// d/dt of value(t).
    double derivative(double t) const;
    /// log(value(t)); -inf when the amplitude is zero.
    double log_value(double t) const;
    /// d/dt log(value(t)), finite even where value(t) underflows.
    double log_derivative(double t) const;

    bool is_zero() const { return amplitude == 0.0; }

    friend bool operator==(const PulseEnvelope&, const PulseEnvelope&) = default;
};

double envelope_value(const PulseEnvelope& env, double t);

/// The two laser envelopes, the cavity coupling and the photon manifold they act in.
struct PulseSchedule {
    PulseEnvelope w1;
    PulseEnvelope w2;
    PulseEnvelope beta;
    int n = 0;
    double t_start = 0.0;
    double t_end = 0.0;
};

/// Relative floor below which an envelope counts as switched off.
inline constexpr double kBoundaryFloor = 1e-6;
/// Half-widths of padding around the outermost pulse centers in the default window.
inline constexpr double kWindowPadding = 6.0;

/// [min center - 6 max width, max center + 6 max width] over the non-zero envelopes.
std::pair<double, double> default_window(const PulseEnvelope& w1, const PulseEnvelope& w2,
                                         const PulseEnvelope& beta);

/// Schedule over the default window.
PulseSchedule make_schedule(const PulseEnvelope& w1, const PulseEnvelope& w2,
                            const PulseEnvelope& beta, int n = 0);

/// Throws ConfigError naming the first violated schedule invariant.
void validate_schedule(const PulseSchedule& s, double boundary_floor = kBoundaryFloor);

/**
 * Superposition-preparation schedule with A1 = A2 = 20, A_beta = 4,
 * widths 10 / 20 / 20. W1 is centred at 0, the cavity coupling leads it
 * by 10 and W2 trails W1 by `delay`.
 */
PulseSchedule reference_schedule(double delay = 20.0);

/// Moves W2 so that center(W2) - center(W1) = delay and refits the default window.
PulseSchedule with_delay(PulseSchedule s, double delay);

/// S' = integral of the rms Rabi frequency over the schedule window.
double effective_pulse_area(const PulseSchedule& s, const QuadratureOptions& options = {});

struct OrderingCondition {
    std::string name;
    double achieved = 0.0;
    double expected = 0.0;
    bool passed = false;
};

struct OrderingReport {
    double theta_start = 0.0;
    double phi_start = 0.0;
    double theta_end = 0.0;
    double phi_end = 0.0;
    std::vector<OrderingCondition> conditions;

    bool passed() const;
};

inline constexpr double kBoundaryAngleTol = 1e-3;

/**
 * Checks the superposition ordering at the window edges: the cavity
 * coupling precedes W1 (theta = 0 at the start), outlasts it (theta = 0 at
 * the end), and W2 switches off last (phi = pi/2 at the end).
 */
OrderingReport schedule_ordering_check(const PulseSchedule& s, double angle_tol = kBoundaryAngleTol);

} // namespace fockstir
