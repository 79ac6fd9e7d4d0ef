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
#include "fockstir/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fockstir {

namespace {

// A pair of envelopes known through their logs, rescaled so the larger is 1.
struct ScaledPair {
    double first = 0.0;
    double second = 0.0;
    double log_scale = -std::numeric_limits<double>::infinity();

    ScaledPair(double log_first, double log_second) {
        log_scale = std::max(log_first, log_second);
        if (std::isinf(log_scale)) {
            return;
        }
        first = std::exp(log_first - log_scale);
        second = std::exp(log_second - log_scale);
    }

    bool vanishes() const { return first == 0.0 && second == 0.0; }
    double angle() const { return std::atan2(first, second); }
    /// d/dt atan2(first, second) from the log-derivatives of both members.
    double angle_rate(double g_first, double g_second) const {
        if (vanishes()) {
            return 0.0;
        }
        return first * second * (g_first - g_second) / (first * first + second * second);
    }
};

struct AngleState {
    double theta = 0.0;
    double phi = 0.0;
    double theta_dot = 0.0;
    double phi_dot = 0.0;
};

AngleState angle_state(const PulseSchedule& s, double t) {
    const double log_manifold = 0.5 * std::log(static_cast<double>(s.n + 1));
    const double l1 = s.w1.log_value(t);
    const double lb = s.beta.log_value(t) + log_manifold;
    const double l2 = s.w2.log_value(t);
    const double g1 = s.w1.log_derivative(t);
    const double gb = s.beta.log_derivative(t);
    const double g2 = s.w2.log_derivative(t);

    AngleState out;
    const ScaledPair theta_pair(l1, lb);
    out.theta = theta_pair.angle();
    out.theta_dot = theta_pair.angle_rate(g1, gb);

    // rho = sqrt(W1^2 + (n+1) beta^2), the denominator of tan(phi).
    double log_rho = -std::numeric_limits<double>::infinity();
    double g_rho = 0.0;
    if (!theta_pair.vanishes()) {
        const double a2 = theta_pair.first * theta_pair.first;
        const double c2 = theta_pair.second * theta_pair.second;
        log_rho = theta_pair.log_scale + 0.5 * std::log(a2 + c2);
        g_rho = (a2 * g1 + c2 * gb) / (a2 + c2);
    }
    const ScaledPair phi_pair(l2, log_rho);
    out.phi = phi_pair.angle();
    out.phi_dot = phi_pair.angle_rate(g2, g_rho);
    return out;
}

} // namespace

CouplingMatrix coupling_matrix(double w1, double w2, double beta, int n) {
    CouplingMatrix m;
    m.n = n;
    const double cavity = std::sqrt(static_cast<double>(n + 1)) * beta;
    m.entries(0, 1) = m.entries(1, 0) = w1;
    m.entries(1, 2) = m.entries(2, 1) = w2;
    m.entries(1, 3) = m.entries(3, 1) = cavity;
    return m;
}

CouplingMatrix coupling_matrix(const PulseSchedule& s, double t) {
    return coupling_matrix(s.w1.value(t), s.w2.value(t), s.beta.value(t), s.n);
}

double rabi_frequency(const PulseSchedule& s, double t) {
    const double w1 = s.w1.value(t);
    const double w2 = s.w2.value(t);
    const double b = s.beta.value(t);
    return std::sqrt(w1 * w1 + w2 * w2 + static_cast<double>(s.n + 1) * b * b);
}

MixingAngles mixing_angles(double w1, double w2, double beta, int n) {
    const double cavity = std::sqrt(static_cast<double>(n + 1)) * beta;
    const double rho = std::hypot(w1, cavity);
    return {std::atan2(w1, cavity), std::atan2(w2, rho), std::hypot(w2, rho)};
}

MixingAngles mixing_angles(const PulseSchedule& s, double t) {
    const AngleState a = angle_state(s, t);
    return {a.theta, a.phi, rabi_frequency(s, t)};
}

AngleRates angle_rates(const PulseSchedule& s, double t) {
    const AngleState a = angle_state(s, t);
    return {a.theta_dot, a.phi_dot};
}

} // namespace fockstir
