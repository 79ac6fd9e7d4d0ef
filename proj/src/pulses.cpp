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
#include "fockstir/pulses.hpp"

#include "fockstir/errors.hpp"
#include "fockstir/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fockstir {

double PulseEnvelope::value(double t) const {
    const double x = (t - center) / width;
    return amplitude * std::exp(-x * x);
}

double PulseEnvelope::derivative(double t) const { return value(t) * log_derivative(t); }

double PulseEnvelope::log_value(double t) const {
    if (amplitude <= 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    const double x = (t - center) / width;
    return std::log(amplitude) - x * x;
}

double PulseEnvelope::log_derivative(double t) const { return -2.0 * (t - center) / (width * width); }

double envelope_value(const PulseEnvelope& env, double t) { return env.value(t); }

std::pair<double, double> default_window(const PulseEnvelope& w1, const PulseEnvelope& w2,
                                         const PulseEnvelope& beta) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double max_width = 0.0;
    for (const PulseEnvelope* env : {&w1, &w2, &beta}) {
        if (env->is_zero()) {
            continue;
        }
        lo = std::min(lo, env->center);
        hi = std::max(hi, env->center);
        max_width = std::max(max_width, env->width);
    }
    if (max_width == 0.0) {
        // Nothing switched on: fall back to the centers and widths as given.
        lo = std::min({w1.center, w2.center, beta.center});
        hi = std::max({w1.center, w2.center, beta.center});
        max_width = std::max({w1.width, w2.width, beta.width});
    }
    return {lo - kWindowPadding * max_width, hi + kWindowPadding * max_width};
}

PulseSchedule make_schedule(const PulseEnvelope& w1, const PulseEnvelope& w2, const PulseEnvelope& beta,
                            int n) {
    const auto [t0, t1] = default_window(w1, w2, beta);
    return PulseSchedule{w1, w2, beta, n, t0, t1};
}

void validate_schedule(const PulseSchedule& s, double boundary_floor) {
    auto fail = [](const std::string& what) { throw ConfigError("invalid schedule: " + what); };
    const std::pair<const char*, const PulseEnvelope*> envelopes[] = {
        {"w1", &s.w1}, {"w2", &s.w2}, {"beta", &s.beta}};
    double max_amplitude = 0.0;
    for (const auto& [name, env] : envelopes) {
        if (!std::isfinite(env->amplitude) || env->amplitude < 0.0) {
            fail(std::string(name) + ".amplitude must be finite and non-negative");
        }
        if (!std::isfinite(env->width) || env->width <= 0.0) {
            fail(std::string(name) + ".width must be positive");
        }
        if (!std::isfinite(env->center)) {
            fail(std::string(name) + ".center must be finite");
        }
        max_amplitude = std::max(max_amplitude, env->amplitude);
    }
    if (s.n < 0) {
        fail("n must be >= 0");
    }
    if (!std::isfinite(s.t_start) || !std::isfinite(s.t_end) || !(s.t_start < s.t_end)) {
        fail("t_start must be < t_end");
    }
    const double floor = boundary_floor * max_amplitude;
    for (const auto& [name, env] : envelopes) {
        for (const double t : {s.t_start, s.t_end}) {
            const double v = env->value(t);
            if (v >= floor && v > 0.0) {
                std::ostringstream msg;
                msg << name << " is still on at the window edge t=" << t << " (value " << v << ", floor "
                    << floor << ")";
                fail(msg.str());
            }
        }
    }
}

PulseSchedule reference_schedule(double delay) {
    const PulseEnvelope w1{20.0, 0.0, 10.0};
    const PulseEnvelope w2{20.0, delay, 20.0};
    const PulseEnvelope beta{4.0, -10.0, 20.0};
    return make_schedule(w1, w2, beta, 0);
}

PulseSchedule with_delay(PulseSchedule s, double delay) {
    s.w2.center = s.w1.center + delay;
    const auto [t0, t1] = default_window(s.w1, s.w2, s.beta);
    s.t_start = t0;
    s.t_end = t1;
    return s;
}

double effective_pulse_area(const PulseSchedule& s, const QuadratureOptions& options) {
    return integrate([&s](double t) { return rabi_frequency(s, t); }, s.t_start, s.t_end, options).value;
}

bool OrderingReport::passed() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.passed; });
}

OrderingReport schedule_ordering_check(const PulseSchedule& s, double angle_tol) {
    const MixingAngles start = mixing_angles(s, s.t_start);
    const MixingAngles end = mixing_angles(s, s.t_end);
    OrderingReport report;
    report.theta_start = start.theta;
    report.phi_start = start.phi;
    report.theta_end = end.theta;
    report.phi_end = end.phi;
    auto check = [&](std::string name, double achieved, double expected) {
        report.conditions.push_back({std::move(name), achieved, expected, std::abs(achieved - expected) <= angle_tol});
    };
    check("cavity on before w1 (theta(t_start) = 0)", start.theta, 0.0);
    check("cavity off after w1 (theta(t_end) = 0)", end.theta, 0.0);
    check("w2 off last (phi(t_end) = pi/2)", end.phi, std::numbers::pi / 2);
    return report;
}

} // namespace fockstir
