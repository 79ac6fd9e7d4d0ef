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

// Dormand-Prince 5(4) with PI step-size control and the standard
// fourth-order continuous extension. State is any Eigen dense complex type.

#include "fockstir/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

namespace fockstir::detail {

struct Dopri5Options {
    double tol = 1e-10;
    std::size_t max_steps = 5'000'000;
};

struct Dopri5Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/// One accepted step [t0, t0 + h] with its interpolant.
template <class State>
struct DenseSegment {
    double t0 = 0.0;
    double h = 0.0;
    State r1, r2, r3, r4, r5;

    State at(double t) const {
        const double s = (t - t0) / h;
        const double s1 = 1.0 - s;
        return r1 + s * (r2 + s1 * (r3 + s * (r4 + s1 * r5)));
    }
    double t1() const { return t0 + h; }
    const State& start() const { return r1; }
};

template <class State>
double scaled_error(const State& err, const State& y0, const State& y1, double tol) {
    const auto scale = tol + tol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array();
    const auto ratio = err.cwiseAbs().array() / scale;
    return std::sqrt(ratio.square().sum() / static_cast<double>(err.size()));
}

/**
 * Integrates y' = f(t, y) from t0 to t1 and hands every accepted step to
 * on_step(const DenseSegment<State>&, const State& y_end). Returns the
 * state at t1.
 */
template <class State, class Rhs, class OnStep>
State dopri5(Rhs&& f, State y, double t0, double t1, const Dopri5Options& opts, OnStep&& on_step,
             Dopri5Stats* stats = nullptr) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                     a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    // PI controller constants.
    constexpr double beta = 0.04;
    constexpr double expo1 = 0.2 - beta * 0.75;
    constexpr double safe = 0.9;
    constexpr double shrink_max = 5.0;
    constexpr double grow_max = 10.0;

    Dopri5Stats local;
    Dopri5Stats& st = stats ? *stats : local;

    const double span = t1 - t0;
    if (span <= 0.0) {
        return y;
    }

    State k1 = f(t0, y);
    double h;
    {
        const double d0 = y.norm();
        const double dd = k1.norm();
        h = (d0 < 1e-5 || dd < 1e-5) ? 1e-6 : 0.01 * d0 / dd;
        h = std::min(h, span);
    }

    double t = t0;
    double fac_old = 1e-4;
    bool last_rejected = false;
    std::size_t steps = 0;
    State y1, k2, k3, k4, k5, k6, k7, err;
    DenseSegment<State> seg;

    while (t < t1) {
        if (++steps > opts.max_steps) {
            std::ostringstream msg;
            msg << "integrator exceeded " << opts.max_steps << " steps at t=" << t;
            throw NumericalError(msg.str());
        }
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
            std::ostringstream msg;
            msg << "step size underflow (h=" << h << ") at t=" << t << "; the system is too stiff for tol=" << opts.tol;
            throw NumericalError(msg.str());
        }
        bool final_step = false;
        if (t + h >= t1) {
            h = t1 - t;
            final_step = true;
        }

        k2 = f(t + c2 * h, (y + h * (a21 * k1)).eval());
        k3 = f(t + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval());
        k4 = f(t + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
        k5 = f(t + c5 * h, (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
        k6 = f(t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
        y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        k7 = f(t + h, y1);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double e = scaled_error(err, y, y1, opts.tol);
        const double fac11 = std::pow(e, expo1);
        if (e <= 1.0) {
            double fac = fac11 / std::pow(fac_old, beta);
            fac = std::clamp(fac / safe, 1.0 / grow_max, shrink_max);
            double h_new = h / fac;
            if (last_rejected) {
                h_new = std::min(h_new, h);
            }
            fac_old = std::max(e, 1e-4);

            seg.t0 = t;
            seg.h = h;
            seg.r1 = y;
            seg.r2 = y1 - y;
            seg.r3 = h * k1 - seg.r2;
            seg.r4 = seg.r2 - h * k7 - seg.r3;
            seg.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

            t = final_step ? t1 : t + h;
            y = y1;
            k1 = k7;
            ++st.accepted;
            last_rejected = false;
            on_step(static_cast<const DenseSegment<State>&>(seg), static_cast<const State&>(y));
            h = h_new;
        } else {
            h /= std::min(shrink_max, fac11 / safe);
            ++st.rejected;
            last_rejected = true;
        }
    }
    return y;
}

} // namespace fockstir::detail
