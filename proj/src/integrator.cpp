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
#include "fockstir/integrator.hpp"

#include "fockstir/adiabatic.hpp"
#include "fockstir/detail/dopri5.hpp"
#include "fockstir/errors.hpp"
#include "fockstir/model.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace fockstir {

namespace {

const cplx kMinusI(0.0, -1.0);

void check_options(const IntegratorOptions& options) {
    if (!(options.tol >= kMinTol && options.tol <= kMaxTol)) {
        std::ostringstream msg;
        msg << "tolerance " << options.tol << " outside [" << kMinTol << ", " << kMaxTol << "]";
        throw ConfigError(msg.str());
    }
    if (options.grid_points < 2) {
        throw ConfigError("reporting grid needs at least 2 points");
    }
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t points) {
    std::vector<double> grid(points);
    const double dt = (t1 - t0) / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) {
        grid[k] = t0 + dt * static_cast<double>(k);
    }
    grid.back() = t1;
    return grid;
}

// Runs the stepper and samples the dense output on a uniform grid.
template <class Rhs>
Trajectory sample_trajectory(Rhs&& rhs, const PulseSchedule& s, const Eigen::Vector4cd& y0,
                             const IntegratorOptions& options) {
    Trajectory traj;
    traj.times = uniform_grid(s.t_start, s.t_end, options.grid_points);
    traj.states.reserve(traj.times.size());

    TrajectoryDiagnostics& diag = traj.diagnostics;
    auto track = [&](const Eigen::Vector4cd& y) {
        diag.max_p2 = std::max(diag.max_p2, std::norm(y(1)));
        diag.max_norm_drift = std::max(diag.max_norm_drift, std::abs(y.squaredNorm() - 1.0));
    };
    auto record = [&](const Eigen::Vector4cd& y) {
        traj.states.push_back(AmplitudeBlock{y, s.n});
        track(y);
    };

    record(y0);
    std::size_t next = 1;
    const std::size_t last_index = traj.times.size() - 1;
    auto on_step = [&](const detail::DenseSegment<Eigen::Vector4cd>& seg, const Eigen::Vector4cd& y_end) {
        track(y_end);
        while (next < last_index && traj.times[next] < seg.t1()) {
            record(seg.at(traj.times[next]));
            ++next;
        }
    };

    detail::Dopri5Stats stats;
    const Eigen::Vector4cd y_final = detail::dopri5(
        rhs, y0, s.t_start, s.t_end, detail::Dopri5Options{options.tol, options.max_steps}, on_step, &stats);
    while (next < last_index) {
        // Only reachable when rounding left grid points just past the final step.
        record(y_final);
        ++next;
    }
    record(y_final);
    diag.accepted_steps = stats.accepted;
    diag.rejected_steps = stats.rejected;

    for (auto& series : traj.populations) {
        series.resize(traj.states.size());
    }
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        for (int i = 0; i < 4; ++i) {
            traj.populations[i][k] = std::norm(traj.states[k].b(i));
        }
    }
    return traj;
}

void fill_adiabaticity(const PulseSchedule& s, TrajectoryDiagnostics& diag) {
    const AdiabaticityReport report = adiabaticity_report(s);
    diag.max_theta_ratio = report.max_theta_ratio;
    diag.max_phi_ratio = report.max_phi_ratio;
}

} // namespace

double Trajectory::norm_drift(std::size_t k) const { return std::abs(states[k].norm2() - 1.0); }

Trajectory integrate_schrodinger(const PulseSchedule& s, const AmplitudeBlock& b0, const IntegratorOptions& options) {
    validate_schedule(s);
    check_options(options);
    if (std::abs(b0.norm2() - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "initial amplitudes must be normalised, |b0|^2 = " << b0.norm2();
        throw ConfigError(msg.str());
    }
    auto rhs = [&s](double t, const Eigen::Vector4cd& y) -> Eigen::Vector4cd {
        return kMinusI * (coupling_matrix(s, t).entries.cast<cplx>() * y);
    };
    Trajectory traj = sample_trajectory(rhs, s, b0.b, options);
    fill_adiabaticity(s, traj.diagnostics);
    return traj;
}

Eigen::Matrix4cd propagator(const PulseSchedule& s, const IntegratorOptions& options) {
    validate_schedule(s);
    check_options(options);
    auto rhs = [&s](double t, const Eigen::Matrix4cd& y) -> Eigen::Matrix4cd {
        return kMinusI * (coupling_matrix(s, t).entries.cast<cplx>() * y);
    };
    return detail::dopri5(rhs, Eigen::Matrix4cd::Identity().eval(), s.t_start, s.t_end,
                          detail::Dopri5Options{options.tol, options.max_steps},
                          [](const auto&, const auto&) {});
}

Trajectory integrate_in_adiabatic_frame(const PulseSchedule& s, const Eigen::Vector4cd& c0,
                                        const IntegratorOptions& options) {
    validate_schedule(s);
    check_options(options);
    if (std::abs(c0.squaredNorm() - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "initial coefficients must be normalised, |c0|^2 = " << c0.squaredNorm();
        throw ConfigError(msg.str());
    }
    auto rhs = [&s](double t, const Eigen::Vector4cd& y) -> Eigen::Vector4cd {
        return kMinusI * (effective_coupling(s, t, std::numeric_limits<double>::infinity()).matrix * y);
    };
    Trajectory traj = sample_trajectory(rhs, s, c0, options);
    fill_adiabaticity(s, traj.diagnostics);
    return traj;
}

std::vector<AmplitudeBlock> to_lab_frame(const PulseSchedule& s, const Trajectory& adiabatic) {
    std::vector<AmplitudeBlock> out;
    out.reserve(adiabatic.states.size());
    for (std::size_t k = 0; k < adiabatic.states.size(); ++k) {
        const Eigen::Matrix4d u = transform_matrix(mixing_angles(s, adiabatic.times[k]));
        out.push_back(AmplitudeBlock{u.cast<cplx>() * adiabatic.states[k].b, s.n});
    }
    return out;
}

AdiabaticityReport adiabaticity_report(const PulseSchedule& s, double threshold) {
    AdiabaticityReport report;
    report.threshold = threshold;
    const std::vector<double> grid = uniform_grid(s.t_start, s.t_end, kReportSamples);

    std::vector<AngleRates> rates(grid.size());
    std::vector<double> omega(grid.size());
    double peak_theta = 0.0;
    double peak_phi = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        rates[k] = angle_rates(s, grid[k]);
        omega[k] = rabi_frequency(s, grid[k]);
        peak_theta = std::max(peak_theta, std::abs(rates[k].theta_dot));
        peak_phi = std::max(peak_phi, std::abs(rates[k].phi_dot));
    }

    auto ratio = [](double rate, double om) {
        if (om > 0.0) {
            return rate / om;
        }
        return std::numeric_limits<double>::infinity();
    };
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double td = std::abs(rates[k].theta_dot);
        const double pd = std::abs(rates[k].phi_dot);
        if (td > 0.0 && td >= kRateFloor * peak_theta) {
            const double r = ratio(td, omega[k]);
            if (r > report.max_theta_ratio) {
                report.max_theta_ratio = r;
                report.t_theta_max = grid[k];
            }
        }
        if (pd > 0.0 && pd >= kRateFloor * peak_phi) {
            const double r = ratio(pd, omega[k]);
            if (r > report.max_phi_ratio) {
                report.max_phi_ratio = r;
                report.t_phi_max = grid[k];
            }
        }
    }
    report.effective_area = effective_pulse_area(s);
    report.flagged = report.max_ratio() > threshold;
    return report;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    out << "t,p1,p2,p3,p4,norm_drift\n";
    char line[256];
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", trajectory.times[k],
                      trajectory.populations[0][k], trajectory.populations[1][k], trajectory.populations[2][k],
                      trajectory.populations[3][k], trajectory.norm_drift(k));
        out << line;
    }
}

} // namespace fockstir
