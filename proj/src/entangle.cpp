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
#include "fockstir/entangle.hpp"

#include "fockstir/errors.hpp"
#include "fockstir/model.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace fockstir {

JointState::JointState(int n_max) : n_max_(n_max) {
    if (n_max < 0) {
        throw ConfigError("photon truncation n_max must be >= 0");
    }
    amplitudes_ = Eigen::VectorXcd::Zero(16 * (n_max + 1));
}

JointState JointState::product(int atom1, int atom2, int photons, int n_max) {
    JointState s(n_max);
    s.at(atom1, atom2, photons) = 1.0;
    return s;
}

cplx& JointState::at(int atom1, int atom2, int photons) {
    return amplitudes_(((atom1 - 1) * 4 + (atom2 - 1)) * (n_max_ + 1) + photons);
}

cplx JointState::at(int atom1, int atom2, int photons) const {
    return amplitudes_(((atom1 - 1) * 4 + (atom2 - 1)) * (n_max_ + 1) + photons);
}

double JointState::norm2() const { return amplitudes_.squaredNorm(); }

double fidelity(const JointState& a, const JointState& b) {
    if (a.n_max() != b.n_max()) {
        std::ostringstream msg;
        msg << "fidelity of states with different photon truncations (" << a.n_max() << " vs " << b.n_max() << ")";
        throw ConfigError(msg.str());
    }
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

namespace {

// Rows index the left side of the cut, columns the right.
Eigen::MatrixXcd reshape_for_cut(const JointState& s, Cut cut) {
    const int photons = s.n_max() + 1;
    if (cut == Cut::Atom1VsRest) {
        Eigen::MatrixXcd m(4, 4 * photons);
        for (int a1 = 1; a1 <= 4; ++a1) {
            for (int a2 = 1; a2 <= 4; ++a2) {
                for (int n = 0; n < photons; ++n) {
                    m(a1 - 1, (a2 - 1) * photons + n) = s.at(a1, a2, n);
                }
            }
        }
        return m;
    }
    Eigen::MatrixXcd m(4 * photons, 4);
    for (int a1 = 1; a1 <= 4; ++a1) {
        for (int n = 0; n < photons; ++n) {
            for (int a2 = 1; a2 <= 4; ++a2) {
                m((a1 - 1) * photons + n, a2 - 1) = s.at(a1, a2, n);
            }
        }
    }
    return m;
}

Eigen::MatrixXcd cavity_density(const JointState& s) {
    const int photons = s.n_max() + 1;
    Eigen::MatrixXcd psi(16, photons);
    for (int a1 = 1; a1 <= 4; ++a1) {
        for (int a2 = 1; a2 <= 4; ++a2) {
            for (int n = 0; n < photons; ++n) {
                psi((a1 - 1) * 4 + (a2 - 1), n) = s.at(a1, a2, n);
            }
        }
    }
    // rho(n, m) = sum over atoms of psi(n) conj(psi(m))
    return psi.transpose() * psi.conjugate();
}

} // namespace

double schmidt_entropy(const JointState& s, Cut cut) {
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(reshape_for_cut(s, cut));
    double entropy = 0.0;
    for (const double sigma : svd.singularValues()) {
        const double p = sigma * sigma;
        if (p > 1e-300) {
            entropy -= p * std::log2(p);
        }
    }
    return std::max(entropy, 0.0);
}

std::vector<double> photon_distribution(const JointState& s) {
    std::vector<double> p(s.n_max() + 1, 0.0);
    for (int a1 = 1; a1 <= 4; ++a1) {
        for (int a2 = 1; a2 <= 4; ++a2) {
            for (int n = 0; n <= s.n_max(); ++n) {
                p[n] += std::norm(s.at(a1, a2, n));
            }
        }
    }
    return p;
}

double cavity_mean_photons(const JointState& s) {
    const std::vector<double> p = photon_distribution(s);
    double mean = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        mean += static_cast<double>(n) * p[n];
    }
    return mean;
}

double cavity_purity(const JointState& s) {
    const Eigen::MatrixXcd rho = cavity_density(s);
    return (rho * rho).trace().real();
}

double mean_excitation_number(const JointState& s) {
    double total = 0.0;
    for (int a1 = 1; a1 <= 4; ++a1) {
        for (int a2 = 1; a2 <= 4; ++a2) {
            for (int n = 0; n <= s.n_max(); ++n) {
                const int excitations = n + (a1 != 4 ? 1 : 0) + (a2 != 4 ? 1 : 0);
                total += excitations * std::norm(s.at(a1, a2, n));
            }
        }
    }
    return total;
}

JointState entanglement_target(int n_max) {
    JointState t(n_max);
    t.at(1, 4, 0) = 0.5;
    t.at(3, 4, 0) = -0.5;
    t.at(4, 1, 0) = -0.5;
    t.at(4, 3, 0) = 0.5;
    return t;
}

EntanglementReport entanglement_report(const JointState& s) {
    EntanglementReport r;
    r.fidelity_to_target = fidelity(s, entanglement_target(s.n_max()));
    r.schmidt_entropy_atom1 = schmidt_entropy(s, Cut::Atom1VsRest);
    r.schmidt_entropy_atom2 = schmidt_entropy(s, Cut::Atom2VsRest);
    r.cavity_mean_photons = cavity_mean_photons(s);
    r.cavity_purity = cavity_purity(s);
    return r;
}

StageResult propagate_stage(JointState& state, const PulseSchedule& schedule, Atom atom,
                            const IntegratorOptions& options) {
    const int n_max = state.n_max();
    auto amp = [&](int active, int spectator, int n) -> cplx& {
        return atom == Atom::First ? state.at(active, spectator, n) : state.at(spectator, active, n);
    };

    StageResult result;
    for (int n = 0; n <= n_max; ++n) {
        // Manifold n: {|1,n>, |2,n>, |3,n>, |4,n+1>} of the active atom.
        const bool top = n == n_max;
        double occupied = 0.0;
        for (int j = 1; j <= 4; ++j) {
            for (int i = 1; i <= 3; ++i) {
                occupied += std::norm(amp(i, j, n));
            }
            if (!top) {
                occupied += std::norm(amp(4, j, n + 1));
            }
        }
        if (occupied == 0.0) {
            continue;
        }
        PulseSchedule manifold = schedule;
        manifold.n = n;
        const Eigen::Matrix4cd u = propagator(manifold, options);
        for (int j = 1; j <= 4; ++j) {
            Eigen::Vector4cd v(amp(1, j, n), amp(2, j, n), amp(3, j, n), top ? cplx{} : amp(4, j, n + 1));
            const Eigen::Vector4cd w = u * v;
            for (int i = 1; i <= 3; ++i) {
                amp(i, j, n) = w(i - 1);
            }
            if (top) {
                result.leaked_norm += std::norm(w(3));
            } else {
                amp(4, j, n + 1) = w(3);
            }
        }
    }
    return result;
}

namespace {

bool same_envelope(const PulseEnvelope& a, const PulseEnvelope& b) {
    auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)}); };
    return close(a.amplitude, b.amplitude) && close(a.center, b.center) && close(a.width, b.width);
}

void expect_angle(const char* stage, const char* what, double achieved, double expected) {
    if (std::abs(achieved - expected) > kBoundaryAngleTol) {
        std::ostringstream msg;
        msg << stage << " ordering violated: " << what << " is " << achieved << ", expected " << expected;
        throw ConfigError(msg.str());
    }
}

} // namespace

void validate_protocol(const PulseSchedule& stage1, const PulseSchedule& stage2) {
    constexpr double half_pi = std::numbers::pi / 2;
    constexpr double quarter_pi = std::numbers::pi / 4;
    for (const auto* stage : {&stage1, &stage2}) {
        validate_schedule(*stage);
        if (!same_envelope(stage->w1, stage->w2)) {
            throw ConfigError(std::string(stage == &stage1 ? "stage1" : "stage2") +
                              ": protocol stages need equal laser envelopes w1 = w2");
        }
    }
    PulseSchedule s1 = stage1;
    PulseSchedule s2 = stage2;
    s1.n = s2.n = 0;
    // Stage 1: cavity first, lasers last.
    const MixingAngles a = mixing_angles(s1, s1.t_start);
    const MixingAngles b = mixing_angles(s1, s1.t_end);
    expect_angle("stage1", "theta(t_start)", a.theta, 0.0);
    expect_angle("stage1", "theta(t_end)", b.theta, half_pi);
    expect_angle("stage1", "phi(t_end)", b.phi, quarter_pi);
    // Stage 2: lasers first, cavity last.
    const MixingAngles c = mixing_angles(s2, s2.t_start);
    const MixingAngles d = mixing_angles(s2, s2.t_end);
    expect_angle("stage2", "theta(t_start)", c.theta, half_pi);
    expect_angle("stage2", "phi(t_start)", c.phi, quarter_pi);
    expect_angle("stage2", "theta(t_end)", d.theta, 0.0);
}

ProtocolResult run_protocol(const PulseSchedule& stage1, const PulseSchedule& stage2, int n_max,
                            const IntegratorOptions& options) {
    if (n_max < 0) {
        throw ConfigError("photon truncation n_max must be >= 0");
    }
    validate_protocol(stage1, stage2);

    JointState state = JointState::product(1, 4, 0, n_max);
    auto check_leak = [n_max](const char* stage, double leaked) {
        if (leaked > kLeakTolerance) {
            std::ostringstream msg;
            msg << stage << " pushed norm " << leaked << " above the photon truncation n_max=" << n_max;
            throw NumericalError(msg.str());
        }
    };
    const StageResult first = propagate_stage(state, stage1, Atom::First, options);
    check_leak("stage1", first.leaked_norm);
    const StageResult second = propagate_stage(state, stage2, Atom::Second, options);
    check_leak("stage2", second.leaked_norm);

    ProtocolResult out{std::move(state), {}, first.leaked_norm, second.leaked_norm};
    out.report = entanglement_report(out.state);
    return out;
}

std::pair<PulseSchedule, PulseSchedule> protocol_schedules(double laser_amplitude, double beta_amplitude,
                                                           double width, double delay) {
    const PulseEnvelope early_laser{laser_amplitude, -0.5 * delay, width};
    const PulseEnvelope late_laser{laser_amplitude, 0.5 * delay, width};
    const PulseEnvelope early_cavity{beta_amplitude, -0.5 * delay, width};
    const PulseEnvelope late_cavity{beta_amplitude, 0.5 * delay, width};
    return {make_schedule(late_laser, late_laser, early_cavity, 0),
            make_schedule(early_laser, early_laser, late_cavity, 0)};
}

} // namespace fockstir
